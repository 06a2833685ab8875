use super::{g_statistic_paper, StatsError};
use crate::sim::{Histogram, SimError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotSelectionConfig {
    pub start: u64,
    /// Stop once `g_paper` is strictly below this.
    pub threshold: f64,
    /// Shot multiplier between rounds.
    pub growth: f64,
    /// Multiplier applied to the first passing count.
    pub safety: f64,
    /// Largest shot count that will be tried.
    pub cap: u64,
}

impl Default for ShotSelectionConfig {
    fn default() -> Self {
        Self { start: 1000, threshold: 1e-3, growth: 2.0, safety: 1.5, cap: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotSelection {
    /// `ceil(passing_shots · safety)`.
    pub shots: u64,
    pub passing_shots: u64,
    /// G statistic of the passing round.
    pub g_paper: f64,
    pub rounds: u32,
    /// Histogram of the passing round.
    pub histogram: Histogram,
}

/// Seed used for round `round` of a selection keyed by `master_seed`.
pub fn round_seed(master_seed: u64, round: u32) -> u64 {
    // splitmix64 finalizer
    let mut z = master_seed.wrapping_add((round as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Grow the shot count until sampling error is negligible.
///
/// Starting from `config.start`, each round draws `sampler(shots, seed)` with
/// a seed derived from `master_seed`, and compares the empirical frequencies
/// with `pmf` via [`g_statistic_paper`]. The first round below the threshold
/// ends the search and the count is scaled by `config.safety`.
pub fn select_shots<F>(
    pmf: &[f64],
    mut sampler: F,
    config: &ShotSelectionConfig,
    master_seed: u64,
) -> Result<ShotSelection, StatsError>
where
    F: FnMut(u64, u64) -> Result<Histogram, SimError>,
{
    super::divergence::check_probabilities(pmf)?;
    let mut shots = config.start.max(1);
    let mut round = 0;
    while shots <= config.cap {
        let histogram = sampler(shots, round_seed(master_seed, round))?;
        if histogram.len() != pmf.len() {
            return Err(StatsError::Shape { expected: pmf.len(), got: histogram.len() });
        }
        round += 1;
        let g = match g_statistic_paper(&histogram.frequencies(), pmf) {
            Ok(g) => g,
            Err(StatsError::InfiniteStatistic) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        if g < config.threshold {
            return Ok(ShotSelection {
                shots: libm::ceil(shots as f64 * config.safety) as u64,
                passing_shots: shots,
                g_paper: g,
                rounds: round,
                histogram,
            });
        }
        let next = libm::ceil(shots as f64 * config.growth) as u64;
        shots = next.max(shots + 1);
    }
    Err(StatsError::ShotSelectionDiverged { cap: config.cap })
}
