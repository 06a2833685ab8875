//! Goodness of fit between measured histograms and target PMFs.
//!
//! Two G-statistic conventions are provided. [`g_statistic_counts`] is the
//! textbook likelihood-ratio statistic on raw counts. [`g_statistic_paper`]
//! is `2·KL(empirical‖theory)` with no shot factor; paired with
//! `chi2_sf(·, 1)` it reproduces the tabulated (G, p) values this crate
//! benchmarks against, and it drives shot selection.

mod divergence;
mod gamma;
mod report;
mod shots;

use core::fmt;

pub use divergence::{
    chi_square_statistic, g_statistic_counts, g_statistic_paper, js_divergence, kl_divergence,
    PROBABILITY_SUM_TOLERANCE,
};
pub use gamma::{chi2_sf, regularized_gamma_p, regularized_gamma_q};
pub use report::{build_report, build_report_with, DivergenceReport, ReportOptions};
pub use shots::{round_seed, select_shots, ShotSelection, ShotSelectionConfig};

use crate::sim::SimError;

#[derive(Debug, Clone, PartialEq)]
pub enum StatsError {
    Shape { expected: usize, got: usize },
    /// Entries negative, non-finite, or not summing to 1.
    InvalidProbabilities,
    /// An observation fell in a bin the theory gives zero probability.
    InfiniteStatistic,
    CountMismatch { sum: u64, shots: u64 },
    ShotSelectionDiverged { cap: u64 },
    Sampling(SimError),
}

impl fmt::Display for StatsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatsError::Shape { expected, got } => write!(f, "expected {expected} bins, got {got}"),
            StatsError::InvalidProbabilities => {
                f.write_str("probability vector must be non-negative and sum to 1")
            }
            StatsError::InfiniteStatistic => {
                f.write_str("statistic is infinite: observation in a zero-probability bin")
            }
            StatsError::CountMismatch { sum, shots } => {
                write!(f, "counts sum to {sum} but shots is {shots}")
            }
            StatsError::ShotSelectionDiverged { cap } => {
                write!(f, "shot selection did not converge below the cap of {cap} shots")
            }
            StatsError::Sampling(e) => write!(f, "sampling failed: {e}"),
        }
    }
}

impl core::error::Error for StatsError {}

impl From<SimError> for StatsError {
    fn from(e: SimError) -> Self {
        StatsError::Sampling(e)
    }
}
