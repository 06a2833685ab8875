use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{SimError, StateVector};

/// Shots are drawn in chunks; each chunk and role gets its own ChaCha
/// stream derived from the master seed, so results depend only on
/// `(seed, shot index)` and not on how chunks are scheduled.
pub(crate) const CHUNK_SHOTS: u64 = 4096;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum StreamRole {
    Measure = 0,
    GateNoise = 1,
    Readout = 2,
}

pub(crate) fn stream(seed: u64, chunk: u64, role: StreamRole) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((chunk << 2) | role as u64);
    rng
}

/// Uniform draw in `[0, 1)` with 53 random bits.
#[inline]
pub(crate) fn unit(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Measurement counts per basis state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
    shots: u64,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self, SimError> {
        let shots = counts.iter().sum();
        if shots == 0 {
            return Err(SimError::EmptySample);
        }
        Ok(Self { counts, shots })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Empirical probabilities `countᵢ / shots`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.shots as f64;
        self.counts.iter().map(|c| *c as f64 / n).collect()
    }
}

/// Cumulative distribution for inverse-CDF draws.
#[derive(Debug, Clone)]
pub(crate) struct Cdf {
    cumulative: Vec<f64>,
}

impl Cdf {
    pub(crate) fn new(probabilities: &[f64]) -> Self {
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Self { cumulative }
    }

    #[inline]
    pub(crate) fn draw(&self, u: f64) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let target = u * total;
        self.cumulative.partition_point(|c| *c <= target).min(self.cumulative.len() - 1)
    }
}

/// Multinomial draw of `shots` measurements from `|amplitude|²`.
pub fn sample(sv: &StateVector, shots: u64, seed: u64) -> Result<Histogram, SimError> {
    if shots == 0 {
        return Err(SimError::EmptySample);
    }
    let cdf = Cdf::new(&sv.probabilities());
    let mut counts = alloc::vec![0u64; sv.amplitudes().len()];
    for chunk in 0..shots.div_ceil(CHUNK_SHOTS) {
        let mut rng = stream(seed, chunk, StreamRole::Measure);
        let in_chunk = CHUNK_SHOTS.min(shots - chunk * CHUNK_SHOTS);
        for _ in 0..in_chunk {
            counts[cdf.draw(unit(&mut rng))] += 1;
        }
    }
    Ok(Histogram { counts, shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn sv(amps: &[f64]) -> StateVector {
        StateVector::from_amplitudes(amps.iter().map(|a| Complex64::new(*a, 0.0)).collect()).unwrap()
    }

    #[test]
    fn basis_state_is_deterministic() {
        let h = sample(&sv(&[1.0, 0.0]), 1000, 3).unwrap();
        assert_eq!(h.counts(), [1000, 0]);
    }

    #[test]
    fn fair_coin_within_three_sigma() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let h = sample(&sv(&[s, s]), 1_000_000, 11).unwrap();
        let sigma = libm::sqrt(1e6 * 0.25);
        assert!((h.counts()[0] as f64 - 500_000.0).abs() < 3.0 * sigma);
        assert_eq!(h.shots(), 1_000_000);
    }

    #[test]
    fn same_seed_same_counts() {
        let a = sv(&[0.6, 0.0, 0.0, 0.8]);
        assert_eq!(sample(&a, 12_345, 99).unwrap(), sample(&a, 12_345, 99).unwrap());
        assert_ne!(sample(&a, 12_345, 99).unwrap(), sample(&a, 12_345, 100).unwrap());
    }

    #[test]
    fn zero_shots_rejected() {
        assert_eq!(sample(&sv(&[1.0, 0.0]), 0, 0), Err(SimError::EmptySample));
    }

    #[test]
    fn zero_probability_states_never_drawn() {
        let cdf = Cdf::new(&[0.0, 0.5, 0.0, 0.5, 0.0]);
        for u in [0.0, 0.25, 0.4999999, 0.5, 0.75, 0.9999999999] {
            let k = cdf.draw(u);
            assert!(k == 1 || k == 3, "u={u} drew {k}");
        }
    }
}
