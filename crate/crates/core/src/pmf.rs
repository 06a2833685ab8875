//! PMF tables, built-in generators, and amplitude normalization.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Tolerance on `Σ aᵢ² = 1` accepted by [`AmplitudeVector::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PmfError {
    /// A height is negative or not finite. `index` is the 0-based bin.
    Domain { index: usize },
    /// The table has no bins.
    Empty,
    /// Every height is zero, so no distribution can be formed.
    DegenerateDistribution,
    /// Synthesis needs `2^n` bins.
    NotPowerOfTwo { bins: usize },
    UnsupportedDistribution,
    /// An amplitude vector whose squared norm is not 1.
    NotNormalized { norm_sq: f64 },
}

impl fmt::Display for PmfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmfError::Domain { index } => {
                write!(f, "bin {index}: height must be finite and non-negative")
            }
            PmfError::Empty => f.write_str("PMF table is empty"),
            PmfError::DegenerateDistribution => f.write_str("all PMF heights are zero"),
            PmfError::NotPowerOfTwo { bins } => write!(
                f,
                "{bins} bins is not a power of two; zero-pad the table to {} bins (--pad-to-pow2)",
                bins.next_power_of_two()
            ),
            PmfError::UnsupportedDistribution => f.write_str(
                "unsupported distribution (expected uniform, binomial, triangle, bimodal_demo or arbitrary_demo)",
            ),
            PmfError::NotNormalized { norm_sq } => {
                write!(f, "amplitudes are not unit norm (sum of squares {norm_sq})")
            }
        }
    }
}

impl core::error::Error for PmfError {}

/// Ordered, non-negative bin heights.
///
/// Heights are unitless; only their ratios matter once normalized. The bin
/// count does not have to be a power of two here, that is checked when a
/// table is normalized for synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfTable {
    heights: Vec<f64>,
}

impl PmfTable {
    pub fn new(heights: Vec<f64>) -> Result<Self, PmfError> {
        if heights.is_empty() {
            return Err(PmfError::Empty);
        }
        if let Some(index) = heights.iter().position(|h| !h.is_finite() || *h < 0.0) {
            return Err(PmfError::Domain { index });
        }
        if heights.iter().all(|h| *h == 0.0) {
            return Err(PmfError::DegenerateDistribution);
        }
        Ok(Self { heights })
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn num_bins(&self) -> usize {
        self.heights.len()
    }

    /// Number of qubits when the bin count is `2^n`.
    pub fn qubits(&self) -> Option<u32> {
        let bins = self.num_bins();
        bins.is_power_of_two().then(|| bins.trailing_zeros())
    }

    /// Append zero-height bins up to the next power of two.
    pub fn pad_to_pow2(&self) -> Self {
        let mut heights = self.heights.clone();
        heights.resize(self.num_bins().next_power_of_two(), 0.0);
        Self { heights }
    }

    /// `heights / Σ heights`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total = kahan_sum(self.heights.iter().copied());
        self.heights.iter().map(|h| h / total).collect()
    }
}

/// How bin heights become amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizationMode {
    /// `aᵢ = xᵢ / ‖x‖₂`; measured probabilities are proportional to `xᵢ²`.
    HeightsAsAmplitudes,
    /// `aᵢ = √(xᵢ / Σ x)`; measured probabilities are proportional to `xᵢ`.
    #[default]
    HeightsAsProbabilities,
}

impl FromStr for NormalizationMode {
    type Err = PmfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "amplitudes" | "heights_as_amplitudes" => Ok(Self::HeightsAsAmplitudes),
            "probabilities" | "heights_as_probabilities" => Ok(Self::HeightsAsProbabilities),
            _ => Err(PmfError::UnsupportedDistribution),
        }
    }
}

/// Unit-norm, non-negative real amplitudes over `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector {
    amplitudes: Vec<f64>,
    qubits: u32,
}

impl AmplitudeVector {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self, PmfError> {
        let bins = amplitudes.len();
        if bins < 2 || !bins.is_power_of_two() {
            return Err(PmfError::NotPowerOfTwo { bins });
        }
        if let Some(index) = amplitudes.iter().position(|a| !a.is_finite() || *a < 0.0) {
            return Err(PmfError::Domain { index });
        }
        let norm_sq = kahan_sum(amplitudes.iter().map(|a| a * a));
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
            return Err(PmfError::NotNormalized { norm_sq });
        }
        Ok(Self { qubits: bins.trailing_zeros(), amplitudes })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Measurement probabilities `aᵢ²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    /// True when every amplitude is identical.
    pub fn is_uniform(&self) -> bool {
        let first = self.amplitudes[0];
        self.amplitudes.iter().all(|a| *a == first)
    }
}

/// Normalize a table into synthesis amplitudes.
pub fn normalize_amplitudes(
    table: &PmfTable,
    mode: NormalizationMode,
) -> Result<AmplitudeVector, PmfError> {
    let bins = table.num_bins();
    if bins < 2 || !bins.is_power_of_two() {
        return Err(PmfError::NotPowerOfTwo { bins });
    }
    let heights = table.heights();
    let amplitudes: Vec<f64> = match mode {
        NormalizationMode::HeightsAsAmplitudes => {
            // Scale first so squaring large heights cannot overflow.
            let max = heights.iter().copied().fold(0.0, f64::max);
            let norm = libm::sqrt(kahan_sum(heights.iter().map(|h| (h / max) * (h / max))));
            if norm == 0.0 {
                return Err(PmfError::DegenerateDistribution);
            }
            heights.iter().map(|h| (h / max) / norm).collect()
        }
        NormalizationMode::HeightsAsProbabilities => {
            let total = kahan_sum(heights.iter().copied());
            if total == 0.0 {
                return Err(PmfError::DegenerateDistribution);
            }
            heights.iter().map(|h| libm::sqrt(h / total)).collect()
        }
    };
    let qubits = bins.trailing_zeros();
    Ok(AmplitudeVector { amplitudes, qubits })
}

/// Built-in PMF shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    Uniform,
    /// `C(bins − 1, k)`.
    Binomial,
    /// Linear ramp `1, 2, …` up to the midpoint and back down.
    Triangle,
    /// Fixed two-peaked table.
    BimodalDemo,
    /// Fixed irregular table.
    ArbitraryDemo,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 5] = [
        DistributionKind::Uniform,
        DistributionKind::Binomial,
        DistributionKind::Triangle,
        DistributionKind::BimodalDemo,
        DistributionKind::ArbitraryDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::Uniform => "uniform",
            DistributionKind::Binomial => "binomial",
            DistributionKind::Triangle => "triangle",
            DistributionKind::BimodalDemo => "bimodal_demo",
            DistributionKind::ArbitraryDemo => "arbitrary_demo",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionKind {
    type Err = PmfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DistributionKind::ALL
            .into_iter()
            .find(|k| k.name() == s || k.name().replace('_', "-") == s)
            .ok_or(PmfError::UnsupportedDistribution)
    }
}

const BIMODAL_32: [f64; 32] = [
    2.0, 4.0, 7.0, 12.0, 18.0, 24.0, 28.0, 30.0, 29.0, 25.0, 19.0, 13.0, 8.0, 5.0, 4.0, 3.0, 3.5,
    4.5, 6.0, 9.0, 13.0, 17.0, 20.0, 22.0, 21.0, 18.5, 14.0, 10.0, 6.5, 4.0, 2.5, 1.0,
];

const ARBITRARY_32: [f64; 32] = [
    5.0, 9.0, 3.0, 12.0, 7.0, 15.0, 4.0, 10.0, 18.0, 6.0, 11.0, 2.0, 14.0, 8.0, 20.0, 13.0, 6.5,
    17.0, 9.5, 3.5, 11.5, 16.0, 7.5, 12.5, 5.5, 19.0, 8.5, 4.5, 10.5, 14.5, 6.0, 9.0,
];

/// Generate a built-in table with `num_bins` bins (a power of two, at least 2).
///
/// The two demo tables are defined on 32 bins and linearly resampled for
/// other sizes.
pub fn gen_parametric_pmf(kind: DistributionKind, num_bins: usize) -> Result<PmfTable, PmfError> {
    if num_bins < 2 || !num_bins.is_power_of_two() {
        return Err(PmfError::NotPowerOfTwo { bins: num_bins });
    }
    let heights = match kind {
        DistributionKind::Uniform => alloc::vec![1.0; num_bins],
        DistributionKind::Binomial => binomial_row(num_bins - 1),
        DistributionKind::Triangle => (0..num_bins)
            .map(|k| (k + 1).min(num_bins - k) as f64)
            .collect(),
        DistributionKind::BimodalDemo => resample(&BIMODAL_32, num_bins),
        DistributionKind::ArbitraryDemo => resample(&ARBITRARY_32, num_bins),
    };
    PmfTable::new(heights)
}

/// Row `m` of Pascal's triangle.
///
/// Exact up to `m = 127` (integer arithmetic). Past that the row is scaled so
/// the central coefficient is 1, which keeps every entry representable.
fn binomial_row(m: usize) -> Vec<f64> {
    if m <= 127 {
        return exact_row(m);
    }
    let ln_center = ln_choose(m, m / 2);
    (0..=m).map(|k| libm::exp(ln_choose(m, k) - ln_center)).collect()
}

fn exact_row(m: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(m + 1);
    let mut c: u128 = 1;
    for k in 0..=m {
        row.push(c as f64);
        if k < m {
            // C(m, k+1) = C(m, k)·(m−k)/(k+1), dividing out the gcd first so
            // the intermediate never exceeds the result.
            let num = (m - k) as u128;
            let den = (k + 1) as u128;
            let g = gcd(c, den);
            c = (c / g) * (num / (den / g));
        }
    }
    row
}

fn ln_choose(m: usize, k: usize) -> f64 {
    let (m, k) = (m as f64, k as f64);
    libm::lgamma(m + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(m - k + 1.0)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn resample(table: &[f64], num_bins: usize) -> Vec<f64> {
    if num_bins == table.len() {
        return table.to_vec();
    }
    let last = (table.len() - 1) as f64;
    (0..num_bins)
        .map(|k| {
            let t = k as f64 * last / (num_bins - 1) as f64;
            let lo = libm::floor(t) as usize;
            let hi = (lo + 1).min(table.len() - 1);
            let w = t - lo as f64;
            table[lo] * (1.0 - w) + table[hi] * w
        })
        .collect()
}

/// Neumaier-compensated sum.
pub(crate) fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if libm::fabs(sum) >= libm::fabs(v) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn table_validation() {
        assert_eq!(PmfTable::new(vec![0.5, -0.1]), Err(PmfError::Domain { index: 1 }));
        assert_eq!(PmfTable::new(vec![0.5, f64::NAN]), Err(PmfError::Domain { index: 1 }));
        assert_eq!(PmfTable::new(vec![]), Err(PmfError::Empty));
        assert_eq!(PmfTable::new(vec![0.0, 0.0]), Err(PmfError::DegenerateDistribution));
        assert_eq!(PmfTable::new(vec![1.0; 3]).unwrap().qubits(), None);
    }

    #[test]
    fn generators() {
        let u = gen_parametric_pmf(DistributionKind::Uniform, 4).unwrap();
        assert_eq!(u.heights(), [1.0; 4]);
        let b = gen_parametric_pmf(DistributionKind::Binomial, 4).unwrap();
        assert_eq!(b.heights(), [1.0, 3.0, 3.0, 1.0]);
        let b = gen_parametric_pmf(DistributionKind::Binomial, 32).unwrap();
        assert_eq!(&b.heights()[..5], [1.0, 31.0, 465.0, 4495.0, 31465.0]);
        let t = gen_parametric_pmf(DistributionKind::Triangle, 8).unwrap();
        assert_eq!(t.heights(), [1.0, 2.0, 3.0, 4.0, 4.0, 3.0, 2.0, 1.0]);
        assert_eq!(
            gen_parametric_pmf(DistributionKind::Uniform, 6),
            Err(PmfError::NotPowerOfTwo { bins: 6 })
        );
        assert_eq!("poisson".parse::<DistributionKind>(), Err(PmfError::UnsupportedDistribution));
        for kind in DistributionKind::ALL {
            for bins in [2, 4, 16, 32, 64, 256] {
                let table = gen_parametric_pmf(kind, bins).unwrap();
                assert_eq!(table.num_bins(), bins);
            }
        }
    }

    #[test]
    fn large_binomial_rows_are_scaled_pascal() {
        let row = gen_parametric_pmf(DistributionKind::Binomial, 2048).unwrap();
        let h = row.heights();
        assert!(h.iter().all(|x| x.is_finite()));
        assert!((h[1023] - 1.0).abs() < 1e-9);
        // C(m, k+1) / C(m, k) = (m − k) / (k + 1)
        let m = 2047.0;
        for k in [900usize, 1000, 1100] {
            let ratio = h[k + 1] / h[k];
            assert!((ratio - (m - k as f64) / (k as f64 + 1.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn normalization_modes() {
        let table = PmfTable::new(vec![1.0, 0.0, 0.0, 3.0]).unwrap();
        let a = normalize_amplitudes(&table, NormalizationMode::HeightsAsProbabilities).unwrap();
        assert_eq!(a.amplitudes()[..3], [0.5, 0.0, 0.0]);
        assert!((a.amplitudes()[3] - libm::sqrt(0.75)).abs() < 1e-15);

        let a = normalize_amplitudes(&table, NormalizationMode::HeightsAsAmplitudes).unwrap();
        assert!((a.amplitudes()[0] - 1.0 / libm::sqrt(10.0)).abs() < 1e-15);

        let uniform = gen_parametric_pmf(DistributionKind::Uniform, 32).unwrap();
        for mode in [NormalizationMode::HeightsAsAmplitudes, NormalizationMode::HeightsAsProbabilities] {
            let a = normalize_amplitudes(&uniform, mode).unwrap();
            assert!(a.amplitudes().iter().all(|x| (x - 1.0 / libm::sqrt(32.0)).abs() < 1e-15));
            assert!(a.is_uniform());
        }
    }

    #[test]
    fn synthesis_needs_power_of_two() {
        let table = PmfTable::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            normalize_amplitudes(&table, NormalizationMode::default()),
            Err(PmfError::NotPowerOfTwo { bins: 3 })
        );
        let padded = table.pad_to_pow2();
        assert_eq!(padded.heights(), [1.0, 2.0, 3.0, 0.0]);
        assert!(normalize_amplitudes(&padded, NormalizationMode::default()).is_ok());
    }

    #[test]
    fn amplitude_vector_checks_norm() {
        assert!(AmplitudeVector::new(vec![0.6, 0.8]).is_ok());
        assert!(matches!(AmplitudeVector::new(vec![0.6, 0.7]), Err(PmfError::NotNormalized { .. })));
        assert_eq!(AmplitudeVector::new(vec![1.0, 0.0, 0.0]), Err(PmfError::NotPowerOfTwo { bins: 3 }));
    }
}
