use alloc::vec::Vec;

use super::{
    chi2_sf, chi_square_statistic, g_statistic_counts, js_divergence, kl_divergence, StatsError,
};
use crate::sim::Histogram;

/// Every comparison statistic for one histogram against one PMF.
///
/// Divergences are in nats; infinite values are kept as `f64::INFINITY`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub kl_theory_vs_empirical: f64,
    pub kl_empirical_vs_theory: f64,
    pub js: f64,
    /// `2·Σ O·ln(O/E)` on raw counts.
    pub g_counts: f64,
    /// `2·KL(empirical‖theory)` without the shot factor.
    pub g_paper: f64,
    pub chi_square: f64,
    /// `chi2_sf(g_paper, 1)`.
    pub p_value_paper: f64,
    /// `chi2_sf(g_counts, bins − 1)`.
    pub p_value_g: f64,
    /// `chi2_sf(chi_square, bins − 1)`.
    pub p_value_chi_square: f64,
    pub shots: u64,
}

impl DivergenceReport {
    /// `(name, value)` pairs in serialization order.
    pub fn fields(&self) -> [(&'static str, f64); 10] {
        [
            ("kl_theory_vs_empirical", self.kl_theory_vs_empirical),
            ("kl_empirical_vs_theory", self.kl_empirical_vs_theory),
            ("js", self.js),
            ("g_counts", self.g_counts),
            ("g_paper", self.g_paper),
            ("chi_square", self.chi_square),
            ("p_value_paper", self.p_value_paper),
            ("p_value_g", self.p_value_g),
            ("p_value_chi_square", self.p_value_chi_square),
            ("shots", self.shots as f64),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReportOptions {
    /// Add `1/shots` to every empirical frequency (then renormalize) before
    /// computing the divergences. Count-based statistics are unaffected.
    pub smoothing: bool,
}

pub fn build_report(observed: &Histogram, pmf: &[f64]) -> Result<DivergenceReport, StatsError> {
    build_report_with(observed, pmf, &ReportOptions::default())
}

pub fn build_report_with(
    observed: &Histogram,
    pmf: &[f64],
    options: &ReportOptions,
) -> Result<DivergenceReport, StatsError> {
    if observed.len() != pmf.len() {
        return Err(StatsError::Shape { expected: pmf.len(), got: observed.len() });
    }
    let shots = observed.shots();
    let mut empirical = observed.frequencies();
    if options.smoothing {
        let eps = 1.0 / shots as f64;
        let total = 1.0 + eps * empirical.len() as f64;
        empirical = empirical.iter().map(|f| (f + eps) / total).collect::<Vec<_>>();
    }
    let or_inf = |r: Result<f64, StatsError>| match r {
        Err(StatsError::InfiniteStatistic) => Ok(f64::INFINITY),
        other => other,
    };
    let kl_theory_vs_empirical = kl_divergence(pmf, &empirical)?;
    let kl_empirical_vs_theory = kl_divergence(&empirical, pmf)?;
    let js = js_divergence(pmf, &empirical)?;
    let g_counts = or_inf(g_statistic_counts(observed.counts(), pmf, shots))?;
    let g_paper = 2.0 * kl_empirical_vs_theory;
    let chi_square = or_inf(chi_square_statistic(observed.counts(), pmf, shots))?;
    let dof = (pmf.len() as u32).saturating_sub(1);
    Ok(DivergenceReport {
        kl_theory_vs_empirical,
        kl_empirical_vs_theory,
        js,
        g_counts,
        g_paper,
        chi_square,
        p_value_paper: chi2_sf(g_paper, 1),
        p_value_g: chi2_sf(g_counts, dof),
        p_value_chi_square: chi2_sf(chi_square, dof),
        shots,
    })
}
