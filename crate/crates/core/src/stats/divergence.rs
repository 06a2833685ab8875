use super::StatsError;

/// Allowed deviation of `Σ p` from 1.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

pub(crate) fn check_probabilities(p: &[f64]) -> Result<(), StatsError> {
    if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(StatsError::InvalidProbabilities);
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(StatsError::InvalidProbabilities);
    }
    Ok(())
}

fn check_pair(p: &[f64], q: &[f64]) -> Result<(), StatsError> {
    if p.len() != q.len() {
        return Err(StatsError::Shape { expected: p.len(), got: q.len() });
    }
    check_probabilities(p)?;
    check_probabilities(q)
}

/// `Σ p·ln(p/q)` without validation; `+∞` when `p > 0 = q`.
fn kl_raw(p: &[f64], q: &[f64]) -> f64 {
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        total += pi * libm::log(pi / qi);
    }
    // Rounding can leave a tiny negative value when p ≈ q.
    total.max(0.0)
}

/// `KL(p‖q) = Σ p(i)·ln(p(i)/q(i))` in nats.
///
/// Terms with `p(i) = 0` contribute nothing; a bin with `p(i) > 0` and
/// `q(i) = 0` makes the divergence infinite.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, StatsError> {
    check_pair(p, q)?;
    Ok(kl_raw(p, q))
}

/// Jensen-Shannon divergence `½KL(p‖m) + ½KL(q‖m)`, `m = ½(p+q)`. Always in
/// `[0, ln 2]`.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64, StatsError> {
    check_pair(p, q)?;
    let half = |a: f64, b: f64| {
        if a == 0.0 {
            0.0
        } else {
            a * libm::log(2.0 * a / (a + b))
        }
    };
    let js: f64 = p.iter().zip(q).map(|(&a, &b)| 0.5 * (half(a, b) + half(b, a))).sum();
    Ok(js.clamp(0.0, core::f64::consts::LN_2))
}

/// Count-based G statistic `2·Σ Oᵢ·ln(Oᵢ/Eᵢ)` with `Eᵢ = shots·expectedᵢ`.
pub fn g_statistic_counts(observed: &[u64], expected: &[f64], shots: u64) -> Result<f64, StatsError> {
    check_counts(observed, expected, shots)?;
    let n = shots as f64;
    let mut g = 0.0;
    for (&o, &p) in observed.iter().zip(expected) {
        if o == 0 {
            continue;
        }
        let e = n * p;
        if e == 0.0 {
            return Err(StatsError::InfiniteStatistic);
        }
        let o = o as f64;
        g += o * libm::log(o / e);
    }
    Ok((2.0 * g).max(0.0))
}

/// `2·KL(empirical‖theory)`: the G statistic without the shot factor.
pub fn g_statistic_paper(empirical: &[f64], theory: &[f64]) -> Result<f64, StatsError> {
    check_pair(empirical, theory)?;
    let kl = kl_raw(empirical, theory);
    if kl.is_infinite() {
        return Err(StatsError::InfiniteStatistic);
    }
    Ok(2.0 * kl)
}

/// Pearson `Σ (Oᵢ − Eᵢ)²/Eᵢ`.
///
/// Bins with zero expectation are skipped when nothing was observed there
/// and make the statistic infinite otherwise.
pub fn chi_square_statistic(observed: &[u64], expected: &[f64], shots: u64) -> Result<f64, StatsError> {
    check_counts(observed, expected, shots)?;
    let n = shots as f64;
    let mut chi = 0.0;
    for (&o, &p) in observed.iter().zip(expected) {
        let e = n * p;
        if e == 0.0 {
            if o > 0 {
                return Err(StatsError::InfiniteStatistic);
            }
            continue;
        }
        let d = o as f64 - e;
        chi += d * d / e;
    }
    Ok(chi)
}

fn check_counts(observed: &[u64], expected: &[f64], shots: u64) -> Result<(), StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::Shape { expected: expected.len(), got: observed.len() });
    }
    check_probabilities(expected)?;
    let sum: u64 = observed.iter().sum();
    if sum != shots {
        return Err(StatsError::CountMismatch { sum, shots });
    }
    Ok(())
}
