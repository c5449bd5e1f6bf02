//! Closed-form predictions for every sampler: expected proposal counts,
//! sub-optimality, admissible batch sizes, induced density ratios and
//! chi-square values. These are the oracles the Monte Carlo harness and the
//! acceptance suite compare against; they are total over their stated
//! preconditions and never return NaN.
//!
//! Throughout, `s` is the proposal mass of the ground-truth set, `s_ver`
//! the mass of the verifier set, `j` the verifier's Youden index, and
//! sub-optimality is the skyline mass `min(1, m_beta(s))` minus the mass
//! the sampler's induced distribution puts on the ground-truth set.

use crate::error::{Error, Result};
use crate::transport::{m_beta, otc, regime_of, CoverageBudget, PiSubcase, Regime, RegimeTag};

/// A closed-form prediction for one sampler configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryPrediction {
    /// Predicted sub-optimality, in `[-1, 1]`.
    pub subopt: f64,
    /// Expected number of proposals; absent for batched samplers reported
    /// through a fixed batch size.
    pub expected_proposals: Option<f64>,
    /// The Youden-index multiplier of the sub-optimality law, when the law
    /// has the `OTC * (1 - alpha J)` shape.
    pub alpha: Option<f64>,
    /// Coverage regime of the `(s, s_ver, beta)` triple.
    pub regime: Option<Regime>,
}

fn check_prob(name: &'static str, v: f64, lo_open: bool, hi_open: bool) -> Result<()> {
    let lo_ok = if lo_open { v > 0.0 } else { v >= 0.0 };
    let hi_ok = if hi_open { v < 1.0 } else { v <= 1.0 };
    if !v.is_finite() || !lo_ok || !hi_ok {
        return Err(Error::InvalidParameter {
            name,
            value: v,
            constraint: "probability out of range",
        });
    }
    Ok(())
}

/// Expected proposals of accept-if-correct: `1 / s_ver`.
pub fn aic_complexity(s_ver: f64) -> Result<f64> {
    check_prob("s_ver", s_ver, false, false)?;
    if s_ver == 0.0 {
        return Err(Error::NeverTerminates);
    }
    Ok(1.0 / s_ver)
}

/// Smallest budget at which accept-if-correct satisfies coverage:
/// `1 / s_ver` (its induced chi-square is `1/s_ver - 1`).
pub fn aic_min_beta(s_ver: f64) -> Result<CoverageBudget> {
    check_prob("s_ver", s_ver, true, false)?;
    CoverageBudget::new(1.0 / s_ver)
}

/// Sub-optimality of accept-if-correct.
///
/// For `beta > 1/s` this is `OTC(beta) (1 - (s/s_ver) j)`; below that it is
/// `sqrt(s(1-s)(beta-1)) - (s(1-s)/s_ver) j` (the expanded form of
/// `OTC (1 - (1/s_ver) sqrt(s(1-s)/(beta-1)) j)`, which avoids the 0/0 at
/// `beta = 1`). At exactly `beta = 1` the value is pinned to 0 even though
/// the one-sided limit is `-(s(1-s)/s_ver) j`; the sampler ignores the
/// budget, so the usual decomposition degenerates there.
pub fn aic_subopt(s: f64, s_ver: f64, j: f64, beta: CoverageBudget) -> Result<f64> {
    check_prob("s", s, true, true)?;
    check_prob("s_ver", s_ver, true, false)?;
    let b = beta.value();
    if b > 1.0 / s {
        Ok(otc(s, beta)? * (1.0 - s / s_ver * j))
    } else if b == 1.0 {
        Ok(0.0)
    } else {
        Ok((s * (1.0 - s) * (b - 1.0)).sqrt() - s * (1.0 - s) / s_ver * j)
    }
}

/// Expected proposals of sequential rejection sampling and sequential
/// maximal coupling (they coincide): `min(1, m_beta(s_ver)) / s_ver`.
pub fn srs_smc_complexity(s_ver: f64, beta: CoverageBudget) -> Result<f64> {
    check_prob("s_ver", s_ver, true, true)?;
    Ok(m_beta(s_ver, beta)?.min(1.0) / s_ver)
}

/// Sub-optimality of SRS/SMC: `OTC(beta) (1 - alpha j)` with the regime-
/// dependent multiplier
///
/// * transport:            `alpha = sqrt(s(1-s) / (s_ver(1-s_ver)))`
/// * policy improvement a: `alpha = (1/s_ver) sqrt(s(1-s)/(beta-1))`
/// * policy improvement b: `alpha = s sqrt((beta-1) / (s_ver(1-s_ver)))`
/// * saturation:           `alpha = s / s_ver`
///
/// continuous across the regime boundaries.
pub fn srs_smc_subopt(
    s: f64,
    s_ver: f64,
    j: f64,
    beta: CoverageBudget,
) -> Result<TheoryPrediction> {
    check_prob("s", s, true, true)?;
    check_prob("s_ver", s_ver, true, true)?;
    let regime = regime_of(s, s_ver, beta)?;
    let b = beta.value();
    let alpha = match (regime.tag, regime.subcase) {
        (RegimeTag::Transport, _) => (s * (1.0 - s) / (s_ver * (1.0 - s_ver))).sqrt(),
        (RegimeTag::PolicyImprovement, Some(PiSubcase::A)) => {
            (s * (1.0 - s) / (b - 1.0)).sqrt() / s_ver
        }
        (RegimeTag::PolicyImprovement, _) => s * ((b - 1.0) / (s_ver * (1.0 - s_ver))).sqrt(),
        (RegimeTag::Saturation, _) => s / s_ver,
    };
    Ok(TheoryPrediction {
        subopt: otc(s, beta)? * (1.0 - alpha * j),
        expected_proposals: Some(srs_smc_complexity(s_ver, beta)?),
        alpha: Some(alpha),
        regime: Some(regime),
    })
}

/// Maximum admissible batch parameter of best-of-N, as a case split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BatchBound {
    /// Any batch size keeps coverage.
    Unbounded,
    /// Finite bound: the real-valued solution and its floor.
    Bounded { real: f64, floor: u64 },
    /// The budget is below the feasibility threshold of a single extra
    /// sample; the stated case split leaves the bound undetermined.
    Undetermined,
}

impl BatchBound {
    /// Whether a batch parameter `n` is admissible under this bound.
    /// `Undetermined` admits only `n = 0`.
    pub fn admits(&self, n: u64) -> bool {
        match *self {
            BatchBound::Unbounded => true,
            BatchBound::Bounded { floor, .. } => n <= floor,
            BatchBound::Undetermined => n == 0,
        }
    }
}

/// How the three-way case split of [`bon_max_batch`] reads the budget.
///
/// The two thresholds are `s(1-s)` (below which the bound is undetermined)
/// and `(1-s)/s` (beyond which it is unbounded). `BudgetTotal` compares the
/// raw budget `beta` against them, which is how the case split is usually
/// quoted; since `beta >= 1 > s(1-s)` the undetermined case is then
/// unreachable. `BudgetRadius` compares the chi-square radius `beta - 1`,
/// which makes the bound agree exactly with [`bon_chi_squared`]:
/// `n` is admissible iff `bon_chi_squared(s, n) <= beta - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchLimitMode {
    BudgetTotal,
    BudgetRadius,
}

/// Maximum admissible batch parameter `N` for best-of-N at budget `beta`.
///
/// The middle branch is `ln(1 - sqrt((beta-1) s / (1-s))) / ln(1-s)`,
/// returned un-floored alongside its floor; callers floor before use.
pub fn bon_max_batch(s: f64, beta: CoverageBudget, mode: BatchLimitMode) -> Result<BatchBound> {
    check_prob("s", s, true, true)?;
    let budget = match mode {
        BatchLimitMode::BudgetTotal => beta.value(),
        BatchLimitMode::BudgetRadius => beta.value() - 1.0,
    };
    if budget >= (1.0 - s) / s {
        return Ok(BatchBound::Unbounded);
    }
    if budget < s * (1.0 - s) {
        return Ok(BatchBound::Undetermined);
    }
    let radius = match mode {
        BatchLimitMode::BudgetTotal => beta.value() - 1.0,
        BatchLimitMode::BudgetRadius => budget,
    };
    let arg = 1.0 - (radius * s / (1.0 - s)).sqrt();
    if arg <= 0.0 {
        // Only reachable under BudgetTotal, where the case thresholds do not
        // track the chi-square radius.
        return Ok(BatchBound::Unbounded);
    }
    let real = arg.ln() / (1.0 - s).ln();
    Ok(BatchBound::Bounded {
        real,
        floor: real.max(0.0).floor() as u64,
    })
}

/// Sub-optimality of best-of-N with the ground-truth verifier:
/// `(1-s)^(N+1) - max(0, 1 - m_beta(s))`. May be negative: small batches
/// under tight budgets can beat the constrained skyline.
pub fn bon_subopt_exact(s: f64, beta: CoverageBudget, n: u64) -> Result<f64> {
    check_prob("s", s, true, true)?;
    let miss = pow_u(1.0 - s, n + 1);
    Ok(miss - (1.0 - m_beta(s, beta)?).max(0.0))
}

/// Sub-optimality of batched rejection sampling with the ground-truth
/// verifier and envelope `m_env`: `OTC(beta) (1 - 1/m_env)^N`.
pub fn brs_subopt_exact(s: f64, beta: CoverageBudget, n: u64, m_env: f64) -> Result<f64> {
    check_prob("s", s, true, true)?;
    check_envelope(m_env)?;
    Ok(otc(s, beta)? * pow_u(1.0 - 1.0 / m_env, n))
}

/// Sub-optimality of best-of-N run against an approximate verifier:
/// `(1-s) (1 - (s/s_ver)(1 - (1-s_ver)^N) j) - max(0, 1 - m_beta(s))`.
pub fn bon_subopt_approx(
    s: f64,
    s_ver: f64,
    j: f64,
    beta: CoverageBudget,
    n: u64,
) -> Result<f64> {
    check_prob("s", s, true, true)?;
    check_prob("s_ver", s_ver, true, true)?;
    let hit = 1.0 - pow_u(1.0 - s_ver, n);
    let sampled = (1.0 - s) * (1.0 - s / s_ver * hit * j);
    Ok(sampled - (1.0 - m_beta(s, beta)?).max(0.0))
}

/// Sub-optimality of batched rejection sampling against an approximate
/// verifier, split by coverage regime. With `a_N = 1 - (1 - 1/m_env)^N`:
///
/// * transport:   `OTC(1-a_N) + a_N s (m(s)/s - (m(v)/v TPR + (1-m(v))/(1-v) (1-TPR)))`
/// * pi (a):      `OTC(1-a_N) + a_N s (m(s)/s - TPR/v)`
/// * pi (b):      `OTC(1-a_N) + a_N s (1/s   - (m(v)/v TPR + (1-m(v))/(1-v) (1-TPR)))`
/// * saturation:  `OTC(1-a_N) + a_N s (1/s   - TPR/v)`
///
/// where `v = s_ver` and `m(.) = m_beta(.)`. With a perfect verifier
/// (`s_ver = s`, `tpr = 1`) every branch reduces to [`brs_subopt_exact`].
pub fn brs_subopt_approx(
    s: f64,
    s_ver: f64,
    tpr: f64,
    beta: CoverageBudget,
    n: u64,
    m_env: f64,
) -> Result<f64> {
    check_prob("s", s, true, true)?;
    check_prob("s_ver", s_ver, true, true)?;
    check_prob("tpr", tpr, false, false)?;
    check_envelope(m_env)?;
    let a_n = 1.0 - pow_u(1.0 - 1.0 / m_env, n);
    let sampling = otc(s, beta)? * (1.0 - a_n);
    let m_s = m_beta(s, beta)?;
    let m_v = m_beta(s_ver, beta)?;
    let blended = m_v / s_ver * tpr + (1.0 - m_v) / (1.0 - s_ver) * (1.0 - tpr);
    let regime = regime_of(s, s_ver, beta)?;
    let verification = match (regime.tag, regime.subcase) {
        (RegimeTag::Transport, _) => a_n * s * (m_s / s - blended),
        (RegimeTag::PolicyImprovement, Some(PiSubcase::A)) => a_n * s * (m_s / s - tpr / s_ver),
        (RegimeTag::PolicyImprovement, _) => a_n * s * (1.0 / s - blended),
        (RegimeTag::Saturation, _) => a_n * s * (1.0 / s - tpr / s_ver),
    };
    Ok(sampling + verification)
}

/// Induced density ratio of best-of-N relative to the proposal:
/// `(on_value, off_value)` with `off = (1-s)^N` and
/// `on = (1/s)(1 - (1-s)^(N+1))`. Both average to 1 under the proposal.
pub fn bon_rn_derivative(s: f64, n: u64) -> Result<(f64, f64)> {
    check_prob("s", s, true, true)?;
    let off = pow_u(1.0 - s, n);
    let on = (1.0 - pow_u(1.0 - s, n + 1)) / s;
    Ok((on, off))
}

/// Induced density ratio of batched rejection sampling: the target tilt
/// `(eta_on, eta_off)` mixed with 1 at weight `(1 - 1/m_env)^N`.
pub fn brs_rn_derivative(
    eta_on: f64,
    eta_off: f64,
    m_env: f64,
    n: u64,
) -> Result<(f64, f64)> {
    check_envelope(m_env)?;
    let w = pow_u(1.0 - 1.0 / m_env, n);
    Ok(((1.0 - w) * eta_on + w, (1.0 - w) * eta_off + w))
}

/// Chi-square divergence induced by best-of-N:
/// `((1-s)/s)(1 - (1-s)^N)^2`, bounded above by `(1-s)/s`.
pub fn bon_chi_squared(s: f64, n: u64) -> Result<f64> {
    check_prob("s", s, true, true)?;
    let a = 1.0 - pow_u(1.0 - s, n);
    Ok((1.0 - s) / s * a * a)
}

fn check_envelope(m_env: f64) -> Result<()> {
    if !m_env.is_finite() || m_env < 1.0 {
        return Err(Error::InvalidParameter {
            name: "m_env",
            value: m_env,
            constraint: "envelope must be >= 1",
        });
    }
    Ok(())
}

fn pow_u(base: f64, exp: u64) -> f64 {
    // Exponents stay small in practice; repeated squaring keeps this exact
    // and libm-free for reproducibility.
    let mut result = 1.0;
    let mut base = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= base;
        }
        base *= base;
        e >>= 1;
    }
    result
}
