//! Coverage-constrained optimal policies and transport costs.
//!
//! The policy class is a chi-square ball of radius `beta - 1` around the
//! proposal: `chi2(nu) = sum nu(y)^2 / mu(y) - 1 <= beta - 1`. Within that
//! ball the reward-optimal policy is a two-level tilt of `mu`: density
//! `min(1/s, m_beta(s)/s)` on the verifier set and
//! `max(0, (1 - m_beta(s)) / (1 - s))` off it, where
//! `m_beta(s) = s + sqrt(s (1-s) (beta - 1))`. The optimal transport cost
//! under Hamming ground cost equals the total variation distance
//! `min(1, m_beta(s)) - s`.

use crate::error::{Error, Result};
use crate::measures::{ResponseUniverse, VerifierSet, MASS_TOL};

/// Absolute slack used when checking chi-square feasibility.
pub const CHI2_TOL: f64 = 1e-9;

/// Coverage budget `beta >= 1`; sub-unit budgets are rejected, not clamped.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CoverageBudget(f64);

impl CoverageBudget {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 1.0 {
            return Err(Error::InvalidBudget(beta));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name,
            value,
            constraint: "must lie in [0,1]",
        });
    }
    Ok(())
}

fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 || value >= 1.0 {
        return Err(Error::InvalidParameter {
            name,
            value,
            constraint: "must lie in (0,1)",
        });
    }
    Ok(())
}

/// `m_beta(s) = s + sqrt(s (1-s) (beta-1))`, the set mass reached by the
/// optimal policy before clipping. Deliberately NOT clipped at 1; clipping
/// happens at use sites.
pub fn m_beta(s: f64, beta: CoverageBudget) -> Result<f64> {
    check_unit("s", s)?;
    Ok(s + (s * (1.0 - s) * (beta.value() - 1.0)).sqrt())
}

/// The two density levels of the optimal policy for a set of mass `s`:
/// `(on_value, off_value)`. Accepts `s` in `(0, 1]`; at `s = 1` the tilt is
/// the indicator of the set (off level 0).
pub fn tilt_values(s: f64, beta: CoverageBudget) -> Result<(f64, f64)> {
    check_unit("s", s)?;
    if s <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            constraint: "must be > 0",
        });
    }
    let m = m_beta(s, beta)?;
    let on = (1.0 / s).min(m / s);
    // m >= 1 forces the off level to 0; this also covers s = 1 where the
    // ratio below would be 0/0.
    let off = if m >= 1.0 { 0.0 } else { ((1.0 - m) / (1.0 - s)).max(0.0) };
    Ok((on, off))
}

/// The optimal two-level policy for `set` at budget `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltedPolicy {
    /// Density ratio on the verifier set.
    pub on_value: f64,
    /// Density ratio off the verifier set.
    pub off_value: f64,
    /// Mass of the verifier set under the proposal.
    pub set_mass: f64,
    /// Mass the policy puts on the set: `on_value * set_mass = min(1, m_beta)`.
    pub m: f64,
    /// Budget the policy was built for.
    pub beta: CoverageBudget,
}

impl TiltedPolicy {
    /// Density ratio at a single atom.
    pub fn density(&self, in_set: bool) -> f64 {
        if in_set {
            self.on_value
        } else {
            self.off_value
        }
    }

    /// Materializes the policy distribution `nu(y) = eta(y) mu(y)` over the
    /// universe's atoms.
    pub fn distribution(&self, universe: &ResponseUniverse, set: &VerifierSet) -> Result<Vec<f64>> {
        set.check_universe(universe)?;
        Ok((0..universe.len())
            .map(|i| universe.prob(i) * self.density(set.contains(i)))
            .collect())
    }
}

/// Builds the optimal policy of `set` at `beta`. The set mass must be
/// non-degenerate.
pub fn optimal_policy(
    universe: &ResponseUniverse,
    set: &VerifierSet,
    beta: CoverageBudget,
) -> Result<TiltedPolicy> {
    set.check_universe(universe)?;
    let s = set.mass();
    if s <= MASS_TOL || s >= 1.0 - MASS_TOL {
        return Err(Error::DegenerateSetMass { mass: s });
    }
    let (on_value, off_value) = tilt_values(s, beta)?;
    Ok(TiltedPolicy {
        on_value,
        off_value,
        set_mass: s,
        m: on_value * s,
        beta,
    })
}

/// Chi-square divergence of `candidate` from the proposal:
/// `sum candidate(y)^2 / mu(y) - 1`, requiring absolute continuity.
pub fn chi_squared(universe: &ResponseUniverse, candidate: &[f64]) -> Result<f64> {
    if candidate.len() != universe.len() {
        return Err(Error::SetUniverseMismatch {
            set_len: candidate.len(),
            universe_len: universe.len(),
        });
    }
    let mut sum = 0.0;
    let mut quad = 0.0;
    for (i, &c) in candidate.iter().enumerate() {
        if !c.is_finite() || c < -MASS_TOL {
            return Err(Error::InvalidParameter {
                name: "candidate",
                value: c,
                constraint: "masses must be finite and >= 0",
            });
        }
        let p = universe.prob(i);
        if p == 0.0 {
            if c > MASS_TOL {
                return Err(Error::NotAbsolutelyContinuous {
                    id: universe.id(i).to_string(),
                    mass: c,
                });
            }
            continue;
        }
        sum += c;
        quad += c * c / p;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::CandidateUnnormalized { sum });
    }
    Ok((quad - 1.0).max(0.0))
}

/// Optimal transport cost under Hamming ground cost:
/// `min(1, m_beta(s)) - s`, the total variation distance between the
/// proposal and the optimal policy.
pub fn otc(s: f64, beta: CoverageBudget) -> Result<f64> {
    check_open_unit("s", s)?;
    Ok(m_beta(s, beta)?.min(1.0) - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    Transport,
    PolicyImprovement,
    Saturation,
}

/// Which policy-improvement branch applies: (a) verifier set heavier than
/// the ground truth (`s_ver > s`), or (b) the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiSubcase {
    A,
    B,
}

/// Coverage regime of a `(s, s_ver, beta)` triple together with the two
/// breakpoints `min(1/s, 1/s_ver)` and `max(1/s, 1/s_ver)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regime {
    pub tag: RegimeTag,
    pub subcase: Option<PiSubcase>,
    pub lower: f64,
    pub upper: f64,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match (self.tag, self.subcase) {
            (RegimeTag::Transport, _) => "transport",
            (RegimeTag::PolicyImprovement, Some(PiSubcase::A)) => "policy_improvement_a",
            (RegimeTag::PolicyImprovement, _) => "policy_improvement_b",
            (RegimeTag::Saturation, _) => "saturation",
        }
    }
}

/// Classifies the budget: transport for `beta <= min(1/s, 1/s_ver)`,
/// saturation for `beta > max(1/s, 1/s_ver)`, policy improvement between.
pub fn regime_of(s: f64, s_ver: f64, beta: CoverageBudget) -> Result<Regime> {
    check_open_unit("s", s)?;
    check_open_unit("s_ver", s_ver)?;
    let lower = (1.0 / s).min(1.0 / s_ver);
    let upper = (1.0 / s).max(1.0 / s_ver);
    let b = beta.value();
    let (tag, subcase) = if b <= lower {
        (RegimeTag::Transport, None)
    } else if b > upper {
        (RegimeTag::Saturation, None)
    } else {
        let sub = if s_ver > s { PiSubcase::A } else { PiSubcase::B };
        (RegimeTag::PolicyImprovement, Some(sub))
    };
    Ok(Regime { tag, subcase, lower, upper })
}

/// Rejection-sampling envelope: the larger of the two tilt levels built from
/// `s_ver`. Always at least 1, since the tilt averages to 1 under the
/// proposal.
pub fn envelope_m(s_ver: f64, beta: CoverageBudget) -> Result<f64> {
    check_open_unit("s_ver", s_ver)?;
    let (on, off) = tilt_values(s_ver, beta)?;
    Ok(on.max(off))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::VerifierSet;

    fn beta(b: f64) -> CoverageBudget {
        CoverageBudget::new(b).unwrap()
    }

    #[test]
    fn budget_rejects_sub_unit_values() {
        assert!(CoverageBudget::new(0.99).is_err());
        assert!(CoverageBudget::new(f64::NAN).is_err());
        assert!(CoverageBudget::new(1.0).is_ok());
    }

    #[test]
    fn m_beta_values() {
        assert_eq!(m_beta(0.25, beta(1.0)).unwrap(), 0.25);
        let m = m_beta(0.25, beta(2.0)).unwrap();
        assert!((m - 0.6830127018922193).abs() < 1e-15);
        assert_eq!(m_beta(1.0, beta(7.0)).unwrap(), 1.0);
    }

    #[test]
    fn m_beta_unclipped_beyond_one() {
        // beta = 1/s makes m exactly 1; larger budgets push past it.
        let m_at_boundary = m_beta(0.25, beta(4.0)).unwrap();
        assert!((m_at_boundary - 1.0).abs() < 1e-15);
        assert!(m_beta(0.25, beta(5.0)).unwrap() > 1.0);
    }

    #[test]
    fn optimal_policy_at_unit_budget_is_the_proposal() {
        let u = ResponseUniverse::uniform(4);
        let set = VerifierSet::from_indices(&u, 0..1).unwrap();
        let pol = optimal_policy(&u, &set, beta(1.0)).unwrap();
        assert_eq!((pol.on_value, pol.off_value), (1.0, 1.0));
        let dist = pol.distribution(&u, &set).unwrap();
        assert_eq!(dist, u.probs().to_vec());
    }

    #[test]
    fn optimal_policy_saturates_at_reciprocal_mass() {
        let u = ResponseUniverse::uniform(4);
        let set = VerifierSet::from_indices(&u, 0..1).unwrap();
        let pol = optimal_policy(&u, &set, beta(4.0)).unwrap();
        assert!((pol.on_value - 4.0).abs() < 1e-12);
        assert!(pol.off_value.abs() < 1e-12);
        assert!((pol.m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimal_policy_two_level_values() {
        let u = ResponseUniverse::uniform(4);
        let set = VerifierSet::from_indices(&u, 0..1).unwrap();
        let pol = optimal_policy(&u, &set, beta(2.0)).unwrap();
        assert!((pol.on_value - 2.732050807568877).abs() < 1e-12);
        assert!((pol.off_value - 0.42264973081037427).abs() < 1e-12);
        // Normalization and mass identities.
        let s = pol.set_mass;
        assert!((pol.on_value * s + pol.off_value * (1.0 - s) - 1.0).abs() < MASS_TOL);
        assert!((pol.m - pol.on_value * s).abs() < MASS_TOL);
    }

    #[test]
    fn policy_satisfies_its_own_budget() {
        let u = ResponseUniverse::new(
            vec!["a", "b", "c", "d"],
            vec![0.4, 0.3, 0.2, 0.1],
        )
        .unwrap();
        let set = VerifierSet::from_ids(&u, ["b", "d"]).unwrap();
        for b in [1.0, 1.3, 2.0, 3.0, 10.0] {
            let pol = optimal_policy(&u, &set, beta(b)).unwrap();
            let dist = pol.distribution(&u, &set).unwrap();
            let chi2 = chi_squared(&u, &dist).unwrap();
            assert!(chi2 <= b - 1.0 + CHI2_TOL, "chi2 {chi2} beyond budget {b}");
        }
    }

    #[test]
    fn chi_squared_examples() {
        let u = ResponseUniverse::new(vec!["a", "b"], vec![0.5, 0.5]).unwrap();
        assert!(chi_squared(&u, &[0.5, 0.5]).unwrap().abs() < 1e-15);
        assert!((chi_squared(&u, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chi_squared_rejects_mass_on_null_atoms() {
        let u = ResponseUniverse::new(vec!["a", "b", "c"], vec![0.5, 0.5, 0.0]).unwrap();
        assert!(matches!(
            chi_squared(&u, &[0.4, 0.4, 0.2]),
            Err(Error::NotAbsolutelyContinuous { .. })
        ));
        assert!(chi_squared(&u, &[0.5, 0.5, 0.0]).is_ok());
    }

    #[test]
    fn otc_values() {
        assert_eq!(otc(0.25, beta(1.0)).unwrap(), 0.0);
        assert!((otc(0.25, beta(4.0)).unwrap() - 0.75).abs() < 1e-15);
        assert!((otc(0.25, beta(6.0)).unwrap() - 0.75).abs() < 1e-15);
        assert!((otc(0.25, beta(2.0)).unwrap() - 0.4330127018922193).abs() < 1e-15);
    }

    #[test]
    fn otc_equals_total_variation() {
        for &s in &[0.1, 0.25, 0.5, 0.8] {
            for &b in &[1.0, 1.5, 2.5, 1.0 / 0.1, 20.0] {
                let u = ResponseUniverse::new(vec!["in", "out"], vec![s, 1.0 - s]).unwrap();
                let set = VerifierSet::from_ids(&u, ["in"]).unwrap();
                let pol = optimal_policy(&u, &set, beta(b)).unwrap();
                let dist = pol.distribution(&u, &set).unwrap();
                let tv = 0.5
                    * dist
                        .iter()
                        .zip(u.probs())
                        .map(|(n, p)| (n - p).abs())
                        .sum::<f64>();
                assert!((otc(s, beta(b)).unwrap() - tv).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn otc_monotone_in_budget() {
        let mut last = -1.0;
        for k in 0..200 {
            let b = 1.0 + k as f64 * 0.05;
            let v = otc(0.25, beta(b)).unwrap();
            assert!(v >= last - 1e-15);
            last = v;
        }
        assert!((otc(0.25, beta(4.0)).unwrap() - otc(0.25, beta(40.0)).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn regimes_partition_the_budget_axis() {
        let r = regime_of(0.5, 0.5, beta(1.5)).unwrap();
        assert_eq!(r.tag, RegimeTag::Transport);

        let r = regime_of(0.25, 0.5, beta(3.0)).unwrap();
        assert_eq!(r.tag, RegimeTag::PolicyImprovement);
        assert_eq!(r.subcase, Some(PiSubcase::A));
        assert_eq!((r.lower, r.upper), (2.0, 4.0));

        let r = regime_of(0.25, 0.5, beta(5.0)).unwrap();
        assert_eq!(r.tag, RegimeTag::Saturation);

        // Breakpoints are sharp: at the bounds the lower regime still holds.
        assert_eq!(regime_of(0.25, 0.5, beta(2.0)).unwrap().tag, RegimeTag::Transport);
        assert_eq!(
            regime_of(0.25, 0.5, beta(4.0)).unwrap().tag,
            RegimeTag::PolicyImprovement
        );
        // Sub-case (b) when the verifier set is lighter.
        let r = regime_of(0.5, 0.25, beta(3.0)).unwrap();
        assert_eq!(r.subcase, Some(PiSubcase::B));
    }

    #[test]
    fn envelope_values() {
        assert_eq!(envelope_m(0.3, beta(1.0)).unwrap(), 1.0);
        assert!((envelope_m(0.25, beta(4.0)).unwrap() - 4.0).abs() < 1e-12);
        assert!((envelope_m(0.25, beta(9.0)).unwrap() - 4.0).abs() < 1e-12);
        assert!((envelope_m(0.5, beta(1.5)).unwrap() - 1.7071067811865475).abs() < 1e-12);
    }

    #[test]
    fn envelope_matches_max_tilt_level() {
        for &s in &[0.1, 0.4, 0.9] {
            for &b in &[1.0, 1.7, 5.0, 30.0] {
                let (on, off) = tilt_values(s, beta(b)).unwrap();
                let m = envelope_m(s, beta(b)).unwrap();
                assert!((m - on.max(off)).abs() < 1e-15);
                assert!(m >= 1.0 - 1e-15);
            }
        }
    }

    #[test]
    fn tilt_at_full_mass_is_the_indicator() {
        let (on, off) = tilt_values(1.0, beta(3.0)).unwrap();
        assert_eq!((on, off), (1.0, 0.0));
        let (on, off) = tilt_values(1.0, beta(1.0)).unwrap();
        assert_eq!((on, off), (1.0, 0.0));
    }
}
