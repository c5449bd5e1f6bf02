//! Executable sampling algorithms and their exact induced distributions.
//!
//! Five algorithms share one episode interface: accept-if-correct (AiC),
//! sequential rejection sampling (SRS), sequential maximal coupling (SMC),
//! best-of-N (BoN) and batched rejection sampling (BRS). Sequential runs
//! draw proposals until acceptance; batched runs always consume `N + 1`
//! proposals. Each uniform variate comes from the counter-based stream of
//! `(master seed, episode index, draw index)`, so identical configs and
//! seeds replay identical episodes.
//!
//! [`exact_induced_distribution`] returns, without any sampling, the exact
//! per-atom distribution each algorithm induces; the Monte Carlo harness
//! and the acceptance suite lean on it as ground truth.

use crate::error::{Error, Result};
use crate::measures::{conditional, ResponseUniverse, VerifierSet};
use crate::rng::EpisodeRng;
use crate::transport::{tilt_values, CoverageBudget};

pub const DEFAULT_MAX_DRAWS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Aic,
    Srs,
    Smc,
    Bon,
    Brs,
}

impl Algorithm {
    pub fn is_batched(self) -> bool {
        matches!(self, Algorithm::Bon | Algorithm::Brs)
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Aic => "aic",
            Algorithm::Srs => "srs",
            Algorithm::Smc => "smc",
            Algorithm::Bon => "bon",
            Algorithm::Brs => "brs",
        }
    }
}

/// Which responses best-of-N inspects: the whole batch (matching the
/// induced-density law used by the theory oracle) or only the first `N`,
/// with the last response reserved as the fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BonScan {
    #[default]
    FullBatch,
    FirstN,
}

/// One sampler configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub algorithm: Algorithm,
    pub beta: CoverageBudget,
    /// The `N` of an `N + 1`-sample batch; present iff the algorithm is
    /// batched.
    pub batch_n: Option<u64>,
    /// Replaces the scalar verifier-set mass in the tilt and envelope; set
    /// membership still uses the actual verifier set.
    pub s_override: Option<f64>,
    /// Cap on sequential proposal loops; exhausting it is an error.
    pub max_draws: u64,
    pub bon_scan: BonScan,
}

impl SamplerConfig {
    pub fn sequential(algorithm: Algorithm, beta: CoverageBudget) -> Result<Self> {
        if algorithm.is_batched() {
            return Err(Error::InvalidConfig(format!(
                "{} is batched; use SamplerConfig::batched",
                algorithm.label()
            )));
        }
        Ok(Self {
            algorithm,
            beta,
            batch_n: None,
            s_override: None,
            max_draws: DEFAULT_MAX_DRAWS,
            bon_scan: BonScan::default(),
        })
    }

    pub fn batched(algorithm: Algorithm, beta: CoverageBudget, batch_n: u64) -> Result<Self> {
        if !algorithm.is_batched() {
            return Err(Error::InvalidConfig(format!(
                "{} is sequential; use SamplerConfig::sequential",
                algorithm.label()
            )));
        }
        Ok(Self {
            algorithm,
            beta,
            batch_n: Some(batch_n),
            s_override: None,
            max_draws: DEFAULT_MAX_DRAWS,
            bon_scan: BonScan::default(),
        })
    }

    pub fn with_s_override(mut self, s: f64) -> Result<Self> {
        if !s.is_finite() || s <= 0.0 || s > 1.0 {
            return Err(Error::InvalidParameter {
                name: "s_override",
                value: s,
                constraint: "must lie in (0,1]",
            });
        }
        self.s_override = Some(s);
        Ok(self)
    }

    pub fn with_max_draws(mut self, max_draws: u64) -> Result<Self> {
        if max_draws == 0 {
            return Err(Error::InvalidParameter {
                name: "max_draws",
                value: 0.0,
                constraint: "must be >= 1",
            });
        }
        self.max_draws = max_draws;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.algorithm.is_batched() != self.batch_n.is_some() {
            return Err(Error::InvalidConfig(
                "batch_n must be present exactly for batched algorithms".into(),
            ));
        }
        if self.max_draws == 0 {
            return Err(Error::InvalidConfig("max_draws must be >= 1".into()));
        }
        if let Some(s) = self.s_override {
            if !s.is_finite() || s <= 0.0 || s > 1.0 {
                return Err(Error::InvalidConfig(format!(
                    "s_override {s} outside (0,1]"
                )));
            }
        }
        Ok(())
    }

    /// The scalar mass fed into the tilt: the override when present, the
    /// true verifier-set mass otherwise.
    pub fn assumed_mass(&self, s_hat: &VerifierSet) -> f64 {
        self.s_override.unwrap_or_else(|| s_hat.mass())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptPath {
    /// The chosen response asserted membership in the verifier set.
    VerifiedCorrect,
    /// SMC's first-stage tilt comparison accepted the draw.
    CouplingAccept,
    /// The rejection-sampling coin accepted an off-set draw.
    RsAccept,
    /// A batched run returned the reserve sample.
    Fallback,
}

/// Outcome of one episode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpisodeRecord {
    /// Index of the chosen response in the universe's id order.
    pub chosen: usize,
    /// Proposals drawn from the universe; batched runs always report `N+1`.
    pub proposals_used: u64,
    pub accept_path: AcceptPath,
}

impl EpisodeRecord {
    pub fn hits(&self, s_star: &VerifierSet) -> bool {
        s_star.contains(self.chosen)
    }
}

fn effective_mass(config_mass: f64) -> Result<f64> {
    if !config_mass.is_finite() || config_mass <= 0.0 || config_mass > 1.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            value: config_mass,
            constraint: "effective verifier mass must lie in (0,1]",
        });
    }
    Ok(config_mass)
}

/// Accept-if-correct: draw until the response asserts membership.
pub fn run_aic(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    rng: &mut EpisodeRng,
    max_draws: u64,
) -> Result<EpisodeRecord> {
    s_hat.check_universe(universe)?;
    for n in 1..=max_draws {
        let y = universe.sample_index(rng.next_f64());
        if s_hat.contains(y) {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: n,
                accept_path: AcceptPath::VerifiedCorrect,
            });
        }
    }
    Err(Error::BudgetExhausted { draws: max_draws })
}

/// Sequential rejection sampling: members accepted outright, non-members
/// through the scaled tilt test `eta(y)/M >= u`.
pub fn run_srs(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    beta: CoverageBudget,
    rng: &mut EpisodeRng,
    max_draws: u64,
    s_override: Option<f64>,
) -> Result<EpisodeRecord> {
    s_hat.check_universe(universe)?;
    let s = effective_mass(s_override.unwrap_or_else(|| s_hat.mass()))?;
    let (on, off) = tilt_values(s, beta)?;
    let envelope = on.max(off);
    let mut used = 0;
    while used < max_draws {
        let y = universe.sample_index(rng.next_f64());
        let u = rng.next_f64();
        used += 1;
        if s_hat.contains(y) {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: used,
                accept_path: AcceptPath::VerifiedCorrect,
            });
        }
        if off / envelope >= u {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: used,
                accept_path: AcceptPath::RsAccept,
            });
        }
    }
    Err(Error::BudgetExhausted { draws: max_draws })
}

/// Sequential maximal coupling: one tilt comparison on the first draw, then
/// (on rejection) plain draws until a member appears.
pub fn run_smc(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    beta: CoverageBudget,
    rng: &mut EpisodeRng,
    max_draws: u64,
    s_override: Option<f64>,
) -> Result<EpisodeRecord> {
    s_hat.check_universe(universe)?;
    let s = effective_mass(s_override.unwrap_or_else(|| s_hat.mass()))?;
    let (on, off) = tilt_values(s, beta)?;
    let y = universe.sample_index(rng.next_f64());
    let u = rng.next_f64();
    let eta = if s_hat.contains(y) { on } else { off };
    if eta >= u {
        return Ok(EpisodeRecord {
            chosen: y,
            proposals_used: 1,
            accept_path: AcceptPath::CouplingAccept,
        });
    }
    let mut used = 1;
    while used < max_draws {
        let y = universe.sample_index(rng.next_f64());
        used += 1;
        if s_hat.contains(y) {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: used,
                accept_path: AcceptPath::VerifiedCorrect,
            });
        }
    }
    Err(Error::BudgetExhausted { draws: max_draws })
}

/// Best-of-N: `N + 1` iid proposals; uniform choice among the verified
/// members of the inspected pool, else a uniform fallback.
pub fn run_bon(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    batch_n: u64,
    rng: &mut EpisodeRng,
    scan: BonScan,
) -> Result<EpisodeRecord> {
    s_hat.check_universe(universe)?;
    let total = batch_n + 1;
    let batch: Vec<usize> = (0..total)
        .map(|_| universe.sample_index(rng.next_f64()))
        .collect();
    let inspected = match scan {
        BonScan::FullBatch => &batch[..],
        BonScan::FirstN => &batch[..batch_n as usize],
    };
    let members: Vec<usize> = inspected
        .iter()
        .copied()
        .filter(|&y| s_hat.contains(y))
        .collect();
    let u = rng.next_f64();
    let (chosen, path) = if members.is_empty() {
        match scan {
            BonScan::FullBatch => {
                let k = ((u * total as f64) as usize).min(batch.len() - 1);
                (batch[k], AcceptPath::Fallback)
            }
            BonScan::FirstN => (batch[batch_n as usize], AcceptPath::Fallback),
        }
    } else {
        let k = ((u * members.len() as f64) as usize).min(members.len() - 1);
        (members[k], AcceptPath::VerifiedCorrect)
    };
    Ok(EpisodeRecord {
        chosen,
        proposals_used: total,
        accept_path: path,
    })
}

/// Batched rejection sampling: the SRS acceptance test applied in order to
/// the first `N` samples; the last sample is the fallback.
pub fn run_brs(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    beta: CoverageBudget,
    batch_n: u64,
    rng: &mut EpisodeRng,
    s_override: Option<f64>,
) -> Result<EpisodeRecord> {
    s_hat.check_universe(universe)?;
    let s = effective_mass(s_override.unwrap_or_else(|| s_hat.mass()))?;
    let (on, off) = tilt_values(s, beta)?;
    let envelope = on.max(off);
    let total = batch_n + 1;
    let batch: Vec<usize> = (0..total)
        .map(|_| universe.sample_index(rng.next_f64()))
        .collect();
    let coins: Vec<f64> = (0..total).map(|_| rng.next_f64()).collect();
    for i in 0..batch_n as usize {
        let y = batch[i];
        if s_hat.contains(y) {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: total,
                accept_path: AcceptPath::VerifiedCorrect,
            });
        }
        if off / envelope >= coins[i] {
            return Ok(EpisodeRecord {
                chosen: y,
                proposals_used: total,
                accept_path: AcceptPath::RsAccept,
            });
        }
    }
    Ok(EpisodeRecord {
        chosen: batch[batch_n as usize],
        proposals_used: total,
        accept_path: AcceptPath::Fallback,
    })
}

/// Runs one episode of the configured algorithm.
pub fn run_episode(
    config: &SamplerConfig,
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    rng: &mut EpisodeRng,
) -> Result<EpisodeRecord> {
    config.validate()?;
    match config.algorithm {
        Algorithm::Aic => run_aic(universe, s_hat, rng, config.max_draws),
        Algorithm::Srs => run_srs(
            universe,
            s_hat,
            config.beta,
            rng,
            config.max_draws,
            config.s_override,
        ),
        Algorithm::Smc => run_smc(
            universe,
            s_hat,
            config.beta,
            rng,
            config.max_draws,
            config.s_override,
        ),
        Algorithm::Bon => run_bon(
            universe,
            s_hat,
            config.batch_n.expect("validated"),
            rng,
            config.bon_scan,
        ),
        Algorithm::Brs => run_brs(
            universe,
            s_hat,
            config.beta,
            config.batch_n.expect("validated"),
            rng,
            config.s_override,
        ),
    }
}

/// Per-round acceptance weights of the rejection test: members always pass,
/// non-members pass with probability `off / envelope`.
fn srs_accept_weights(s: f64, beta: CoverageBudget) -> Result<(f64, f64)> {
    let (on, off) = tilt_values(s, beta)?;
    let envelope = on.max(off);
    Ok((1.0, off / envelope))
}

fn two_level(
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
    on: f64,
    off: f64,
) -> Vec<f64> {
    (0..universe.len())
        .map(|i| universe.prob(i) * if s_hat.contains(i) { on } else { off })
        .collect()
}

/// The exact per-atom distribution the configured algorithm induces.
///
/// No randomness is involved: each algorithm's acceptance probabilities are
/// integrated in closed form. AiC induces the conditional measure on the
/// verifier set; SRS and SMC both induce the two-level tilt (they differ
/// only when the assumed mass is misspecified, in which case each induces
/// its own closed-form two-level distribution); BoN and BRS follow their
/// induced-density laws.
pub fn exact_induced_distribution(
    config: &SamplerConfig,
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
) -> Result<Vec<f64>> {
    config.validate()?;
    s_hat.check_universe(universe)?;
    let true_mass = s_hat.mass();
    match config.algorithm {
        Algorithm::Aic => {
            let cond = conditional(universe, s_hat)?;
            Ok(cond.probs().to_vec())
        }
        Algorithm::Srs => {
            let s = effective_mass(config.assumed_mass(s_hat))?;
            let (w_on, w_off) = srs_accept_weights(s, config.beta)?;
            // Acceptance renormalizes the per-round weights.
            let z = true_mass * w_on + (1.0 - true_mass) * w_off;
            if z <= 0.0 {
                return Err(Error::ZeroMassSet);
            }
            Ok(two_level(universe, s_hat, w_on / z, w_off / z))
        }
        Algorithm::Smc => {
            let s = effective_mass(config.assumed_mass(s_hat))?;
            let (_on, off) = tilt_values(s, config.beta)?;
            // First stage accepts members surely (on >= 1) and non-members
            // with probability min(1, off); the residual loop lands on the
            // conditional measure.
            let off_keep = off.min(1.0);
            let reject = (1.0 - true_mass) * (1.0 - off_keep);
            if true_mass <= 0.0 && reject > 0.0 {
                return Err(Error::ZeroMassSet);
            }
            let on_level = if true_mass > 0.0 {
                1.0 + reject / true_mass
            } else {
                0.0
            };
            Ok(two_level(universe, s_hat, on_level, off_keep))
        }
        Algorithm::Bon => {
            let n = config.batch_n.expect("validated");
            if true_mass <= 0.0 {
                // Nothing ever verifies; the batch fallback is a plain draw.
                return Ok(universe.probs().to_vec());
            }
            let miss = pow_u(1.0 - true_mass, n);
            let (on, off) = match config.bon_scan {
                BonScan::FullBatch => {
                    ((1.0 - miss * (1.0 - true_mass)) / true_mass, miss)
                }
                BonScan::FirstN => ((1.0 - miss) / true_mass + miss, miss),
            };
            Ok(two_level(universe, s_hat, on, off))
        }
        Algorithm::Brs => {
            let n = config.batch_n.expect("validated");
            let s = effective_mass(config.assumed_mass(s_hat))?;
            let (w_on, w_off) = srs_accept_weights(s, config.beta)?;
            let per_round = true_mass * w_on + (1.0 - true_mass) * w_off;
            let all_reject = pow_u(1.0 - per_round, n);
            let srs_dist = if per_round > 0.0 {
                two_level(universe, s_hat, w_on / per_round, w_off / per_round)
            } else {
                universe.probs().to_vec()
            };
            Ok((0..universe.len())
                .map(|i| (1.0 - all_reject) * srs_dist[i] + all_reject * universe.prob(i))
                .collect())
        }
    }
}

/// Expected number of proposals of the configured algorithm, valid for any
/// assumed mass (matching the closed forms when the assumed mass equals the
/// true one).
pub fn expected_proposals(
    config: &SamplerConfig,
    universe: &ResponseUniverse,
    s_hat: &VerifierSet,
) -> Result<f64> {
    config.validate()?;
    s_hat.check_universe(universe)?;
    let true_mass = s_hat.mass();
    match config.algorithm {
        Algorithm::Aic => {
            if true_mass <= 0.0 {
                return Err(Error::NeverTerminates);
            }
            Ok(1.0 / true_mass)
        }
        Algorithm::Srs => {
            let s = effective_mass(config.assumed_mass(s_hat))?;
            let (w_on, w_off) = srs_accept_weights(s, config.beta)?;
            let accept = true_mass * w_on + (1.0 - true_mass) * w_off;
            if accept <= 0.0 {
                return Err(Error::NeverTerminates);
            }
            Ok(1.0 / accept)
        }
        Algorithm::Smc => {
            let s = effective_mass(config.assumed_mass(s_hat))?;
            let (_on, off) = tilt_values(s, config.beta)?;
            let reject = (1.0 - true_mass) * (1.0 - off.min(1.0));
            if reject > 0.0 && true_mass <= 0.0 {
                return Err(Error::NeverTerminates);
            }
            Ok(1.0 + if reject > 0.0 { reject / true_mass } else { 0.0 })
        }
        Algorithm::Bon | Algorithm::Brs => {
            Ok(config.batch_n.expect("validated") as f64 + 1.0)
        }
    }
}

fn pow_u(base: f64, exp: u64) -> f64 {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MASS_TOL;
    use crate::theory::{bon_rn_derivative, brs_rn_derivative};
    use crate::transport::envelope_m;

    fn beta(b: f64) -> CoverageBudget {
        CoverageBudget::new(b).unwrap()
    }

    fn six_atom() -> (ResponseUniverse, VerifierSet) {
        let u = ResponseUniverse::new(
            vec!["a", "b", "c", "d", "e", "f"],
            vec![0.3, 0.25, 0.2, 0.1, 0.1, 0.05],
        )
        .unwrap();
        let set = VerifierSet::from_ids(&u, ["a", "d"]).unwrap();
        (u, set)
    }

    #[test]
    fn aic_accepts_first_draw_on_full_support() {
        let u = ResponseUniverse::uniform(5);
        let full = VerifierSet::full(&u);
        let mut rng = EpisodeRng::new(1, 0);
        let rec = run_aic(&u, &full, &mut rng, 10).unwrap();
        assert_eq!(rec.proposals_used, 1);
        assert_eq!(rec.accept_path, AcceptPath::VerifiedCorrect);
    }

    #[test]
    fn aic_errors_when_nothing_verifies() {
        let u = ResponseUniverse::uniform(5);
        let empty = VerifierSet::empty(&u);
        let mut rng = EpisodeRng::new(1, 0);
        let err = run_aic(&u, &empty, &mut rng, 10).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { draws: 10 });
    }

    #[test]
    fn aic_mean_proposals_tracks_reciprocal_mass() {
        let u = ResponseUniverse::uniform(10);
        let s_hat = VerifierSet::from_indices(&u, 0..2).unwrap();
        let episodes = 5000u64;
        let mut total = 0u64;
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(97, e);
            total += run_aic(&u, &s_hat, &mut rng, 1_000_000).unwrap().proposals_used;
        }
        let mean = total as f64 / episodes as f64;
        // Geometric(0.2): mean 5, sd sqrt(0.8)/0.2 ~ 4.47; 3 SE.
        let se = (0.8f64).sqrt() / 0.2 / (episodes as f64).sqrt();
        assert!((mean - 5.0).abs() <= 3.0 * se, "mean {mean}");
    }

    #[test]
    fn srs_at_unit_budget_accepts_everything() {
        let (u, set) = six_atom();
        for e in 0..200 {
            let mut rng = EpisodeRng::new(3, e);
            let rec = run_srs(&u, &set, beta(1.0), &mut rng, 10, None).unwrap();
            assert_eq!(rec.proposals_used, 1);
        }
        let cfg = SamplerConfig::sequential(Algorithm::Srs, beta(1.0)).unwrap();
        let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
        for (d, p) in dist.iter().zip(u.probs()) {
            assert!((d - p).abs() < MASS_TOL);
        }
    }

    #[test]
    fn srs_with_full_override_matches_aic_distribution() {
        let (u, set) = six_atom();
        let cfg = SamplerConfig::sequential(Algorithm::Srs, beta(2.0))
            .unwrap()
            .with_s_override(1.0)
            .unwrap();
        let srs = exact_induced_distribution(&cfg, &u, &set).unwrap();
        let aic = exact_induced_distribution(
            &SamplerConfig::sequential(Algorithm::Aic, beta(2.0)).unwrap(),
            &u,
            &set,
        )
        .unwrap();
        for (a, b) in srs.iter().zip(aic.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn srs_mean_proposals_matches_complexity_law() {
        let u = ResponseUniverse::uniform(8);
        let s_hat = VerifierSet::from_indices(&u, 0..4).unwrap();
        let episodes = 5000u64;
        let mut total = 0u64;
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(11, e);
            total += run_srs(&u, &s_hat, beta(1.5), &mut rng, 1_000_000, None)
                .unwrap()
                .proposals_used;
        }
        let mean = total as f64 / episodes as f64;
        let expected = 1.7071067811865475;
        // Geometric with p = 1/expected.
        let p: f64 = 1.0 / expected;
        let se = (1.0 - p).sqrt() / p / (episodes as f64).sqrt();
        assert!((mean - expected).abs() <= 3.0 * se, "mean {mean}");
    }

    #[test]
    fn smc_at_unit_budget_couples_on_first_draw() {
        let (u, set) = six_atom();
        for e in 0..200 {
            let mut rng = EpisodeRng::new(5, e);
            let rec = run_smc(&u, &set, beta(1.0), &mut rng, 10, None).unwrap();
            assert_eq!(rec.proposals_used, 1);
            assert_eq!(rec.accept_path, AcceptPath::CouplingAccept);
        }
    }

    #[test]
    fn smc_first_draw_acceptance_probability() {
        // P(first accepted) = 1 - (min(1, m_beta(s)) - s).
        let u = ResponseUniverse::uniform(8);
        let s_hat = VerifierSet::from_indices(&u, 0..4).unwrap();
        let episodes = 5000u64;
        let mut first = 0u64;
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(13, e);
            let rec = run_smc(&u, &s_hat, beta(1.5), &mut rng, 1_000_000, None).unwrap();
            if rec.proposals_used == 1 {
                first += 1;
            }
        }
        let p_hat = first as f64 / episodes as f64;
        let expected = 1.0 - (0.8535533905932737 - 0.5);
        let se = (expected * (1.0 - expected) / episodes as f64).sqrt();
        assert!((p_hat - expected).abs() <= 3.0 * se, "p_hat {p_hat}");
    }

    #[test]
    fn smc_and_srs_complexities_agree() {
        let u = ResponseUniverse::uniform(8);
        let s_hat = VerifierSet::from_indices(&u, 0..4).unwrap();
        let episodes = 5000u64;
        let mut smc_total = 0u64;
        let mut srs_total = 0u64;
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(17, e);
            smc_total += run_smc(&u, &s_hat, beta(1.5), &mut rng, 1_000_000, None)
                .unwrap()
                .proposals_used;
            let mut rng = EpisodeRng::new(19, e);
            srs_total += run_srs(&u, &s_hat, beta(1.5), &mut rng, 1_000_000, None)
                .unwrap()
                .proposals_used;
        }
        let smc_mean = smc_total as f64 / episodes as f64;
        let srs_mean = srs_total as f64 / episodes as f64;
        // Pooled 3-SE band around the shared law.
        let se = 1.5 / (episodes as f64).sqrt();
        assert!((smc_mean - srs_mean).abs() <= 3.0 * se * 1.5, "{smc_mean} vs {srs_mean}");
    }

    #[test]
    fn bon_with_full_support_is_a_plain_draw() {
        let u = ResponseUniverse::uniform(4);
        let full = VerifierSet::full(&u);
        let cfg = SamplerConfig::batched(Algorithm::Bon, beta(2.0), 3).unwrap();
        let dist = exact_induced_distribution(&cfg, &u, &full).unwrap();
        for (d, p) in dist.iter().zip(u.probs()) {
            assert!((d - p).abs() < MASS_TOL);
        }
        let mut rng = EpisodeRng::new(23, 0);
        let rec = run_bon(&u, &full, 3, &mut rng, BonScan::FullBatch).unwrap();
        assert_eq!(rec.proposals_used, 4);
        assert_eq!(rec.accept_path, AcceptPath::VerifiedCorrect);
    }

    #[test]
    fn bon_exact_distribution_matches_rn_derivative() {
        let (u, set) = six_atom();
        let s = set.mass();
        for n in 0..7 {
            let cfg = SamplerConfig::batched(Algorithm::Bon, beta(2.0), n).unwrap();
            let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
            let (on, off) = bon_rn_derivative(s, n).unwrap();
            for (i, &d) in dist.iter().enumerate() {
                let expected = u.prob(i) * if set.contains(i) { on } else { off };
                assert!((d - expected).abs() < 1e-12, "n {n} atom {i}");
            }
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < MASS_TOL);
        }
    }

    #[test]
    fn brs_exact_distribution_matches_rn_derivative() {
        let (u, set) = six_atom();
        let s = set.mass();
        for n in 0..7 {
            for &b in &[1.0, 1.5, 2.5, 4.0] {
                let cfg = SamplerConfig::batched(Algorithm::Brs, beta(b), n).unwrap();
                let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
                let (eta_on, eta_off) = tilt_values(s, beta(b)).unwrap();
                let m = envelope_m(s, beta(b)).unwrap();
                let (on, off) = brs_rn_derivative(eta_on, eta_off, m, n).unwrap();
                for (i, &d) in dist.iter().enumerate() {
                    let expected = u.prob(i) * if set.contains(i) { on } else { off };
                    assert!((d - expected).abs() < 1e-12, "n {n} beta {b}");
                }
            }
        }
    }

    #[test]
    fn brs_zero_batch_is_always_the_fallback() {
        let (u, set) = six_atom();
        for e in 0..100 {
            let mut rng = EpisodeRng::new(29, e);
            let rec = run_brs(&u, &set, beta(2.0), 0, &mut rng, None).unwrap();
            assert_eq!(rec.accept_path, AcceptPath::Fallback);
            assert_eq!(rec.proposals_used, 1);
        }
        let cfg = SamplerConfig::batched(Algorithm::Brs, beta(2.0), 0).unwrap();
        let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
        for (d, p) in dist.iter().zip(u.probs()) {
            assert!((d - p).abs() < MASS_TOL);
        }
    }

    #[test]
    fn brs_under_saturated_budget_only_accepts_members() {
        // Large budget drives the off-set tilt to zero: the rejection coin
        // never fires.
        let (u, set) = six_atom();
        for e in 0..300 {
            let mut rng = EpisodeRng::new(31, e);
            let rec = run_brs(&u, &set, beta(10.0), 4, &mut rng, None).unwrap();
            assert_ne!(rec.accept_path, AcceptPath::RsAccept);
        }
    }

    #[test]
    fn srs_and_smc_induce_the_same_distribution() {
        let (u, set) = six_atom();
        for &b in &[1.0, 1.3, 2.0, 3.5, 8.0] {
            let srs = exact_induced_distribution(
                &SamplerConfig::sequential(Algorithm::Srs, beta(b)).unwrap(),
                &u,
                &set,
            )
            .unwrap();
            let smc = exact_induced_distribution(
                &SamplerConfig::sequential(Algorithm::Smc, beta(b)).unwrap(),
                &u,
                &set,
            )
            .unwrap();
            for (a, c) in srs.iter().zip(smc.iter()) {
                assert!((a - c).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_override_collapses_all_sequential_samplers() {
        let (u, set) = six_atom();
        for &b in &[1.0, 2.0, 5.0] {
            let aic = exact_induced_distribution(
                &SamplerConfig::sequential(Algorithm::Aic, beta(b)).unwrap(),
                &u,
                &set,
            )
            .unwrap();
            for alg in [Algorithm::Srs, Algorithm::Smc] {
                let cfg = SamplerConfig::sequential(alg, beta(b))
                    .unwrap()
                    .with_s_override(1.0)
                    .unwrap();
                let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
                for (a, c) in aic.iter().zip(dist.iter()) {
                    assert!((a - c).abs() < 1e-12, "alg {alg:?} beta {b}");
                }
            }
        }
    }

    #[test]
    fn identical_keys_replay_identical_episodes() {
        let (u, set) = six_atom();
        let cfg = SamplerConfig::sequential(Algorithm::Srs, beta(1.5)).unwrap();
        for e in 0..50 {
            let mut a = EpisodeRng::new(7, e);
            let mut b = EpisodeRng::new(7, e);
            assert_eq!(
                run_episode(&cfg, &u, &set, &mut a).unwrap(),
                run_episode(&cfg, &u, &set, &mut b).unwrap()
            );
        }
    }

    #[test]
    fn empirical_histograms_match_exact_distributions() {
        // Pearson goodness-of-fit at the 0.1% level; critical values from
        // the Wilson-Hilferty cube approximation.
        fn chi2_crit(df: f64) -> f64 {
            let z = 3.0902; // z_{0.999}
            let t = 1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt();
            df * t * t * t
        }
        let (u, set) = six_atom();
        let episodes = 5000u64;
        let configs = [
            SamplerConfig::sequential(Algorithm::Aic, beta(2.0)).unwrap(),
            SamplerConfig::sequential(Algorithm::Srs, beta(1.5)).unwrap(),
            SamplerConfig::sequential(Algorithm::Smc, beta(1.5)).unwrap(),
            SamplerConfig::batched(Algorithm::Bon, beta(2.0), 2).unwrap(),
            SamplerConfig::batched(Algorithm::Brs, beta(1.5), 2).unwrap(),
        ];
        for (ci, cfg) in configs.iter().enumerate() {
            let exact = exact_induced_distribution(cfg, &u, &set).unwrap();
            let mut counts = vec![0u64; u.len()];
            for e in 0..episodes {
                let mut rng = EpisodeRng::new(1000 + ci as u64, e);
                counts[run_episode(cfg, &u, &set, &mut rng).unwrap().chosen] += 1;
            }
            let mut stat = 0.0;
            let mut df = 0.0;
            for i in 0..u.len() {
                if exact[i] <= 0.0 {
                    assert_eq!(counts[i], 0, "mass on excluded atom {i}");
                    continue;
                }
                let expected = exact[i] * episodes as f64;
                stat += (counts[i] as f64 - expected).powi(2) / expected;
                df += 1.0;
            }
            let crit = chi2_crit(df - 1.0);
            assert!(stat < crit, "{:?}: stat {stat} >= crit {crit}", cfg.algorithm);
        }
    }

    #[test]
    fn srs_stopping_times_are_geometric() {
        let u = ResponseUniverse::uniform(8);
        let s_hat = VerifierSet::from_indices(&u, 0..4).unwrap();
        let episodes = 5000u64;
        let mut draws = Vec::with_capacity(episodes as usize);
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(37, e);
            draws.push(
                run_srs(&u, &s_hat, beta(1.5), &mut rng, 1_000_000, None)
                    .unwrap()
                    .proposals_used as f64,
            );
        }
        let n = episodes as f64;
        let p: f64 = 0.5 / 0.8535533905932737; // s_ver / min(1, m_beta)
        let mean: f64 = draws.iter().sum::<f64>() / n;
        let var: f64 = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
        let exp_mean = 1.0 / p;
        let exp_var = (1.0 - p) / (p * p);
        let se_mean = exp_var.sqrt() / n.sqrt();
        assert!((mean - exp_mean).abs() <= 3.0 * se_mean, "mean {mean}");
        // Fourth-moment SE estimate for the variance comparison.
        let m4: f64 = draws.iter().map(|d| (d - mean).powi(4)).sum::<f64>() / n;
        let se_var = ((m4 - exp_var * exp_var).max(0.0) / n).sqrt();
        assert!((var - exp_var).abs() <= 3.0 * se_var, "var {var} vs {exp_var}");
    }

    #[test]
    fn bon_saturated_subopt_matches_theory_empirically() {
        // s = 0.5, N = 3, saturated budget: SubOpt = (1-s)^4 = 0.0625.
        let u = ResponseUniverse::uniform(8);
        let s_star = VerifierSet::from_indices(&u, 0..4).unwrap();
        let episodes = 5000u64;
        let mut hits = 0u64;
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(71, e);
            let rec = run_bon(&u, &s_star, 3, &mut rng, BonScan::FullBatch).unwrap();
            assert_eq!(rec.proposals_used, 4);
            if rec.hits(&s_star) {
                hits += 1;
            }
        }
        let accuracy = hits as f64 / episodes as f64;
        let subopt = 1.0 - accuracy; // skyline mass is 1 at beta >= 2
        let se = (accuracy * (1.0 - accuracy) / episodes as f64).sqrt();
        assert!((subopt - 0.0625).abs() <= 3.0 * se, "subopt {subopt}");
    }

    #[test]
    fn brs_single_round_is_an_even_mixture_at_envelope_two() {
        // s_ver = 0.5 and beta >= 2 give envelope exactly 2; with N = 1 the
        // induced distribution is (tilt + proposal) / 2 per atom.
        let u = ResponseUniverse::uniform(8);
        let set = VerifierSet::from_indices(&u, 0..4).unwrap();
        let cfg = SamplerConfig::batched(Algorithm::Brs, beta(2.0), 1).unwrap();
        let dist = exact_induced_distribution(&cfg, &u, &set).unwrap();
        let (on, off) = tilt_values(0.5, beta(2.0)).unwrap();
        assert!((on.max(off) - 2.0).abs() < 1e-12);
        for (i, &d) in dist.iter().enumerate() {
            let tilt = u.prob(i) * if set.contains(i) { on } else { off };
            let expected = 0.5 * tilt + 0.5 * u.prob(i);
            assert!((d - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn aic_stopping_times_are_geometric() {
        let u = ResponseUniverse::uniform(10);
        let s_hat = VerifierSet::from_indices(&u, 0..2).unwrap();
        let episodes = 5000u64;
        let mut draws = Vec::with_capacity(episodes as usize);
        for e in 0..episodes {
            let mut rng = EpisodeRng::new(73, e);
            draws.push(run_aic(&u, &s_hat, &mut rng, 1_000_000).unwrap().proposals_used as f64);
        }
        let n = episodes as f64;
        let p: f64 = 0.2;
        let mean: f64 = draws.iter().sum::<f64>() / n;
        let var: f64 = draws.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
        let exp_var = (1.0 - p) / (p * p);
        assert!((mean - 1.0 / p).abs() <= 3.0 * (exp_var / n).sqrt(), "mean {mean}");
        let m4: f64 = draws.iter().map(|d| (d - mean).powi(4)).sum::<f64>() / n;
        let se_var = ((m4 - exp_var * exp_var).max(0.0) / n).sqrt();
        assert!((var - exp_var).abs() <= 3.0 * se_var, "var {var} vs {exp_var}");
    }

    #[test]
    fn config_validation_rejects_mismatched_shapes() {
        assert!(SamplerConfig::sequential(Algorithm::Bon, beta(2.0)).is_err());
        assert!(SamplerConfig::batched(Algorithm::Aic, beta(2.0), 3).is_err());
        let cfg = SamplerConfig::sequential(Algorithm::Srs, beta(2.0)).unwrap();
        assert!(cfg.clone().with_s_override(0.0).is_err());
        assert!(cfg.clone().with_s_override(1.5).is_err());
        assert!(cfg.with_max_draws(0).is_err());
    }

    #[test]
    fn expected_proposals_matches_known_laws() {
        let u = ResponseUniverse::uniform(8);
        let s_hat = VerifierSet::from_indices(&u, 0..4).unwrap();
        let aic = SamplerConfig::sequential(Algorithm::Aic, beta(1.5)).unwrap();
        assert!((expected_proposals(&aic, &u, &s_hat).unwrap() - 2.0).abs() < 1e-12);
        for alg in [Algorithm::Srs, Algorithm::Smc] {
            let cfg = SamplerConfig::sequential(alg, beta(1.5)).unwrap();
            let v = expected_proposals(&cfg, &u, &s_hat).unwrap();
            assert!((v - 1.7071067811865475).abs() < 1e-12, "{alg:?}");
        }
        let bon = SamplerConfig::batched(Algorithm::Bon, beta(1.5), 4).unwrap();
        assert_eq!(expected_proposals(&bon, &u, &s_hat).unwrap(), 5.0);
    }
}
