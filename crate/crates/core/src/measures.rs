//! Finite discrete proposal measures, verifier sets and ROC accounting.
//!
//! A [`ResponseUniverse`] is the proposal measure `mu`: an ordered list of
//! response ids with probabilities summing to one. A [`VerifierSet`] is a
//! subset of the universe playing the role of either the ground-truth set
//! `S*` or an approximate verifier set `S_hat`; its mass under `mu` is
//! cached at construction. [`roc_of`] scores an approximate set against a
//! ground truth, and [`construct_verifier`] builds a set hitting target
//! `(J, s_ver)` operating characteristics by greedy mass accumulation.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Probability masses are considered exact up to this absolute tolerance.
pub const MASS_TOL: f64 = 1e-12;

/// The proposal measure: response ids with aligned probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseUniverse {
    ids: Vec<String>,
    probs: Vec<f64>,
    cdf: Vec<f64>,
    index: HashMap<String, usize>,
}

impl ResponseUniverse {
    /// Validates that probabilities are non-negative, sum to one within
    /// `1e-12`, and that ids are unique.
    pub fn new<I: Into<String>>(ids: Vec<I>, probs: Vec<f64>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.len() != probs.len() {
            return Err(Error::SetUniverseMismatch {
                set_len: probs.len(),
                universe_len: ids.len(),
            });
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateId(id.clone()));
            }
        }
        let mut sum = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::BadProbability { index: i, value: p });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::Unnormalized { sum });
        }
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cdf.push(acc);
        }
        Ok(Self { ids, probs, cdf, index })
    }

    /// Uniform measure on `n` atoms with generated ids `y0001, y0002, ...`.
    pub fn uniform(n: usize) -> Self {
        let ids: Vec<String> = (1..=n).map(|i| format!("y{i:04}")).collect();
        let probs = vec![1.0 / n as f64; n];
        Self::new(ids, probs).expect("uniform measure is always valid")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Inverse-CDF draw over the fixed id order: the smallest index whose
    /// cumulative mass exceeds `u`. Zero-probability atoms are never drawn.
    pub fn sample_index(&self, u: f64) -> usize {
        debug_assert!((0.0..1.0).contains(&u));
        let mut idx = match self
            .cdf
            .binary_search_by(|c| c.partial_cmp(&u).expect("cdf is finite"))
        {
            // `u` landed exactly on a boundary: the next atom owns [cdf, next).
            Ok(i) => (i + 1).min(self.len() - 1),
            Err(i) => i.min(self.len() - 1),
        };
        // Boundary hits and trailing rounding dust could otherwise land on
        // null atoms.
        while self.probs[idx] == 0.0 && idx + 1 < self.len() {
            idx += 1;
        }
        while self.probs[idx] == 0.0 && idx > 0 {
            idx -= 1;
        }
        idx
    }

    /// Atom indices ranked by descending probability, universe order as the
    /// tie-break.
    pub fn ranked_indices(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.probs[b]
                .partial_cmp(&self.probs[a])
                .expect("probabilities are finite")
                .then(a.cmp(&b))
        });
        order
    }
}

/// A membership subset of a universe with its mass under `mu` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifierSet {
    mask: Vec<bool>,
    indices: Vec<usize>,
    mass: f64,
}

impl VerifierSet {
    pub fn from_mask(universe: &ResponseUniverse, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != universe.len() {
            return Err(Error::SetUniverseMismatch {
                set_len: mask.len(),
                universe_len: universe.len(),
            });
        }
        let indices: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
        let mass = indices.iter().map(|&i| universe.prob(i)).sum();
        Ok(Self { mask, indices, mass })
    }

    pub fn from_indices(
        universe: &ResponseUniverse,
        indices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut mask = vec![false; universe.len()];
        for i in indices {
            if i >= universe.len() {
                return Err(Error::SetUniverseMismatch {
                    set_len: i + 1,
                    universe_len: universe.len(),
                });
            }
            mask[i] = true;
        }
        Self::from_mask(universe, mask)
    }

    /// Builds a set from response ids; ids not present in the universe are a
    /// membership error.
    pub fn from_ids<S: AsRef<str>>(
        universe: &ResponseUniverse,
        ids: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let mut mask = vec![false; universe.len()];
        for id in ids {
            let id = id.as_ref();
            let i = universe
                .position(id)
                .ok_or_else(|| Error::UnknownId(id.to_string()))?;
            mask[i] = true;
        }
        Self::from_mask(universe, mask)
    }

    pub fn full(universe: &ResponseUniverse) -> Self {
        Self::from_mask(universe, vec![true; universe.len()]).expect("full set is valid")
    }

    pub fn empty(universe: &ResponseUniverse) -> Self {
        Self::from_mask(universe, vec![false; universe.len()]).expect("empty set is valid")
    }

    pub fn complement(&self, universe: &ResponseUniverse) -> Result<Self> {
        self.check_universe(universe)?;
        Self::from_mask(universe, self.mask.iter().map(|&b| !b).collect())
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.mask.get(atom).copied().unwrap_or(false)
    }

    /// Cached probability mass of the set under the universe it was built
    /// against.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub(crate) fn check_universe(&self, universe: &ResponseUniverse) -> Result<()> {
        if self.mask.len() != universe.len() {
            return Err(Error::SetUniverseMismatch {
                set_len: self.mask.len(),
                universe_len: universe.len(),
            });
        }
        Ok(())
    }
}

/// Operating characteristics of an approximate verifier against the ground
/// truth: `youden_j = tpr - fpr`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocProfile {
    pub tpr: f64,
    pub fpr: f64,
    pub youden_j: f64,
}

impl RocProfile {
    /// Mass the proposal puts on the verifier set implied by this profile:
    /// `s * tpr + (1 - s) * fpr`.
    pub fn implied_s_ver(&self, s_star_mass: f64) -> f64 {
        s_star_mass * self.tpr + (1.0 - s_star_mass) * self.fpr
    }
}

/// Probability mass of `set` under `universe`, recomputed from scratch.
pub fn mass(universe: &ResponseUniverse, set: &VerifierSet) -> Result<f64> {
    set.check_universe(universe)?;
    Ok(set.indices().iter().map(|&i| universe.prob(i)).sum())
}

/// TPR, FPR and Youden's J of `s_hat` against the ground truth `s_star`.
///
/// Requires `0 < mass(s_star) < 1`: with a degenerate ground truth one of
/// the two rates has an empty denominator.
pub fn roc_of(
    universe: &ResponseUniverse,
    s_star: &VerifierSet,
    s_hat: &VerifierSet,
) -> Result<RocProfile> {
    s_star.check_universe(universe)?;
    s_hat.check_universe(universe)?;
    let s = s_star.mass();
    if s <= MASS_TOL || s >= 1.0 - MASS_TOL {
        return Err(Error::DegenerateGroundTruth { mass: s });
    }
    let mut tp = 0.0;
    let mut fp = 0.0;
    for &i in s_hat.indices() {
        if s_star.contains(i) {
            tp += universe.prob(i);
        } else {
            fp += universe.prob(i);
        }
    }
    let tpr = tp / s;
    let fpr = fp / (1.0 - s);
    Ok(RocProfile { tpr, fpr, youden_j: tpr - fpr })
}

/// The proposal measure conditioned on `set`: zero mass outside the set,
/// probabilities renormalized by the set mass inside it.
pub fn conditional(universe: &ResponseUniverse, set: &VerifierSet) -> Result<ResponseUniverse> {
    set.check_universe(universe)?;
    let m = set.mass();
    if m <= 0.0 {
        return Err(Error::ZeroMassSet);
    }
    let probs: Vec<f64> = (0..universe.len())
        .map(|i| if set.contains(i) { universe.prob(i) / m } else { 0.0 })
        .collect();
    // Renormalization can leave the sum a few ulp off 1; pay it back on the
    // heaviest member so downstream validation stays exact.
    let mut probs = probs;
    let sum: f64 = probs.iter().sum();
    if sum > 0.0 {
        let heaviest = *set
            .indices()
            .iter()
            .max_by(|&&a, &&b| probs[a].partial_cmp(&probs[b]).expect("finite"))
            .expect("non-empty set");
        probs[heaviest] += 1.0 - sum;
    }
    ResponseUniverse::new(universe.ids().to_vec(), probs)
}

/// Greedy accumulation of `candidates` (already ranked by descending
/// probability) toward `target` mass: take everything that fits, skipping
/// atoms that would overshoot, then add the single best overshooting atom
/// if that lands strictly closer.
fn greedy_prefix(universe: &ResponseUniverse, candidates: &[usize], target: f64) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut skipped = Vec::new();
    let mut acc = 0.0;
    for &i in candidates {
        let w = universe.prob(i);
        if acc + w <= target + MASS_TOL {
            acc += w;
            chosen.push(i);
        } else {
            skipped.push(i);
        }
    }
    // One overshooting atom may still improve the fit; pick the best one.
    let mut best = (target - acc).abs();
    let mut extra = None;
    for &i in &skipped {
        let err = (acc + universe.prob(i) - target).abs();
        if err < best {
            best = err;
            extra = Some(i);
        }
    }
    if let Some(i) = extra {
        chosen.push(i);
        chosen.sort_unstable();
    }
    chosen
}

/// Greedy descending-probability fill over the whole universe until the
/// accumulated mass is as close to `target_mass` as a prefix allows.
pub fn greedy_fill(universe: &ResponseUniverse, target_mass: f64) -> Result<VerifierSet> {
    if !(0.0..=1.0).contains(&target_mass) {
        return Err(Error::InvalidParameter {
            name: "target_mass",
            value: target_mass,
            constraint: "must lie in [0,1]",
        });
    }
    let ranked = universe.ranked_indices();
    VerifierSet::from_indices(universe, greedy_prefix(universe, &ranked, target_mass))
}

/// Builds an approximate verifier set with target Youden index and mass.
///
/// The targets pin the operating point through `tpr* = s_ver + (1-s) J` and
/// `fpr* = s_ver - s J`; candidates inside and outside `s_star` are each
/// ranked in descending probability (universe order as tie-break) and
/// accumulated greedily until the per-class masses `s*tpr*` and
/// `(1-s)*fpr*` are met as closely as the support allows. Errors if the
/// implied rates leave `[0,1]`, or if the achieved `(J, s_ver)` miss the
/// targets by more than `tol`.
pub fn construct_verifier(
    universe: &ResponseUniverse,
    s_star: &VerifierSet,
    target_j: f64,
    target_s_ver: f64,
    tol: f64,
) -> Result<VerifierSet> {
    s_star.check_universe(universe)?;
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            constraint: "must be > 0",
        });
    }
    let s = s_star.mass();
    if s <= MASS_TOL || s >= 1.0 - MASS_TOL {
        return Err(Error::DegenerateGroundTruth { mass: s });
    }
    let tpr_target = target_s_ver + (1.0 - s) * target_j;
    let fpr_target = target_s_ver - s * target_j;
    let in_unit = |x: f64| (-MASS_TOL..=1.0 + MASS_TOL).contains(&x);
    if !in_unit(tpr_target) || !in_unit(fpr_target) {
        return Err(Error::InfeasibleRocTargets { tpr: tpr_target, fpr: fpr_target });
    }

    let ranked = universe.ranked_indices();
    let inside: Vec<usize> = ranked.iter().copied().filter(|&i| s_star.contains(i)).collect();
    let outside: Vec<usize> = ranked.iter().copied().filter(|&i| !s_star.contains(i)).collect();

    let mut members = greedy_prefix(universe, &inside, s * tpr_target);
    members.extend(greedy_prefix(universe, &outside, (1.0 - s) * fpr_target));
    let s_hat = VerifierSet::from_indices(universe, members)?;

    let achieved = roc_of(universe, s_star, &s_hat)?;
    let achieved_s_ver = s_hat.mass();
    if (achieved.youden_j - target_j).abs() > tol || (achieved_s_ver - target_s_ver).abs() > tol {
        return Err(Error::RocGranularity {
            achieved_j: achieved.youden_j,
            achieved_s_ver,
            target_j,
            target_s_ver,
            tol,
        });
    }
    Ok(s_hat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_atom() -> ResponseUniverse {
        ResponseUniverse::new(vec!["a", "b", "c"], vec![0.5, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn mass_of_full_and_empty_sets() {
        let u = ResponseUniverse::uniform(4);
        let full = VerifierSet::full(&u);
        let empty = VerifierSet::empty(&u);
        assert_eq!(mass(&u, &full).unwrap(), 1.0);
        assert_eq!(mass(&u, &empty).unwrap(), 0.0);
    }

    #[test]
    fn mass_sums_member_probabilities() {
        let u = three_atom();
        let set = VerifierSet::from_ids(&u, ["a", "b"]).unwrap();
        assert!((mass(&u, &set).unwrap() - 0.8).abs() < MASS_TOL);
        assert!((set.mass() - 0.8).abs() < MASS_TOL);
    }

    #[test]
    fn unknown_id_is_a_membership_error() {
        let u = three_atom();
        let err = VerifierSet::from_ids(&u, ["a", "zz"]).unwrap_err();
        assert_eq!(err, Error::UnknownId("zz".into()));
    }

    #[test]
    fn universe_rejects_bad_inputs() {
        assert!(matches!(
            ResponseUniverse::new(vec!["a", "a"], vec![0.5, 0.5]),
            Err(Error::DuplicateId(_))
        ));
        assert!(matches!(
            ResponseUniverse::new(vec!["a", "b"], vec![0.7, -0.3]),
            Err(Error::BadProbability { .. })
        ));
        assert!(matches!(
            ResponseUniverse::new(vec!["a", "b"], vec![0.7, 0.2]),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn roc_of_perfect_and_inverted_verifiers() {
        let u = ResponseUniverse::uniform(10);
        let s_star = VerifierSet::from_indices(&u, 0..4).unwrap();
        let perfect = roc_of(&u, &s_star, &s_star).unwrap();
        assert_eq!((perfect.tpr, perfect.fpr, perfect.youden_j), (1.0, 0.0, 1.0));

        let inverted = s_star.complement(&u).unwrap();
        let roc = roc_of(&u, &s_star, &inverted).unwrap();
        assert_eq!((roc.tpr, roc.fpr, roc.youden_j), (0.0, 1.0, -1.0));
    }

    #[test]
    fn roc_of_counts_masses_on_ten_atoms() {
        // S* = 4 of 10 uniform atoms, S_hat = 2 of those plus 1 outside.
        let u = ResponseUniverse::uniform(10);
        let s_star = VerifierSet::from_indices(&u, 0..4).unwrap();
        let s_hat = VerifierSet::from_indices(&u, [0, 1, 7]).unwrap();
        let roc = roc_of(&u, &s_star, &s_hat).unwrap();
        assert!((roc.tpr - 0.5).abs() < 1e-15);
        assert!((roc.fpr - 1.0 / 6.0).abs() < 1e-15);
        assert!((roc.youden_j - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn roc_of_rejects_degenerate_ground_truth() {
        let u = ResponseUniverse::uniform(4);
        let all = VerifierSet::full(&u);
        let none = VerifierSet::empty(&u);
        assert!(matches!(
            roc_of(&u, &all, &none),
            Err(Error::DegenerateGroundTruth { .. })
        ));
        assert!(matches!(
            roc_of(&u, &none, &all),
            Err(Error::DegenerateGroundTruth { .. })
        ));
    }

    #[test]
    fn s_ver_identity_holds() {
        let u = three_atom();
        let s_star = VerifierSet::from_ids(&u, ["a"]).unwrap();
        let s_hat = VerifierSet::from_ids(&u, ["a", "c"]).unwrap();
        let roc = roc_of(&u, &s_star, &s_hat).unwrap();
        assert!((roc.implied_s_ver(s_star.mass()) - s_hat.mass()).abs() < MASS_TOL);
    }

    #[test]
    fn conditional_on_full_support_is_identity() {
        let u = three_atom();
        let cond = conditional(&u, &VerifierSet::full(&u)).unwrap();
        for i in 0..u.len() {
            assert!((cond.prob(i) - u.prob(i)).abs() < MASS_TOL);
        }
    }

    #[test]
    fn conditional_renormalizes() {
        let u = three_atom();
        let set = VerifierSet::from_ids(&u, ["b", "c"]).unwrap();
        let cond = conditional(&u, &set).unwrap();
        assert_eq!(cond.prob(0), 0.0);
        assert!((cond.prob(1) - 0.6).abs() < MASS_TOL);
        assert!((cond.prob(2) - 0.4).abs() < MASS_TOL);
    }

    #[test]
    fn conditional_of_uniform_subset_is_uniform() {
        let u = ResponseUniverse::uniform(12);
        let set = VerifierSet::from_indices(&u, [1, 4, 9]).unwrap();
        let cond = conditional(&u, &set).unwrap();
        for &i in set.indices() {
            assert!((cond.prob(i) - 1.0 / 3.0).abs() < MASS_TOL);
        }
    }

    #[test]
    fn conditional_rejects_zero_mass() {
        let u = three_atom();
        let empty = VerifierSet::empty(&u);
        assert_eq!(conditional(&u, &empty).unwrap_err(), Error::ZeroMassSet);
    }

    #[test]
    fn construct_verifier_perfect_targets_recover_s_star() {
        let u = ResponseUniverse::uniform(20);
        let s_star = VerifierSet::from_indices(&u, 3..9).unwrap();
        let s_hat = construct_verifier(&u, &s_star, 1.0, s_star.mass(), 1e-9).unwrap();
        assert_eq!(s_hat, s_star);
    }

    #[test]
    fn construct_verifier_random_guess_splits_classes() {
        // J = 0 with s_ver = s on a uniform universe with s = 0.5: the greedy
        // pick takes half of each class.
        let u = ResponseUniverse::uniform(8);
        let s_star = VerifierSet::from_indices(&u, 0..4).unwrap();
        let s_hat = construct_verifier(&u, &s_star, 0.0, 0.5, 1e-9).unwrap();
        let roc = roc_of(&u, &s_star, &s_hat).unwrap();
        assert!((roc.tpr - 0.5).abs() < MASS_TOL);
        assert!((roc.fpr - 0.5).abs() < MASS_TOL);
        let inside = s_hat.indices().iter().filter(|&&i| s_star.contains(i)).count();
        assert_eq!((inside, s_hat.len()), (2, 4));
    }

    #[test]
    fn construct_verifier_on_twenty_atoms_lands_within_an_atom() {
        // s = 0.3, targets J = 0.5, s_ver = 0.3 -> tpr* = 0.65, fpr* = 0.15.
        let u = ResponseUniverse::uniform(20);
        let s_star = VerifierSet::from_indices(&u, 0..6).unwrap();
        let s_hat = construct_verifier(&u, &s_star, 0.5, 0.3, 0.06).unwrap();
        let tp: f64 = s_hat
            .indices()
            .iter()
            .filter(|&&i| s_star.contains(i))
            .map(|&i| u.prob(i))
            .sum();
        let fp = s_hat.mass() - tp;
        assert!((tp - 0.3 * 0.65).abs() <= 0.05 + MASS_TOL);
        assert!((fp - 0.7 * 0.15).abs() <= 0.05 + MASS_TOL);
    }

    #[test]
    fn construct_verifier_rejects_infeasible_targets() {
        let u = ResponseUniverse::uniform(20);
        let s_star = VerifierSet::from_indices(&u, 0..5).unwrap();
        // tpr* = 0.5 + 0.75 * 0.9 > 1.
        assert!(matches!(
            construct_verifier(&u, &s_star, 0.9, 0.5, 0.1),
            Err(Error::InfeasibleRocTargets { .. })
        ));
    }

    #[test]
    fn construct_verifier_reports_granularity_failures() {
        // Two atoms only: no subset gets anywhere near J = 0.5.
        let u = ResponseUniverse::new(vec!["a", "b"], vec![0.5, 0.5]).unwrap();
        let s_star = VerifierSet::from_ids(&u, ["a"]).unwrap();
        let err = construct_verifier(&u, &s_star, 0.5, 0.5, 1e-3).unwrap_err();
        assert!(matches!(err, Error::RocGranularity { .. }));
    }

    #[test]
    fn construct_verifier_is_deterministic() {
        let u = ResponseUniverse::uniform(30);
        let s_star = VerifierSet::from_indices(&u, 0..9).unwrap();
        let a = construct_verifier(&u, &s_star, 0.4, 0.35, 0.05).unwrap();
        let b = construct_verifier(&u, &s_star, 0.4, 0.35, 0.05).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn greedy_fill_hits_reachable_masses() {
        let u = three_atom();
        let set = greedy_fill(&u, 0.8).unwrap();
        assert!((set.mass() - 0.8).abs() < MASS_TOL);
        let everything = greedy_fill(&u, 1.0).unwrap();
        assert_eq!(everything.len(), 3);
    }

    #[test]
    fn greedy_fill_skips_oversized_atoms_for_smaller_ones() {
        // 0.25 fits; 0.2 and 0.12 overshoot 0.3; 0.05 completes it exactly.
        let u = ResponseUniverse::new(
            vec!["a", "b", "c", "d", "e"],
            vec![0.25, 0.2, 0.12, 0.05, 0.38],
        )
        .unwrap();
        // Ranked order is e(0.38), a(0.25), b(0.2), c(0.12), d(0.05).
        let set = greedy_fill(&u, 0.3).unwrap();
        assert!((set.mass() - 0.3).abs() < MASS_TOL, "mass {}", set.mass());
        assert!(set.contains(0) && set.contains(3));
    }

    #[test]
    fn greedy_fill_takes_the_closest_overshoot_when_nothing_fits() {
        let u = ResponseUniverse::new(vec!["a", "b", "c"], vec![0.5, 0.3, 0.2]).unwrap();
        // Nothing fits under 0.15; the closest single atom is c (0.2).
        let set = greedy_fill(&u, 0.15).unwrap();
        assert_eq!(set.indices(), &[2]);
    }

    #[test]
    fn sample_index_respects_id_order() {
        let u = three_atom();
        assert_eq!(u.sample_index(0.0), 0);
        assert_eq!(u.sample_index(0.4999), 0);
        assert_eq!(u.sample_index(0.5), 1);
        assert_eq!(u.sample_index(0.7999), 1);
        assert_eq!(u.sample_index(0.8), 2);
        assert_eq!(u.sample_index(0.999999), 2);
    }
}
