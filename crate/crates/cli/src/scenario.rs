//! Scenario files: a versioned key-value text format describing the
//! proposal measure, the ground-truth set and the verifier.
//!
//! ```text
//! # any line starting with '#' is a comment
//! version = 1
//! universe = zipf(64, 1.1)        # or uniform(N) | dirichlet(N, conc, seed) | explicit
//! # with `universe = explicit`:
//! # ids = a, b, c
//! # probs = 0.5, 0.3, 0.2
//! s_star = mass(0.25)             # or members(a, b)
//! verifier = targets(0.5, 0.32, 0.05)   # (j, s_ver, tol); or members(...) | ground_truth
//! episodes = 5000
//! seed = 42
//! ```
//!
//! `s_star = mass(x)` fills the set greedily by descending probability;
//! `verifier = targets(...)` uses the greedy two-class construction with
//! the given tolerance; `verifier = ground_truth` aliases the verifier to
//! the ground-truth set.

use std::fmt;
use std::path::Path;

use covsamp_core::measures::{construct_verifier, greedy_fill, ResponseUniverse, VerifierSet};
use covsamp_core::rng::EpisodeRng;

pub const DEFAULT_EPISODES: u64 = 5000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, thiserror::Error)]
#[error("{source_name}:{line}: {message}")]
pub struct ScenarioError {
    pub source_name: String,
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum UniverseSpec {
    Uniform(usize),
    Zipf(usize, f64),
    Dirichlet(usize, f64, u64),
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
enum SetSpec {
    Mass(f64),
    Members(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
enum VerifierSpec {
    Targets { j: f64, s_ver: f64, tol: f64 },
    Members(Vec<String>),
    GroundTruth,
}

/// A parsed scenario file, not yet resolved into measures.
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    source_name: String,
    universe: UniverseSpec,
    ids: Option<Vec<String>>,
    probs: Option<Vec<f64>>,
    s_star: SetSpec,
    verifier: VerifierSpec,
    pub episodes: Option<u64>,
    pub seed: Option<u64>,
}

/// A fully resolved scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub universe: ResponseUniverse,
    pub s_star: VerifierSet,
    pub s_hat: VerifierSet,
    pub episodes: u64,
    pub seed: u64,
    /// Where the scenario came from: a file path or `builtin:default`.
    pub source: String,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} atoms, s={:.4}, s_ver={:.4})",
            self.source,
            self.universe.len(),
            self.s_star.mass(),
            self.s_hat.mass()
        )
    }
}

impl ScenarioFile {
    pub fn parse(text: &str, source_name: &str) -> Result<Self, ScenarioError> {
        let fail = |line: usize, message: String| ScenarioError {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let mut universe = None;
        let mut ids = None;
        let mut probs = None;
        let mut s_star = None;
        let mut verifier = None;
        let mut episodes = None;
        let mut seed = None;
        let mut version = None;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail(line_no, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "version" => {
                    let v: u32 = value
                        .parse()
                        .map_err(|_| fail(line_no, format!("bad version `{value}`")))?;
                    if v != 1 {
                        return Err(fail(line_no, format!("unsupported version {v}")));
                    }
                    version = Some(v);
                }
                "universe" => {
                    universe = Some(parse_universe(value).map_err(|m| fail(line_no, m))?);
                }
                "ids" => {
                    ids = Some(
                        value
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect(),
                    );
                }
                "probs" => {
                    let parsed: Result<Vec<f64>, _> =
                        value.split(',').map(|s| s.trim().parse::<f64>()).collect();
                    probs = Some(
                        parsed.map_err(|_| fail(line_no, format!("bad probability list `{value}`")))?,
                    );
                }
                "s_star" => {
                    s_star = Some(parse_set(value).map_err(|m| fail(line_no, m))?);
                }
                "verifier" => {
                    verifier = Some(parse_verifier(value).map_err(|m| fail(line_no, m))?);
                }
                "episodes" => {
                    episodes = Some(
                        value
                            .parse()
                            .map_err(|_| fail(line_no, format!("bad episode count `{value}`")))?,
                    );
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| fail(line_no, format!("bad seed `{value}`")))?,
                    );
                }
                other => {
                    return Err(fail(line_no, format!("unknown key `{other}`")));
                }
            }
        }

        if version.is_none() {
            return Err(fail(1, "missing `version = 1` header".into()));
        }
        let universe =
            universe.ok_or_else(|| fail(1, "missing `universe = ...` entry".into()))?;
        if universe == UniverseSpec::Explicit && (ids.is_none() || probs.is_none()) {
            return Err(fail(
                1,
                "`universe = explicit` needs both `ids = ...` and `probs = ...`".into(),
            ));
        }
        Ok(Self {
            source_name: source_name.to_string(),
            universe,
            ids,
            probs,
            s_star: s_star.ok_or_else(|| fail(1, "missing `s_star = ...` entry".into()))?,
            verifier: verifier.ok_or_else(|| fail(1, "missing `verifier = ...` entry".into()))?,
            episodes,
            seed,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError {
            source_name: name.clone(),
            line: 0,
            message: format!("cannot read file: {e}"),
        })?;
        Self::parse(&text, &name)
    }

    pub fn resolve(&self) -> Result<Scenario, ScenarioError> {
        let fail = |message: String| ScenarioError {
            source_name: self.source_name.clone(),
            line: 0,
            message,
        };
        let universe = match &self.universe {
            UniverseSpec::Uniform(n) => ResponseUniverse::uniform(*n),
            UniverseSpec::Zipf(n, exponent) => zipf_universe(*n, *exponent),
            UniverseSpec::Dirichlet(n, conc, seed) => dirichlet_universe(*n, *conc, *seed),
            UniverseSpec::Explicit => ResponseUniverse::new(
                self.ids.clone().expect("checked at parse"),
                self.probs.clone().expect("checked at parse"),
            )
            .map_err(|e| fail(format!("invalid explicit universe: {e}")))?,
        };
        let s_star = match &self.s_star {
            SetSpec::Mass(m) => greedy_fill(&universe, *m)
                .map_err(|e| fail(format!("invalid s_star mass: {e}")))?,
            SetSpec::Members(ids) => VerifierSet::from_ids(&universe, ids)
                .map_err(|e| fail(format!("invalid s_star members: {e}")))?,
        };
        let s_hat = match &self.verifier {
            VerifierSpec::GroundTruth => s_star.clone(),
            VerifierSpec::Members(ids) => VerifierSet::from_ids(&universe, ids)
                .map_err(|e| fail(format!("invalid verifier members: {e}")))?,
            VerifierSpec::Targets { j, s_ver, tol } => {
                construct_verifier(&universe, &s_star, *j, *s_ver, *tol)
                    .map_err(|e| fail(format!("verifier construction failed: {e}")))?
            }
        };
        Ok(Scenario {
            universe,
            s_star,
            s_hat,
            episodes: self.episodes.unwrap_or(DEFAULT_EPISODES),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            source: self.source_name.clone(),
        })
    }
}

/// The built-in desk-scale scenario: a 64-atom zipf universe with a
/// quarter-mass ground truth and a mid-quality constructed verifier.
pub fn default_scenario() -> Scenario {
    ScenarioFile::parse(DEFAULT_SCENARIO_TEXT, "builtin:default")
        .expect("builtin scenario parses")
        .resolve()
        .expect("builtin scenario resolves")
}

pub const DEFAULT_SCENARIO_TEXT: &str = "\
# Built-in desk-scale scenario.
version = 1
universe = zipf(64, 0.6)
s_star = mass(0.3)
verifier = targets(0.5, 0.32, 0.05)
episodes = 5000
seed = 42
";

fn parse_universe(value: &str) -> Result<UniverseSpec, String> {
    if value == "explicit" {
        return Ok(UniverseSpec::Explicit);
    }
    let (name, args) = parse_call(value)?;
    match name {
        "uniform" => {
            let [n] = take_args::<1>(&args, "uniform(n)")?;
            Ok(UniverseSpec::Uniform(parse_count(&n)?))
        }
        "zipf" => {
            let [n, e] = take_args::<2>(&args, "zipf(n, exponent)")?;
            Ok(UniverseSpec::Zipf(parse_count(&n)?, parse_float(&e)?))
        }
        "dirichlet" => {
            let [n, c, s] = take_args::<3>(&args, "dirichlet(n, concentration, seed)")?;
            Ok(UniverseSpec::Dirichlet(
                parse_count(&n)?,
                parse_float(&c)?,
                s.parse().map_err(|_| format!("bad seed `{s}`"))?,
            ))
        }
        other => Err(format!(
            "unknown universe generator `{other}` (expected uniform, zipf, dirichlet or explicit)"
        )),
    }
}

fn parse_set(value: &str) -> Result<SetSpec, String> {
    let (name, args) = parse_call(value)?;
    match name {
        "mass" => {
            let [m] = take_args::<1>(&args, "mass(x)")?;
            Ok(SetSpec::Mass(parse_float(&m)?))
        }
        "members" => Ok(SetSpec::Members(args)),
        other => Err(format!("unknown set spec `{other}` (expected mass or members)")),
    }
}

fn parse_verifier(value: &str) -> Result<VerifierSpec, String> {
    if value == "ground_truth" {
        return Ok(VerifierSpec::GroundTruth);
    }
    let (name, args) = parse_call(value)?;
    match name {
        "targets" => {
            let [j, s_ver, tol] = take_args::<3>(&args, "targets(j, s_ver, tol)")?;
            Ok(VerifierSpec::Targets {
                j: parse_float(&j)?,
                s_ver: parse_float(&s_ver)?,
                tol: parse_float(&tol)?,
            })
        }
        "members" => Ok(VerifierSpec::Members(args)),
        other => Err(format!(
            "unknown verifier spec `{other}` (expected targets, members or ground_truth)"
        )),
    }
}

fn parse_call(value: &str) -> Result<(&str, Vec<String>), String> {
    let open = value
        .find('(')
        .ok_or_else(|| format!("expected `name(args)`, got `{value}`"))?;
    if !value.ends_with(')') {
        return Err(format!("missing closing parenthesis in `{value}`"));
    }
    let name = value[..open].trim();
    let inner = &value[open + 1..value.len() - 1];
    let args = inner
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    Ok((name, args))
}

fn take_args<const N: usize>(args: &[String], usage: &str) -> Result<[String; N], String> {
    if args.len() != N {
        return Err(format!("expected {usage}, got {} arguments", args.len()));
    }
    Ok(std::array::from_fn(|i| args[i].clone()))
}

fn parse_count(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("bad count `{s}`"))?;
    if n == 0 {
        return Err("count must be positive".into());
    }
    Ok(n)
}

fn parse_float(s: &str) -> Result<f64, String> {
    s.parse().map_err(|_| format!("bad number `{s}`"))
}

fn ids_for(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i:04}")).collect()
}

fn normalize_into_universe(mut weights: Vec<f64>) -> ResponseUniverse {
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    // Pin the residual rounding error on the heaviest atom.
    let drift = 1.0 - weights.iter().sum::<f64>();
    let heaviest = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
        .map(|(i, _)| i)
        .expect("non-empty");
    weights[heaviest] += drift;
    ResponseUniverse::new(ids_for(weights.len()), weights).expect("normalized weights")
}

/// Power-law universe: atom `i` gets weight `i^-exponent`.
pub fn zipf_universe(n: usize, exponent: f64) -> ResponseUniverse {
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-exponent)).collect();
    normalize_into_universe(weights)
}

/// Random simplex point: iid Gamma(concentration) weights, normalized.
/// Deterministic in `seed`.
pub fn dirichlet_universe(n: usize, concentration: f64, seed: u64) -> ResponseUniverse {
    let mut rng = EpisodeRng::new(seed, 0);
    let weights: Vec<f64> = (0..n)
        .map(|_| sample_gamma(concentration, &mut rng).max(f64::MIN_POSITIVE))
        .collect();
    normalize_into_universe(weights)
}

/// Marsaglia-Tsang gamma sampler; shapes below 1 use the boost
/// `Gamma(a) = Gamma(a + 1) * U^(1/a)`.
fn sample_gamma(shape: f64, rng: &mut EpisodeRng) -> f64 {
    assert!(shape > 0.0, "gamma shape must be positive");
    if shape < 1.0 {
        let boost = rng.next_f64().powf(1.0 / shape);
        return sample_gamma(shape + 1.0, rng) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let v = (1.0 + c * x).powi(3);
        if v <= 0.0 {
            continue;
        }
        let u = rng.next_f64();
        if u < 1.0 - 0.0331 * x.powi(4) {
            return d * v;
        }
        if u > 0.0 && u.ln() < 0.5 * x * x + d - d * v + d * v.ln() {
            return d * v;
        }
    }
}

fn standard_normal(rng: &mut EpisodeRng) -> f64 {
    // Box-Muller; clamp away from 0 so the log stays finite.
    let u1 = rng.next_f64().max(f64::MIN_POSITIVE);
    let u2 = rng.next_f64();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
