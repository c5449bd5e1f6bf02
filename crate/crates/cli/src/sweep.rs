//! Sweep commands: budget sweeps, batch-size sweeps and the assumed-mass
//! ablation. Every command writes a CSV (UTF-8, LF, header row, floats at
//! 12 significant digits) plus a run manifest that replays byte-for-byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use covsamp_core::measures::roc_of;
use covsamp_core::montecarlo::{estimate, EstimateReport};
use covsamp_core::rng::derive_seed;
use covsamp_core::samplers::{Algorithm, SamplerConfig};
use covsamp_core::theory::{bon_max_batch, BatchBound, BatchLimitMode};
use covsamp_core::transport::{regime_of, CoverageBudget};

use crate::scenario::{default_scenario, Scenario, ScenarioFile};
use crate::svg;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Command-level failures, split by exit code: usage and parse problems
/// exit 2, everything else exits 1.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn failure(msg: impl Into<String>) -> CliError {
    CliError::Failure(msg.into())
}

/// 12-significant-digit scientific formatting; the fixed layout keeps CSVs
/// byte-identical across runs.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

pub fn load_scenario(path: Option<&Path>) -> CliResult<Scenario> {
    match path {
        None => Ok(default_scenario()),
        Some(p) => ScenarioFile::load(p)
            .and_then(|f| f.resolve())
            .map_err(|e| usage(e.to_string())),
    }
}

fn parse_algorithms(spec: &str, allowed: &[Algorithm]) -> CliResult<Vec<Algorithm>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let name = part.trim().to_lowercase();
        if name.is_empty() {
            continue;
        }
        let alg = match name.as_str() {
            "aic" => Algorithm::Aic,
            "srs" => Algorithm::Srs,
            "smc" => Algorithm::Smc,
            "bon" => Algorithm::Bon,
            "brs" => Algorithm::Brs,
            other => return Err(usage(format!("unknown algorithm `{other}`"))),
        };
        if !allowed.contains(&alg) {
            return Err(usage(format!(
                "algorithm `{name}` is not valid for this command"
            )));
        }
        if !out.contains(&alg) {
            out.push(alg);
        }
    }
    if out.is_empty() {
        return Err(usage("no algorithms selected"));
    }
    Ok(out)
}

fn budget(b: f64) -> CliResult<CoverageBudget> {
    CoverageBudget::new(b).map_err(|e| usage(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| failure(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| failure(format!("cannot write {}: {e}", path.display())))
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_owned();
    os.push(".manifest");
    PathBuf::from(os)
}

struct ManifestBuilder {
    lines: Vec<(String, String)>,
}

impl ManifestBuilder {
    fn new(command: &str, scenario: &Scenario, episodes: u64, seed: u64, out: &Path) -> Self {
        let mut b = Self { lines: Vec::new() };
        b.push("version", "1");
        b.push("tool_version", TOOL_VERSION);
        b.push("command", command);
        b.push("scenario", &scenario.source);
        b.push("episodes", episodes.to_string());
        b.push("seed", seed.to_string());
        b.push("out", out.display().to_string());
        b
    }

    fn push(&mut self, key: &str, value: impl AsRef<str>) {
        self.lines.push((key.to_string(), value.as_ref().to_string()));
    }

    fn push_f64_list(&mut self, key: &str, values: &[f64]) {
        // Display round-trips f64 exactly, so replays see identical grids.
        let joined = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.push(key, joined);
    }

    fn render(&self) -> String {
        let mut s = String::from("# covsamp run manifest\n");
        for (k, v) in &self.lines {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

fn run_point(
    scenario: &Scenario,
    config: &SamplerConfig,
    episodes: u64,
    master_seed: u64,
    index: usize,
) -> CliResult<EstimateReport> {
    estimate(
        config,
        &scenario.universe,
        &scenario.s_star,
        &scenario.s_hat,
        episodes,
        derive_seed(master_seed, index as u64),
    )
    .map_err(|e| failure(format!("point {index}: {e}")))
}

pub struct SweepBetaArgs {
    pub scenario: Option<PathBuf>,
    pub algorithms: String,
    pub beta_grid: Option<String>,
    pub episodes: Option<u64>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Budget sweep for the sequential samplers. One CSV row per
/// (algorithm, beta) cell; the `regime` column classifies the budget and
/// `coverage_ok` reports the exact-chi-square verdict.
pub fn cmd_sweep_beta(args: &SweepBetaArgs) -> CliResult<()> {
    let scenario = load_scenario(args.scenario.as_deref())?;
    let algorithms = parse_algorithms(
        &args.algorithms,
        &[Algorithm::Aic, Algorithm::Srs, Algorithm::Smc],
    )?;
    let s = scenario.s_star.mass();
    let v = scenario.s_hat.mass();
    let grid: Vec<f64> = match args.beta_grid.as_deref() {
        None | Some("auto") => crate::grid::auto_beta_grid(s, v),
        Some(spec) => crate::grid::parse_f64_grid(spec).map_err(|e| usage(e.to_string()))?,
    };
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(usage("beta grid must be sorted ascending"));
    }
    let episodes = args.episodes.unwrap_or(scenario.episodes);
    let seed = args.seed.unwrap_or(scenario.seed);

    let mut csv = String::from(
        "algorithm,beta,regime,empirical_subopt,se,theory_subopt,z,mean_proposals,theory_complexity,empirical_chi2,chi2_budget,coverage_ok\n",
    );
    let mut series: Vec<svg::Series> = Vec::new();
    let mut index = 0;
    for &alg in &algorithms {
        let mut empirical = Vec::new();
        let mut theory = Vec::new();
        for &b in &grid {
            let config = SamplerConfig::sequential(alg, budget(b)?)
                .map_err(|e| usage(e.to_string()))?;
            let rep = run_point(&scenario, &config, episodes, seed, index)?;
            index += 1;
            let regime = regime_of(s, v, budget(b)?).map_err(|e| failure(e.to_string()))?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                alg.label(),
                fmt_sig(b),
                regime.label(),
                fmt_sig(rep.empirical_subopt),
                fmt_sig(rep.subopt_se),
                fmt_sig(rep.theory.subopt),
                fmt_sig(rep.z_subopt),
                fmt_sig(rep.mean_proposals),
                fmt_sig(rep.theory.expected_proposals.unwrap_or(f64::NAN)),
                fmt_sig(rep.empirical_chi2),
                fmt_sig(b - 1.0),
                rep.coverage_ok,
            );
            empirical.push((b, rep.empirical_subopt));
            theory.push((b, rep.theory.subopt));
        }
        series.push(svg::Series {
            name: alg.label().to_string(),
            empirical,
            theory,
        });
    }
    write_file(&args.out, &csv)?;

    let mut manifest = ManifestBuilder::new("sweep-beta", &scenario, episodes, seed, &args.out);
    manifest.push("algorithms", algorithms.iter().map(|a| a.label()).collect::<Vec<_>>().join(","));
    manifest.push_f64_list("beta_grid", &grid);
    if let Some(svg_path) = &args.svg {
        manifest.push("svg", svg_path.display().to_string());
    }
    write_file(&manifest_path(&args.out), &manifest.render())?;

    if let Some(svg_path) = &args.svg {
        let bands = regime_bands(s, v, &grid);
        let doc = svg::render(
            "sub-optimality vs coverage budget",
            "beta",
            "subopt",
            &series,
            &bands,
        );
        write_file(svg_path, &doc)?;
    }
    Ok(())
}

fn regime_bands(s: f64, v: f64, grid: &[f64]) -> Vec<svg::Band> {
    let lower = (1.0 / s).min(1.0 / v);
    let upper = (1.0 / s).max(1.0 / v);
    let end = grid.last().copied().unwrap_or(upper);
    let mut bands = vec![svg::Band { from: grid.first().copied().unwrap_or(1.0), to: lower.min(end), label: "T" }];
    if lower < end {
        bands.push(svg::Band { from: lower, to: upper.min(end), label: "PI" });
    }
    if upper < end {
        bands.push(svg::Band { from: upper, to: end, label: "S" });
    }
    bands
}

pub struct SweepBatchArgs {
    pub scenario: Option<PathBuf>,
    pub algorithms: String,
    pub n_grid: String,
    pub beta: f64,
    pub episodes: Option<u64>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
    pub allow_undetermined: bool,
}

/// Batch-size sweep for the batched samplers at a fixed budget. Rows whose
/// batch size breaks coverage are emitted with `coverage_ok = false`, not
/// skipped; the undetermined best-of-N bound is refused without an
/// explicit opt-in.
pub fn cmd_sweep_batch(args: &SweepBatchArgs) -> CliResult<()> {
    let scenario = load_scenario(args.scenario.as_deref())?;
    let algorithms = parse_algorithms(&args.algorithms, &[Algorithm::Bon, Algorithm::Brs])?;
    let grid = crate::grid::parse_u64_grid(&args.n_grid).map_err(|e| usage(e.to_string()))?;
    let beta = budget(args.beta)?;
    let episodes = args.episodes.unwrap_or(scenario.episodes);
    let seed = args.seed.unwrap_or(scenario.seed);
    let v = scenario.s_hat.mass();

    let bon_bound = bon_max_batch(v, beta, BatchLimitMode::BudgetRadius)
        .map_err(|e| failure(e.to_string()))?;
    if algorithms.contains(&Algorithm::Bon)
        && bon_bound == BatchBound::Undetermined
        && !args.allow_undetermined
    {
        return Err(usage(format!(
            "best-of-N admissible batch size is undetermined at beta {} (budget radius {} below s(1-s) = {}); pass --allow-undetermined to run anyway",
            args.beta,
            args.beta - 1.0,
            v * (1.0 - v),
        )));
    }

    let n_max_text = |alg: Algorithm| -> String {
        match alg {
            Algorithm::Brs => "inf".into(),
            _ => match bon_bound {
                BatchBound::Unbounded => "inf".into(),
                BatchBound::Bounded { real, .. } => fmt_sig(real),
                BatchBound::Undetermined => "undetermined".into(),
            },
        }
    };

    let mut csv = String::from(
        "algorithm,n,empirical_subopt,se,theory_subopt,z,empirical_chi2,chi2_budget,coverage_ok,n_max\n",
    );
    let mut series: Vec<svg::Series> = Vec::new();
    let mut index = 0;
    for &alg in &algorithms {
        let mut empirical = Vec::new();
        let mut theory = Vec::new();
        for &n in &grid {
            let config =
                SamplerConfig::batched(alg, beta, n).map_err(|e| usage(e.to_string()))?;
            let rep = run_point(&scenario, &config, episodes, seed, index)?;
            index += 1;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{}",
                alg.label(),
                n,
                fmt_sig(rep.empirical_subopt),
                fmt_sig(rep.subopt_se),
                fmt_sig(rep.theory.subopt),
                fmt_sig(rep.z_subopt),
                fmt_sig(rep.empirical_chi2),
                fmt_sig(args.beta - 1.0),
                rep.coverage_ok,
                n_max_text(alg),
            );
            empirical.push((n as f64, rep.empirical_subopt));
            theory.push((n as f64, rep.theory.subopt));
        }
        series.push(svg::Series {
            name: alg.label().to_string(),
            empirical,
            theory,
        });
    }
    write_file(&args.out, &csv)?;

    let mut manifest = ManifestBuilder::new("sweep-batch", &scenario, episodes, seed, &args.out);
    manifest.push("algorithms", algorithms.iter().map(|a| a.label()).collect::<Vec<_>>().join(","));
    manifest.push(
        "n_grid",
        grid.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
    );
    manifest.push("beta", args.beta.to_string());
    manifest.push("allow_undetermined", args.allow_undetermined.to_string());
    if let Some(svg_path) = &args.svg {
        manifest.push("svg", svg_path.display().to_string());
    }
    write_file(&manifest_path(&args.out), &manifest.render())?;

    if let Some(svg_path) = &args.svg {
        let doc = svg::render(
            "sub-optimality vs batch size",
            "n",
            "subopt",
            &series,
            &[],
        );
        write_file(svg_path, &doc)?;
    }
    Ok(())
}

pub struct AblateArgs {
    pub scenario: Option<PathBuf>,
    pub s_grid: String,
    pub beta: f64,
    pub episodes: Option<u64>,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Assumed-mass sensitivity ablation: AiC, SRS and SMC run with the tilt's
/// scalar mass forced to each grid value (membership still uses the real
/// verifier set). At `s = 1` all three coincide.
pub fn cmd_ablate_s(args: &AblateArgs) -> CliResult<()> {
    let scenario = load_scenario(args.scenario.as_deref())?;
    let grid = crate::grid::parse_f64_grid(&args.s_grid).map_err(|e| usage(e.to_string()))?;
    if grid.iter().any(|&x| x <= 0.0 || x > 1.0) {
        return Err(usage("assumed masses must lie in (0, 1]"));
    }
    let beta = budget(args.beta)?;
    let episodes = args.episodes.unwrap_or(scenario.episodes);
    let seed = args.seed.unwrap_or(scenario.seed);

    let mut csv = String::from("algorithm,s_assumed,accuracy,se,mean_proposals\n");
    let mut series: Vec<svg::Series> = Vec::new();
    let mut index = 0;
    for alg in [Algorithm::Aic, Algorithm::Srs, Algorithm::Smc] {
        let mut points = Vec::new();
        for &s_assumed in &grid {
            let mut config =
                SamplerConfig::sequential(alg, beta).map_err(|e| usage(e.to_string()))?;
            if alg != Algorithm::Aic {
                config = config.with_s_override(s_assumed).map_err(|e| usage(e.to_string()))?;
            }
            let rep = run_point(&scenario, &config, episodes, seed, index)?;
            index += 1;
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                alg.label(),
                fmt_sig(s_assumed),
                fmt_sig(rep.accuracy),
                fmt_sig(rep.accuracy_se),
                fmt_sig(rep.mean_proposals),
            );
            points.push((s_assumed, rep.accuracy));
        }
        series.push(svg::Series {
            name: alg.label().to_string(),
            empirical: points,
            theory: Vec::new(),
        });
    }
    write_file(&args.out, &csv)?;

    let mut manifest = ManifestBuilder::new("ablate-s", &scenario, episodes, seed, &args.out);
    manifest.push_f64_list("s_grid", &grid);
    manifest.push("beta", args.beta.to_string());
    if let Some(svg_path) = &args.svg {
        manifest.push("svg", svg_path.display().to_string());
    }
    write_file(&manifest_path(&args.out), &manifest.render())?;

    if let Some(svg_path) = &args.svg {
        let doc = svg::render("accuracy vs assumed mass", "s_assumed", "accuracy", &series, &[]);
        write_file(svg_path, &doc)?;
    }
    Ok(())
}

/// Re-runs the command recorded in a manifest. With `out_override` the CSV
/// goes to a different path, which is how byte-identical replay is checked.
pub fn cmd_replay(manifest: &Path, out_override: Option<&Path>) -> CliResult<()> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| usage(format!("cannot read {}: {e}", manifest.display())))?;
    let mut fields = std::collections::HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{}:{}: expected key = value", manifest.display(), idx + 1)))?;
        fields.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |key: &str| -> CliResult<String> {
        fields
            .get(key)
            .cloned()
            .ok_or_else(|| usage(format!("manifest missing `{key}`")))
    };
    let scenario_field = get("scenario")?;
    let scenario_path = if scenario_field == "builtin:default" {
        None
    } else {
        Some(PathBuf::from(scenario_field))
    };
    let episodes = Some(
        get("episodes")?
            .parse::<u64>()
            .map_err(|_| usage("bad episodes in manifest"))?,
    );
    let seed = Some(
        get("seed")?
            .parse::<u64>()
            .map_err(|_| usage("bad seed in manifest"))?,
    );
    let out = out_override
        .map(Path::to_path_buf)
        .unwrap_or(PathBuf::from(get("out")?));
    let svg = fields.get("svg").map(PathBuf::from);
    match get("command")?.as_str() {
        "sweep-beta" => cmd_sweep_beta(&SweepBetaArgs {
            scenario: scenario_path,
            algorithms: get("algorithms")?,
            beta_grid: Some(get("beta_grid")?),
            episodes,
            seed,
            out,
            svg,
        }),
        "sweep-batch" => cmd_sweep_batch(&SweepBatchArgs {
            scenario: scenario_path,
            algorithms: get("algorithms")?,
            n_grid: get("n_grid")?,
            beta: get("beta")?.parse().map_err(|_| usage("bad beta in manifest"))?,
            episodes,
            seed,
            out,
            svg,
            allow_undetermined: get("allow_undetermined")? == "true",
        }),
        "ablate-s" => cmd_ablate_s(&AblateArgs {
            scenario: scenario_path,
            s_grid: get("s_grid")?,
            beta: get("beta")?.parse().map_err(|_| usage("bad beta in manifest"))?,
            episodes,
            seed,
            out,
            svg,
        }),
        other => Err(usage(format!("manifest has unknown command `{other}`"))),
    }
}

/// ROC of the scenario's verifier, for reporting.
pub fn scenario_roc(scenario: &Scenario) -> Option<covsamp_core::measures::RocProfile> {
    roc_of(&scenario.universe, &scenario.s_star, &scenario.s_hat).ok()
}
