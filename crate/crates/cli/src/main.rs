use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use covsamp_cli::scenario::ScenarioFile;
use covsamp_cli::sweep::{
    cmd_ablate_s, cmd_replay, cmd_sweep_batch, cmd_sweep_beta, AblateArgs, SweepBatchArgs,
    SweepBetaArgs,
};
use covsamp_cli::verify::{run_all, VerifyOptions};

/// Verifier-guided sampling experiments on finite discrete measures.
#[derive(Parser)]
#[command(name = "covsamp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonRunArgs {
    /// Scenario file; omitted means the built-in 64-atom default.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Episodes per grid point (default: scenario setting, then 5000).
    #[arg(long)]
    episodes: Option<u64>,
    /// Master seed (default: scenario setting, then 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; a `<out>.manifest` file is written alongside.
    #[arg(long)]
    out: PathBuf,
    /// Optional static SVG plot of the same rows.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the coverage budget for the sequential samplers.
    SweepBeta {
        #[command(flatten)]
        common: CommonRunArgs,
        /// Comma list from {aic, srs, smc}.
        #[arg(long, default_value = "aic,srs,smc")]
        algorithms: String,
        /// Comma list, start:stop:step, or `auto` (12 points per regime).
        #[arg(long)]
        beta_grid: Option<String>,
    },
    /// Sweep the batch parameter N for the batched samplers at fixed beta.
    SweepBatch {
        #[command(flatten)]
        common: CommonRunArgs,
        /// Comma list from {bon, brs}.
        #[arg(long, default_value = "bon,brs")]
        algorithms: String,
        /// Batch parameters N (the batch draws N + 1 samples).
        #[arg(long, default_value = "0:5:1")]
        n_grid: String,
        /// Coverage budget.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        /// Run best-of-N even when its admissible batch size is undetermined.
        #[arg(long)]
        allow_undetermined: bool,
    },
    /// Sensitivity ablation over the assumed verifier-set mass.
    AblateS {
        #[command(flatten)]
        common: CommonRunArgs,
        /// Assumed masses in (0, 1]; include 1.0 to see the collapse.
        #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
        s_grid: String,
        /// Coverage budget.
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
    },
    /// Run the acceptance suite; exits 1 if any criterion fails.
    Verify {
        /// Extra scenario folded into the exact-identity checks.
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Episode count for the statistical criteria (default 5000).
        #[arg(long)]
        episodes: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-run the command recorded in a run manifest.
    Replay {
        manifest: PathBuf,
        /// Write the CSV somewhere else (for byte-for-byte comparison).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SweepBeta { common, algorithms, beta_grid } => cmd_sweep_beta(&SweepBetaArgs {
            scenario: common.scenario,
            algorithms,
            beta_grid,
            episodes: common.episodes,
            seed: common.seed,
            out: common.out,
            svg: common.svg,
        }),
        Command::SweepBatch { common, algorithms, n_grid, beta, allow_undetermined } => {
            cmd_sweep_batch(&SweepBatchArgs {
                scenario: common.scenario,
                algorithms,
                n_grid,
                beta,
                episodes: common.episodes,
                seed: common.seed,
                out: common.out,
                svg: common.svg,
                allow_undetermined,
            })
        }
        Command::AblateS { common, s_grid, beta } => cmd_ablate_s(&AblateArgs {
            scenario: common.scenario,
            s_grid,
            beta,
            episodes: common.episodes,
            seed: common.seed,
            out: common.out,
            svg: common.svg,
        }),
        Command::Verify { scenario, episodes, seed, out } => {
            return run_verify(scenario, episodes, seed, out);
        }
        Command::Replay { manifest, out } => cmd_replay(&manifest, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run_verify(
    scenario: Option<PathBuf>,
    episodes: Option<u64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> ExitCode {
    let extra_scenario = match scenario {
        None => None,
        Some(path) => match ScenarioFile::load(&path).and_then(|f| f.resolve()) {
            Ok(s) => Some(s),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
    };
    let opts = VerifyOptions {
        episodes: episodes.unwrap_or(5000),
        seed: seed.unwrap_or(17),
        extra_scenario,
        work_dir: std::env::temp_dir(),
    };
    let outcomes = run_all(&opts);
    let mut report = String::new();
    let mut all_passed = true;
    for o in &outcomes {
        let line = format!(
            "{} {:<28} {} — {}",
            o.id,
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        println!("{line}");
        report.push_str(&line);
        report.push('\n');
        all_passed &= o.passed;
    }
    let summary = format!(
        "{}/{} criteria passed",
        outcomes.iter().filter(|o| o.passed).count(),
        outcomes.len()
    );
    println!("{summary}");
    report.push_str(&summary);
    report.push('\n');
    if let Some(path) = out {
        if let Err(e) = std::fs::write(&path, report) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
