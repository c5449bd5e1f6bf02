//! Minimal end-to-end run: build a scenario, estimate one configuration,
//! and compare against the closed form.

use covsamp_core::measures::{construct_verifier, greedy_fill, ResponseUniverse};
use covsamp_core::montecarlo::estimate;
use covsamp_core::samplers::{Algorithm, SamplerConfig};
use covsamp_core::transport::CoverageBudget;

fn main() {
    let universe = ResponseUniverse::uniform(400);
    let s_star = greedy_fill(&universe, 0.25).unwrap();
    let s_hat = construct_verifier(&universe, &s_star, 0.5, 0.2, 0.01).unwrap();
    let config =
        SamplerConfig::sequential(Algorithm::Srs, CoverageBudget::new(3.0).unwrap()).unwrap();
    let report = estimate(&config, &universe, &s_star, &s_hat, 5000, 42).unwrap();
    println!(
        "subopt {:.4} ± {:.4} (theory {:.4}, z {:+.2})",
        report.empirical_subopt, report.subopt_se, report.theory.subopt, report.z_subopt
    );
    println!(
        "proposals {:.3} (theory {:.3}), coverage_ok {}",
        report.mean_proposals,
        report.theory.expected_proposals.unwrap(),
        report.coverage_ok
    );
}
