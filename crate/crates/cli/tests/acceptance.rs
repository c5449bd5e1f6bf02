//! Acceptance suite: every criterion as its own test, printing one
//! PASS/FAIL line (visible with `--nocapture`). The same checks back the
//! `covsamp verify` subcommand.

use covsamp_cli::verify::{criteria, VerifyOptions};

fn run(id: &str) {
    let opts = VerifyOptions::default();
    let (cid, name, f) = criteria()
        .into_iter()
        .find(|(cid, _, _)| *cid == id)
        .expect("criterion id exists");
    match f(&opts) {
        Ok(detail) => println!("{cid} {name}: PASS — {detail}"),
        Err(detail) => {
            println!("{cid} {name}: FAIL — {detail}");
            panic!("{cid} {name} failed: {detail}");
        }
    }
}

#[test]
fn c01_optimal_policy_matches_numeric_maximizer() {
    run("C01");
}

#[test]
fn c02_transport_cost_equals_total_variation() {
    run("C02");
}

#[test]
fn c03_srs_and_smc_induce_identical_distributions() {
    run("C03");
}

#[test]
fn c04_complexity_laws_hold_within_three_se() {
    run("C04");
}

#[test]
fn c05_three_regime_suboptimality_geometry() {
    run("C05");
}

#[test]
fn c06_aic_chi_square_and_violation_threshold() {
    run("C06");
}

#[test]
fn c07_bon_density_chi_square_and_subopt_laws() {
    run("C07");
}

#[test]
fn c08_brs_density_coverage_and_subopt_laws() {
    run("C08");
}

#[test]
fn c09_unit_assumed_mass_collapses_to_aic() {
    run("C09");
}

#[test]
fn c10_assumed_mass_crossover_direction() {
    run("C10");
}

#[test]
fn c11_csv_byte_determinism_and_replay() {
    run("C11");
}
