//! Acceptance gate: one test per criterion, each printing a PASS/FAIL line
//! followed by its notes. Tolerances live in `harness::acceptance`.

use d2d_stackelberg::harness::acceptance::{
    equilibrium_conditions, oracle_equivalence, outage_consistency, root_residuals, trend_suite, welfare_identity,
    AcceptanceConfig, CriterionResult,
};
use d2d_stackelberg::SystemParams;

fn gate(result: CriterionResult) {
    println!("{result}");
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_1_oracle_equivalence() {
    gate(oracle_equivalence(&AcceptanceConfig::default()));
}

#[test]
fn criterion_2_outage_consistency() {
    gate(outage_consistency(&AcceptanceConfig::default()));
}

#[test]
fn criterion_3_equilibrium_conditions() {
    gate(equilibrium_conditions(&AcceptanceConfig::default()));
}

#[test]
fn criterion_4_welfare_identity() {
    gate(welfare_identity(&AcceptanceConfig::default()));
}

#[test]
fn criterion_5_trend_suite() {
    gate(trend_suite(&SystemParams::default(), &AcceptanceConfig::default()));
}

#[test]
fn criterion_6_root_residuals() {
    gate(root_residuals(&AcceptanceConfig::default()));
}
