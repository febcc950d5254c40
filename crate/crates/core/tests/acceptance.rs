//! One test per acceptance criterion; each prints its pass/fail line.

use spikelab::harness::acceptance::{run_criterion, AcceptanceOptions};

fn criterion(id: u8) {
    let outcome = run_criterion(id, &AcceptanceOptions::default()).expect("criterion ran");
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn c01_combinatorial_exactness() {
    criterion(1);
}

#[test]
fn c02_generating_function_identities() {
    criterion(2);
}

#[test]
fn c03_coefficient_double_route() {
    criterion(3);
}

#[test]
fn c04_growth_rates() {
    criterion(4);
}

#[test]
fn c05_exact_moment_oracle() {
    criterion(5);
}

#[test]
fn c06_tracy_widom_engine() {
    criterion(6);
}

#[test]
fn c07_white_edge_fluctuations() {
    criterion(7);
}

#[test]
fn c08_supercritical_fluctuations() {
    criterion(8);
}

#[test]
fn c09_entry_law_universality() {
    criterion(9);
}

#[test]
fn c10_critical_law() {
    criterion(10);
}

#[test]
fn c11_almost_sure_limits() {
    criterion(11);
}

#[test]
fn c12_normalized_moment_asymptotics() {
    criterion(12);
}

#[test]
fn c13_preimage_counts() {
    criterion(13);
}

#[test]
fn c14_variance_boundedness() {
    criterion(14);
}

#[test]
fn c15_multi_spike() {
    criterion(15);
}
