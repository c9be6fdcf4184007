//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::{Duration, Instant};
use tensor_envelope::verify;

fn run_criterion(number: u32, suite: &str, what: &str, limit: Option<Duration>) {
    let start = Instant::now();
    let outcome = verify::run_suite(suite, None);
    let elapsed = start.elapsed();
    match outcome {
        Ok(rep) => {
            let in_time = limit.map_or(true, |l| elapsed <= l);
            let status = if rep.ok() && in_time { "PASS" } else { "FAIL" };
            println!(
                "{status} criterion {number} ({what}): {} checks, {} failures, {:.2?}{}",
                rep.checks,
                rep.failures.len(),
                elapsed,
                limit.map_or(String::new(), |l| format!(" (limit {l:.0?})")),
            );
            assert!(rep.ok(), "criterion {number} failed: {}", rep.summary());
            assert!(
                in_time,
                "criterion {number} exceeded its runtime bound: {elapsed:.2?}"
            );
        }
        Err(e) => {
            println!("FAIL criterion {number} ({what}): suite error: {e}");
            panic!("criterion {number} errored: {e}");
        }
    }
}

#[test]
fn criterion_1_axioms() {
    run_criterion(
        1,
        "rel-axioms",
        "generator relations, degree axioms, image/pullback commutation, rigidity",
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_2_projectors() {
    run_criterion(
        2,
        "projectors",
        "projector orthogonality, resolution of identity, transports, omega collapse",
        None,
    );
}

#[test]
fn criterion_3_oracle_equivalence() {
    run_criterion(
        3,
        "oracle-equivalence",
        "closed-form products and tensors against the expand-and-project oracle",
        Some(Duration::from_secs(300)),
    );
}

#[test]
fn criterion_4_dimensions() {
    run_criterion(4, "dimensions", "hom-space dimension counts", None);
}

#[test]
fn criterion_5_worked_constants() {
    run_criterion(5, "worked-constants", "pinned one-point structure constants", None);
}

#[test]
fn criterion_6_maltsev() {
    run_criterion(
        6,
        "maltsev",
        "gluing correspondence, gluing product, Mal'tsev/exactness witnesses",
        None,
    );
}

#[test]
fn criterion_7_tensor_decompose() {
    run_criterion(
        7,
        "tensor-decompose",
        "projector sums, summand counts, pentagon and hexagon coherence",
        None,
    );
}

#[test]
fn criterion_8_assoc_round() {
    run_criterion(
        8,
        "assoc-round",
        "associativity of the round product on one-point quadruples",
        None,
    );
}
