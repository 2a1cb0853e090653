//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them all).
//!
//! 1. unit lemmas (models, root-leaf match set, loop composition), < 5 s
//! 2. configuration-tree lemmas and decoration-removal mutations
//! 3. enriched-tree lemmas, arithmetic gadget, off-by-one previous head
//! 4. homomorphism lemmas on plain, padded and broken targets
//! 5. match-set lemmas for the query family, < 60 s
//! 6. main-theorem dichotomy: faithful vs fault-injected quasi-runs
//! 7. polynomial size closed forms for tape exponents 1..8
//! 8. byte-determinism of compilation and serialization round trips

use std::time::{Duration, Instant};

use alcself::atm::{tiny_acceptor, tiny_rejector};
use alcself::lemmas::{
    criterion_config_trees, criterion_determinism, criterion_dichotomy, criterion_enriched,
    criterion_homomorphisms, criterion_match_sets, criterion_polynomiality, criterion_units,
    CheckLine,
};

fn report(criterion: &str, lines: &[CheckLine], elapsed: Option<(Duration, Duration)>) {
    let ok = lines.iter().all(|l| l.pass);
    let verdict = if ok { "PASS" } else { "FAIL" };
    match elapsed {
        Some((took, bound)) => println!(
            "criterion {criterion}: {verdict} ({} checks, {:.2?} of {:.0?} budget)",
            lines.len(),
            took,
            bound
        ),
        None => println!("criterion {criterion}: {verdict} ({} checks)", lines.len()),
    }
    for line in lines {
        println!("  {line}");
    }
    assert!(ok, "criterion {criterion} failed");
}

#[test]
fn criterion_1_unit_lemmas() {
    let start = Instant::now();
    let lines = criterion_units(3);
    let took = start.elapsed();
    let bound = Duration::from_secs(5);
    report("1 (units)", &lines, Some((took, bound)));
    assert!(took < bound, "unit suite took {took:.2?}");
}

#[test]
fn criterion_2_configuration_trees() {
    let lines = criterion_config_trees(&tiny_acceptor());
    // The reachable set of the reference machine: initial plus four
    // mid-run plus four final configurations.
    let models = lines
        .iter()
        .filter(|l| l.id.starts_with("conf-models"))
        .count();
    assert_eq!(models, 9);
    report("2 (configuration trees)", &lines, None);
}

#[test]
fn criterion_3_enriched_trees() {
    let lines = criterion_enriched(&tiny_acceptor());
    assert!(lines.iter().any(|l| l.id.starts_with("enr-gadget")));
    assert!(lines.iter().any(|l| l.id.starts_with("enr-phd-off-by-one")));
    report("3 (enriched trees)", &lines, None);
}

#[test]
fn criterion_4_homomorphisms() {
    let lines = criterion_homomorphisms(&tiny_acceptor());
    assert!(lines.iter().any(|l| l.id.contains("padded")));
    assert!(lines.iter().any(|l| l.id.contains("removal")));
    report("4 (homomorphisms)", &lines, None);
}

#[test]
fn criterion_5_match_sets() {
    let start = Instant::now();
    let lines = criterion_match_sets(&tiny_acceptor());
    let took = start.elapsed();
    let bound = Duration::from_secs(60);
    // q_i^b and q_addr_i for all i in {1,2} and b in {0,1}, plus the
    // relational-calculus identity per i.
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.id.starts_with("match-qbit"))
            .count(),
        4
    );
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.id.starts_with("match-qaddr["))
            .count(),
        2
    );
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.id.starts_with("match-qaddr-identity"))
            .count(),
        2
    );
    report("5 (match sets)", &lines, Some((took, bound)));
    assert!(took < bound, "match-set suite took {took:.2?}");
}

#[test]
fn criterion_6_dichotomy() {
    let lines = criterion_dichotomy(&tiny_acceptor(), &tiny_rejector());
    // All four single-cell fault injections appear (4 non-root nodes with
    // one untouched cell each), plus the faithful tree.
    assert_eq!(
        lines
            .iter()
            .filter(|l| l.id.starts_with("main-model"))
            .count(),
        5
    );
    report("6 (main-theorem dichotomy)", &lines, None);
}

#[test]
fn criterion_7_polynomiality() {
    let lines = criterion_polynomiality(&tiny_acceptor());
    report("7 (polynomial sizes)", &lines, None);
}

#[test]
fn criterion_8_determinism() {
    let lines = criterion_determinism(&tiny_acceptor());
    report("8 (determinism)", &lines, None);
}
