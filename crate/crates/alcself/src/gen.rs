//! Seeded random generators for small machines, interpretations, concepts
//! and queries. Shared between property tests and the determinism suite.

use rand::prelude::*;

use crate::atm::{Atm, Dir, RawAtm, Transition};
use crate::cq::Cq;
use crate::dl::{Assertion, Concept, Gci, Interpretation, KnowledgeBase};

const CONCEPT_NAMES: [&str; 4] = ["A", "B", "C", "D"];
const ROLE_NAMES: [&str; 3] = ["r", "s", "t"];

pub fn role_name(rng: &mut impl Rng) -> String {
    ROLE_NAMES[rng.gen_range(0..ROLE_NAMES.len())].to_string()
}

pub fn concept_name(rng: &mut impl Rng) -> String {
    CONCEPT_NAMES[rng.gen_range(0..CONCEPT_NAMES.len())].to_string()
}

pub fn random_interpretation(rng: &mut impl Rng, max_elems: usize) -> Interpretation {
    let size = rng.gen_range(1..=max_elems.max(1));
    let mut interp = Interpretation::new();
    let elems: Vec<String> = (0..size).map(|i| format!("e{i}")).collect();
    for e in &elems {
        interp.add_element(e.clone());
    }
    for name in CONCEPT_NAMES {
        for e in &elems {
            if rng.gen_bool(0.4) {
                interp.add_to_concept(name, e.clone());
            }
        }
    }
    for role in ROLE_NAMES {
        for a in &elems {
            for b in &elems {
                if rng.gen_bool(0.3) {
                    interp.add_role_pair(role, a.clone(), b.clone());
                }
            }
        }
    }
    if rng.gen_bool(0.5) {
        interp.set_individual("a", elems[rng.gen_range(0..elems.len())].clone());
    }
    interp
}

pub fn random_concept(rng: &mut impl Rng, depth: u32) -> Concept {
    if depth == 0 {
        return match rng.gen_range(0..4) {
            0 => Concept::Top,
            1 => Concept::name(concept_name(rng)),
            2 => Concept::self_loop(role_name(rng)),
            _ => Concept::Bottom,
        };
    }
    match rng.gen_range(0..8) {
        0 => Concept::name(concept_name(rng)),
        1 => Concept::not(random_concept(rng, depth - 1)),
        2 => Concept::and(
            random_concept(rng, depth - 1),
            random_concept(rng, depth - 1),
        ),
        3 => Concept::or(
            random_concept(rng, depth - 1),
            random_concept(rng, depth - 1),
        ),
        4 => Concept::exists(role_name(rng), random_concept(rng, depth - 1)),
        5 => Concept::forall(role_name(rng), random_concept(rng, depth - 1)),
        6 => Concept::implies(
            random_concept(rng, depth - 1),
            random_concept(rng, depth - 1),
        ),
        _ => Concept::self_loop(role_name(rng)),
    }
}

pub fn random_gci(rng: &mut impl Rng) -> Gci {
    Gci::new(random_concept(rng, 2), random_concept(rng, 2))
}

/// A random conjunctive query whose atoms use the same small signature as
/// [`random_interpretation`].
pub fn random_cq(rng: &mut impl Rng, max_vars: usize) -> Cq {
    let n_vars = rng.gen_range(1..=max_vars.max(1));
    let vars: Vec<String> = (0..n_vars).map(|i| format!("v{i}")).collect();
    let mut cq = Cq::new();
    let n_concept_atoms = rng.gen_range(1..=3);
    for _ in 0..n_concept_atoms {
        cq.add_concept_atom(concept_name(rng), vars[rng.gen_range(0..n_vars)].clone());
    }
    let n_role_atoms = rng.gen_range(0..=4);
    for _ in 0..n_role_atoms {
        cq.add_role_atom(
            role_name(rng),
            vars[rng.gen_range(0..n_vars)].clone(),
            vars[rng.gen_range(0..n_vars)].clone(),
        );
    }
    // Pick distinguished variables among those that actually occur.
    let occurring: Vec<String> = cq.vars().into_iter().collect();
    let k = rng.gen_range(0..=occurring.len().min(2));
    let mut distinguished: Vec<String> = occurring.choose_multiple(rng, k).cloned().collect();
    distinguished.sort();
    cq.set_distinguished(distinguished);
    cq
}

/// A random knowledge base over the small test signature, with some axioms
/// labelled.
pub fn random_kb(rng: &mut impl Rng) -> KnowledgeBase {
    let mut kb = KnowledgeBase::default();
    let label = |rng: &mut dyn RngCore, i: usize| {
        if rng.gen_bool(0.5) {
            Some(format!("ax{i}"))
        } else {
            None
        }
    };
    for i in 0..rng.gen_range(0..3usize) {
        if rng.gen_bool(0.5) {
            kb.abox.push(Assertion::Concept {
                concept: random_concept(rng, 2),
                individual: if rng.gen_bool(0.5) { "a" } else { "b" }.to_string(),
                label: label(rng, i),
            });
        } else {
            kb.abox.push(Assertion::Role {
                role: role_name(rng),
                from: "a".to_string(),
                to: "b".to_string(),
                label: label(rng, i),
            });
        }
    }
    for i in 0..rng.gen_range(1..5usize) {
        let mut gci = random_gci(rng);
        gci.label = label(rng, 100 + i);
        kb.tbox.push(gci);
    }
    kb
}

/// A random machine respecting the normal form: states alternate, the
/// initial state is universal, every non-final state has exactly two
/// transitions per letter.
pub fn random_atm(rng: &mut impl Rng, max_n: u32) -> Atm {
    let n = rng.gen_range(1..=max_n.max(1));
    let extra = rng.gen_range(0..=2usize);
    let mut states = vec!["s_init".to_string()];
    let mut existential = Vec::new();
    for i in 0..extra {
        let name = format!("q{i}");
        if rng.gen_bool(0.5) {
            existential.push(name.clone());
        }
        states.push(name);
    }
    states.push("s_acc".to_string());
    states.push("s_rej".to_string());
    // Final states may be either kind; transitions never leave them anyway.
    if rng.gen_bool(0.5) {
        existential.push("s_acc".to_string());
    }
    if rng.gen_bool(0.5) {
        existential.push("s_rej".to_string());
    }
    // Every universal state needs existential targets; s_init provides the
    // universal side.
    if existential.is_empty() {
        existential.push("s_acc".to_string());
    }

    let is_existential = |s: &str| existential.iter().any(|e| e == s);
    let mut delta = Vec::new();
    for s in states.clone() {
        if s == "s_acc" || s == "s_rej" {
            continue;
        }
        let targets: Vec<String> = states
            .iter()
            .filter(|t| is_existential(t) != is_existential(&s))
            .cloned()
            .collect();
        for read in [false, true] {
            loop {
                let mut pair = Vec::new();
                for _ in 0..2 {
                    pair.push(Transition {
                        source: s.clone(),
                        read,
                        write: rng.gen_bool(0.5),
                        target: targets[rng.gen_range(0..targets.len())].clone(),
                        dir: if rng.gen_bool(0.5) {
                            Dir::Left
                        } else {
                            Dir::Right
                        },
                    });
                }
                if pair[0] != pair[1] {
                    delta.extend(pair);
                    break;
                }
            }
        }
    }

    RawAtm {
        n,
        states,
        existential,
        initial: "s_init".to_string(),
        accepting: "s_acc".to_string(),
        rejecting: "s_rej".to_string(),
        delta,
    }
    .validate()
    .expect("generator respects the normal form")
}
