//! The machine-to-logic compiler: emits the axiom schemata for configuration
//! units, configuration trees, enriched trees and quasi-computation trees,
//! builds the spoiling query, and bundles both with provenance statistics.
//!
//! Every emitted GCI carries a label naming its schema and indices (for
//! example `LvlDisj[1,3]` or `TransiCons[e1.0.1.s_acc.-1]`); equivalences
//! are split into two inclusions suffixed `.fwd` and `.bwd`.

mod kb;
mod label;
mod query;

pub use kb::{kb_conf, kb_enr, kb_machine, kb_unit};
pub use label::{parse_label, validate_label, ParsedLabel, ALL_SCHEMAS};
pub use query::{query_addr, query_ith_bit, query_machine, query_main, query_rl};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::atm::Atm;
use crate::cq::Cq;
use crate::dl::KnowledgeBase;
use crate::serial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("no levels to build: unit depth must be at least 1")]
    UnitDepthZero,
    #[error("bit index {index} out of range 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
}

/// Axiom and query size statistics of one reduction output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStats {
    /// Number of emitted axioms per schema name (labels with their indices
    /// and `.fwd`/`.bwd` suffixes stripped).
    pub schema_counts: BTreeMap<String, usize>,
    pub tbox_gcis: usize,
    pub abox_assertions: usize,
    pub query_atoms: usize,
    pub query_variables: usize,
    pub atm_fingerprint: String,
}

/// The paired knowledge base and query for one machine.
#[derive(Debug, Clone)]
pub struct ReductionBundle {
    pub kb: KnowledgeBase,
    pub query: Cq,
    pub stats: ReductionStats,
}

/// Schema name of a label: the part before the index brackets, with a
/// trailing `.fwd`/`.bwd` removed first.
pub fn schema_of(label: &str) -> &str {
    let base = label
        .strip_suffix(".fwd")
        .or_else(|| label.strip_suffix(".bwd"))
        .unwrap_or(label);
    match base.find('[') {
        Some(i) => &base[..i],
        None => base,
    }
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Builds the full reduction bundle for a validated machine. With
/// `tbox_only` the single ABox assertion is replaced by a GCI forcing an
/// `aux`-reachable `Init` element.
pub fn reduce(atm: &Atm, tbox_only: bool) -> Result<ReductionBundle, ReductionError> {
    let kb = kb_machine(atm, tbox_only);
    let query = query_machine(atm)?;

    let mut schema_counts: BTreeMap<String, usize> = BTreeMap::new();
    for gci in &kb.tbox {
        let label = gci.label.as_deref().expect("generated axioms are labelled");
        *schema_counts
            .entry(schema_of(label).to_string())
            .or_default() += 1;
    }
    for assertion in &kb.abox {
        let label = assertion
            .label()
            .expect("generated assertions are labelled");
        *schema_counts
            .entry(schema_of(label).to_string())
            .or_default() += 1;
    }

    let stats = ReductionStats {
        schema_counts,
        tbox_gcis: kb.tbox.len(),
        abox_assertions: kb.abox.len(),
        query_atoms: query.atom_count(),
        query_variables: query.vars().len(),
        atm_fingerprint: format!("{:016x}", fnv1a64(serial::emit_atm(atm).as_bytes())),
    };
    Ok(ReductionBundle { kb, query, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::{tiny_acceptor, tiny_rejector};
    use std::collections::BTreeSet;

    #[test]
    fn stats_sum_to_axiom_count() {
        let bundle = reduce(&tiny_acceptor(), false).unwrap();
        let total: usize = bundle.stats.schema_counts.values().sum();
        assert_eq!(total, bundle.kb.axiom_count());
        assert_eq!(
            bundle.stats.tbox_gcis + bundle.stats.abox_assertions,
            bundle.kb.axiom_count()
        );
    }

    #[test]
    fn all_schemas_appear_for_the_reference_machine() {
        let bundle = reduce(&tiny_acceptor(), false).unwrap();
        for schema in ALL_SCHEMAS {
            assert!(
                bundle.stats.schema_counts.contains_key(*schema),
                "schema {schema} missing"
            );
        }
    }

    #[test]
    fn every_label_parses_and_validates() {
        let atm = tiny_acceptor();
        let bundle = reduce(&atm, false).unwrap();
        for gci in &bundle.kb.tbox {
            let label = gci.label.as_deref().unwrap();
            let parsed = parse_label(label).unwrap_or_else(|| panic!("unparsable label {label}"));
            assert!(
                validate_label(&parsed, &atm),
                "label {label} has invalid indices"
            );
        }
    }

    #[test]
    fn acceptor_and_rejector_differ_only_in_transition_indexed_schemata() {
        let acc = reduce(&tiny_acceptor(), false).unwrap();
        let rej = reduce(&tiny_rejector(), false).unwrap();
        let labels = |b: &ReductionBundle| -> BTreeSet<String> {
            b.kb.tbox.iter().map(|g| g.label.clone().unwrap()).collect()
        };
        let only_acc: BTreeSet<String> = labels(&acc).difference(&labels(&rej)).cloned().collect();
        let only_rej: BTreeSet<String> = labels(&rej).difference(&labels(&acc)).cloned().collect();
        for label in only_acc.iter().chain(only_rej.iter()) {
            let parsed = parse_label(label).unwrap();
            assert!(
                parsed
                    .indices
                    .iter()
                    .any(|i| i.contains("s_acc") || i.contains("s_rej") || i.contains('.')),
                "non-transition-indexed difference: {label}"
            );
        }
        assert!(!only_acc.is_empty() && !only_rej.is_empty());
    }

    #[test]
    fn emitted_symbols_stay_inside_the_declared_signature() {
        use crate::dl::{Assertion, Concept};
        use crate::names;

        let atm = tiny_acceptor();
        let n = atm.n();
        let mut concepts: BTreeSet<String> = BTreeSet::new();
        let mut roles: BTreeSet<String> = BTreeSet::new();
        for i in 0..=n + 1 {
            concepts.insert(names::lvl(i));
        }
        for i in 1..=n + 1 {
            for b in [false, true] {
                concepts.insert(names::ad(i, b));
            }
            roles.insert(names::ell(i));
            roles.insert(names::rr(i));
        }
        roles.insert(names::NEXT.into());
        roles.insert(names::AUX.into());
        concepts.extend([names::L.to_string(), names::R.to_string()]);
        concepts.extend([
            names::HD_HERE.to_string(),
            names::NO_HD_HERE.to_string(),
            names::P_HD_HERE.to_string(),
            names::NO_P_HD_HERE.to_string(),
            names::P_HD_ABV.to_string(),
            names::NO_P_HD_ABV.to_string(),
            names::INIT.to_string(),
        ]);
        for s in atm.states() {
            concepts.insert(names::st(s));
        }
        for a in [false, true] {
            concepts.extend([
                names::letter(a),
                names::cell(a),
                names::hd_let(a),
                names::p_hd_let(a),
            ]);
            for i in 1..=n {
                concepts.insert(names::hd_pos(i, a));
                concepts.insert(names::p_hd_pos(i, a));
            }
        }
        for t in atm.delta() {
            concepts.insert(names::pr_tr(t));
        }

        fn walk(c: &Concept, concepts: &BTreeSet<String>, roles: &BTreeSet<String>) {
            match c {
                Concept::Top | Concept::Bottom => {}
                Concept::Name(n) => assert!(concepts.contains(n), "stray concept {n}"),
                Concept::Not(a) => walk(a, concepts, roles),
                Concept::And(a, b) | Concept::Or(a, b) | Concept::Implies(a, b) => {
                    walk(a, concepts, roles);
                    walk(b, concepts, roles);
                }
                Concept::Exists(r, a) | Concept::Forall(r, a) => {
                    assert!(roles.contains(r), "stray role {r}");
                    walk(a, concepts, roles);
                }
                Concept::SelfLoop(r) => assert!(roles.contains(r), "stray role {r}"),
            }
        }

        for tbox_only in [false, true] {
            let kb = kb_machine(&atm, tbox_only);
            for gci in &kb.tbox {
                walk(&gci.lhs, &concepts, &roles);
                walk(&gci.rhs, &concepts, &roles);
            }
            for assertion in &kb.abox {
                match assertion {
                    Assertion::Concept { concept, .. } => walk(concept, &concepts, &roles),
                    Assertion::Role { role, .. } => assert!(roles.contains(role)),
                }
            }
        }
        let query = query_machine(&atm).unwrap();
        for (c, _) in query.concept_atoms() {
            assert!(concepts.contains(c), "stray query concept {c}");
        }
        for (r, _, _) in query.role_atoms() {
            assert!(roles.contains(r), "stray query role {r}");
        }
    }

    #[test]
    fn tbox_only_variant_swaps_the_abox_for_an_aux_axiom() {
        let with_abox = reduce(&tiny_acceptor(), false).unwrap();
        assert_eq!(with_abox.stats.abox_assertions, 1);
        let tbox_only = reduce(&tiny_acceptor(), true).unwrap();
        assert_eq!(tbox_only.stats.abox_assertions, 0);
        assert_eq!(tbox_only.stats.tbox_gcis, with_abox.stats.tbox_gcis + 1);
        assert!(tbox_only
            .kb
            .tbox
            .iter()
            .any(|g| g.label.as_deref() == Some("AuxInit")));
    }

    #[test]
    fn output_is_stable_across_runs() {
        let a = reduce(&tiny_acceptor(), false).unwrap();
        let b = reduce(&tiny_acceptor(), false).unwrap();
        assert_eq!(serial::emit_kb_dltext(&a.kb), serial::emit_kb_dltext(&b.kb));
        assert_eq!(serial::emit_cq(&a.query), serial::emit_cq(&b.query));
        assert_eq!(a.stats, b.stats);
    }
}
