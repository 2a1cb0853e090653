//! Randomized desk-scale instances of the structural invariants: builder
//! outputs model their knowledge bases for tape exponents 1 and 2, the
//! decorations are functional where they should be, and the spoiling query
//! stays defeated on faithful trees of both sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use alcself::atm::{find_accepting_run, tiny_acceptor, Atm, Branch, Configuration};
use alcself::cq::{exists_match, Budget};
use alcself::dl::{check_kb, KnowledgeBase};
use alcself::reduction::{kb_conf, kb_enr, kb_machine, kb_unit, query_machine};
use alcself::witness::{
    address_word, build_config_tree, build_enriched_tree, build_quasi_computation_tree, build_unit,
    Origin,
};

fn tbox_kb(tbox: Vec<alcself::dl::Gci>) -> KnowledgeBase {
    KnowledgeBase { abox: vec![], tbox }
}

fn random_configuration(rng: &mut ChaCha8Rng, atm: &Atm) -> Configuration {
    Configuration {
        tape: (0..atm.tape_len()).map(|_| rng.gen_bool(0.5)).collect(),
        state: atm.states()[rng.gen_range(0..atm.states().len())].clone(),
        head: rng.gen_range(0..atm.tape_len()),
    }
}

#[test]
fn units_model_their_axioms_for_both_root_sides() {
    for n in 1..=3 {
        let kb = tbox_kb(kb_unit(n).unwrap());
        let unit = build_unit(n).unwrap();
        assert!(check_kb(&unit, &kb).all_hold(), "n={n}");
    }
}

#[test]
fn removing_a_leaf_loop_breaks_exactly_the_loop_axiom() {
    let mut unit = build_unit(2).unwrap();
    unit.remove_role_pair("next", "01", "01");
    let report = check_kb(&unit, &tbox_kb(kb_unit(2).unwrap()));
    let failing: Vec<String> = report.failing_labels().into_iter().collect();
    assert_eq!(failing, ["leaves-next-loop.fwd"]);
}

#[test]
fn random_configuration_trees_model_the_configuration_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 1..=2 {
        let atm = tiny_acceptor().with_tape_exponent(n);
        let kb = tbox_kb(kb_conf(&atm));
        for _ in 0..10 {
            let cfg = random_configuration(&mut rng, &atm);
            let tree = build_config_tree(&atm, &cfg).unwrap();
            let report = check_kb(&tree, &kb);
            assert!(
                report.all_hold(),
                "n={n} cfg={cfg}: {:?}",
                report.failing_labels()
            );

            // Exactly one level-n node carries the head marker, and every
            // level-n node carries exactly one letter concept.
            assert_eq!(tree.concept_ext("HdHere").len(), 1);
            let level_n = tree.concept_ext(&format!("Lvl_{n}"));
            for w in &level_n {
                let zero = tree.in_concept("Let_0", w);
                let one = tree.in_concept("Let_1", w);
                assert!(zero ^ one, "node {w} letters: {zero}/{one}");
            }
        }
    }
}

#[test]
fn random_enriched_trees_model_the_enriched_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for n in 1..=2 {
        let atm = tiny_acceptor().with_tape_exponent(n);
        let kb = tbox_kb(kb_enr(&atm));
        let mut built = 0;
        for _ in 0..40 {
            // Derive a coherent (configuration, origin) pair by stepping a
            // random non-final configuration through a random branch.
            let parent = random_configuration(&mut rng, &atm);
            if atm.is_final(&parent.state) {
                continue;
            }
            let branch = if rng.gen_bool(0.5) {
                Branch::First
            } else {
                Branch::Second
            };
            let Ok(successors) = atm.successors(&parent) else {
                continue;
            };
            let (_, child) = &successors[branch.index()];
            let transition = atm
                .transition(&parent.state, parent.letter_under_head(), branch)
                .unwrap()
                .clone();
            let tree =
                build_enriched_tree(&atm, child, &Origin::Step { transition, branch }).unwrap();
            let report = check_kb(&tree, &kb);
            assert!(report.all_hold(), "n={n}: {:?}", report.failing_labels());
            built += 1;
        }
        assert!(built > 5, "too few enriched trees generated");

        let init = build_enriched_tree(&atm, &atm.initial_configuration(), &Origin::Init).unwrap();
        assert!(check_kb(&init, &kb).all_hold());
        assert_eq!(init.concept_ext("PHdHere"), [address_word(0, n)].into());
    }
}

#[test]
fn faithful_quasi_computation_trees_stay_countermodels_at_depth_two() {
    // The n = 2 instance drives the head across a carry boundary, which is
    // where the binary-increment gadget earns its keep.
    for n in 1..=2 {
        let atm = tiny_acceptor().with_tape_exponent(n);
        let run = find_accepting_run(&atm).unwrap().unwrap();
        let qct = build_quasi_computation_tree(&atm, &run).unwrap();
        let report = check_kb(&qct, &kb_machine(&atm, false));
        assert!(report.all_hold(), "n={n}: {:?}", report.failing_labels());
        let spoiler = query_machine(&atm).unwrap();
        assert!(
            !exists_match(&qct, &spoiler, &Budget::default()).unwrap(),
            "n={n}"
        );
    }
}
