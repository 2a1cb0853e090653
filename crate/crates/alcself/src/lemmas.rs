//! The verification suites behind `alcself verify-lemmas` and the acceptance
//! test target. Each suite turns one family of correctness lemmas into
//! desk-scale checks: witness structures against the generated axioms,
//! query match sets against independently enumerated expectations, the
//! dichotomy between faithful and fault-injected quasi-runs, size closed
//! forms, and byte-level determinism.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::atm::{
    find_accepting_run, inject_tape_fault, is_accepting, is_valid_run_tree, tiny_acceptor,
    tiny_rejector, Atm, Configuration, RunTree,
};
use crate::cq::{self, Budget, Cq};
use crate::dl::{check_kb, Gci, Interpretation, KbReport, KnowledgeBase};
use crate::gen;
use crate::names;
use crate::reduction::{
    kb_conf, kb_enr, kb_machine, kb_unit, query_addr, query_ith_bit, query_machine, query_main,
    query_rl, reduce,
};
use crate::serial;
use crate::witness::{
    address_word, build_config_tree, build_enriched_tree, build_enriched_tree_with_phd,
    build_quasi_computation_tree, build_unit, run_origins, split_element, Origin,
};

/// One row of the traceability table.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn ok(id: impl Into<String>) -> CheckLine {
        CheckLine {
            id: id.into(),
            pass: true,
            detail: String::new(),
        }
    }

    fn fail(id: impl Into<String>, detail: impl Into<String>) -> CheckLine {
        CheckLine {
            id: id.into(),
            pass: false,
            detail: detail.into(),
        }
    }

    fn expect(id: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckLine {
        if pass {
            CheckLine::ok(id)
        } else {
            CheckLine::fail(id, detail)
        }
    }

    fn from_report(id: impl Into<String>, report: &KbReport) -> CheckLine {
        CheckLine::expect(
            id,
            report.all_hold(),
            format!("failing axioms: {:?}", report.failing_labels()),
        )
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "{}=pass", self.id)
        } else {
            write!(f, "{}=fail ({})", self.id, self.detail)
        }
    }
}

fn tbox_kb(tbox: Vec<Gci>) -> KnowledgeBase {
    KnowledgeBase { abox: vec![], tbox }
}

fn budget() -> Budget {
    Budget::default()
}

fn matches_of(interp: &Interpretation, query: &Cq) -> Result<BTreeSet<(String, String)>, String> {
    let raw = cq::find_matches(interp, query, &budget()).map_err(|e| e.to_string())?;
    Ok(raw
        .into_iter()
        .map(|t| {
            assert_eq!(t.len(), 2, "two distinguished variables expected");
            (t[0].clone(), t[1].clone())
        })
        .collect())
}

fn compose_roles(
    left: &BTreeSet<(String, String)>,
    right: &BTreeSet<(String, String)>,
) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for (a, b) in left {
        for (c, d) in right {
            if b == c {
                out.insert((a.clone(), d.clone()));
            }
        }
    }
    out
}

/// Unit suite: each unit models its axioms, the root-to-leaf query matches
/// exactly the root-leaf pairs, and the loop-composition property covers
/// every word.
pub fn criterion_units(max_depth: u32) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    for n in 1..=max_depth.max(1) {
        let unit = match build_unit(n) {
            Ok(u) => u,
            Err(e) => {
                lines.push(CheckLine::fail(
                    format!("unit-models-kb[n={n}]"),
                    e.to_string(),
                ));
                continue;
            }
        };
        let kb = tbox_kb(kb_unit(n).expect("n >= 1"));
        lines.push(CheckLine::from_report(
            format!("unit-models-kb[n={n}]"),
            &check_kb(&unit, &kb),
        ));

        let id = format!("unit-rl-matchset[n={n}]");
        match query_rl(n)
            .map_err(|e| e.to_string())
            .and_then(|q| matches_of(&unit, &q))
        {
            Err(e) => lines.push(CheckLine::fail(id, e)),
            Ok(got) => {
                let expected: BTreeSet<(String, String)> = unit
                    .concept_ext(&names::lvl(n))
                    .into_iter()
                    .map(|leaf| (String::new(), leaf))
                    .collect();
                lines.push(CheckLine::expect(
                    id,
                    got == expected,
                    format!("got {} pairs, expected {}", got.len(), expected.len()),
                ));
            }
        }

        // (root, w) lies in ell_1 ∘ r_1 ∘ ... ∘ ell_n ∘ r_n for every word w,
        // checked by relational composition.
        let mut relation = unit.role_ext(&names::ell(1));
        relation = compose_roles(&relation, &unit.role_ext(&names::rr(1)));
        for i in 2..=n {
            relation = compose_roles(&relation, &unit.role_ext(&names::ell(i)));
            relation = compose_roles(&relation, &unit.role_ext(&names::rr(i)));
        }
        let missing: Vec<&String> = unit
            .domain()
            .iter()
            .filter(|w| !relation.contains(&(String::new(), (*w).clone())))
            .collect();
        lines.push(CheckLine::expect(
            format!("unit-composition[n={n}]"),
            missing.is_empty(),
            format!("words not reached from the root: {missing:?}"),
        ));
    }
    lines
}

/// All configurations quasi-reachable from the initial one (including it).
fn quasi_reachable(atm: &Atm, cap: usize) -> Result<Vec<Configuration>, String> {
    let mut seen = BTreeSet::from([atm.initial_configuration()]);
    let mut queue = vec![atm.initial_configuration()];
    while let Some(cfg) = queue.pop() {
        if atm.is_final(&cfg.state) {
            continue;
        }
        for (_, succ) in atm.quasi_successors(&cfg).map_err(|e| e.to_string())? {
            if seen.len() >= cap {
                return Err(format!("more than {cap} quasi-reachable configurations"));
            }
            if seen.insert(succ.clone()) {
                queue.push(succ);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

fn cfg_id(cfg: &Configuration) -> String {
    let tape: String = cfg
        .tape
        .iter()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    format!("{}.{}.{}", tape, cfg.state, cfg.head)
}

/// Configuration-tree suite: every quasi-reachable configuration's tree
/// models the configuration axioms, and single-decoration removals fail
/// exactly the expected schema.
pub fn criterion_config_trees(atm: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let kb = tbox_kb(kb_conf(atm));

    match quasi_reachable(atm, 512) {
        Err(e) => lines.push(CheckLine::fail("conf-models", e)),
        Ok(reachable) => {
            for cfg in &reachable {
                let id = format!("conf-models[{}]", cfg_id(cfg));
                match build_config_tree(atm, cfg) {
                    Err(e) => lines.push(CheckLine::fail(id, e.to_string())),
                    Ok(tree) => lines.push(CheckLine::from_report(id, &check_kb(&tree, &kb))),
                }
            }
        }
    }

    // Mutation tests on the initial configuration's tree; its tape is
    // all-zero with the head on cell 0, which the expectations below use.
    let n = atm.n();
    let base = match build_config_tree(atm, &atm.initial_configuration()) {
        Ok(t) => t,
        Err(e) => {
            lines.push(CheckLine::fail("conf-mutation", e.to_string()));
            return lines;
        }
    };
    let w_head = address_word(0, n);
    let other_cell = address_word(1, n);
    let leaf = format!("{w_head}0");
    type Mutation = (
        &'static str,
        Box<dyn Fn(&mut Interpretation)>,
        Vec<&'static str>,
    );
    let mutations: Vec<Mutation> = vec![
        (
            "next-loop",
            Box::new({
                let leaf = leaf.clone();
                move |i| i.remove_role_pair(names::NEXT, &leaf, &leaf)
            }),
            vec!["leaves-next-loop.fwd"],
        ),
        (
            "letter",
            Box::new({
                let w = other_cell.clone();
                move |i| i.remove_from_concept(&names::letter(false), &w)
            }),
            vec!["LetConCov.bwd"],
        ),
        (
            "hd-here",
            Box::new({
                let w = w_head.clone();
                move |i| i.remove_from_concept(names::HD_HERE, &w)
            }),
            vec!["HdHereCov.bwd", "HdHereEqualAdr"],
        ),
        (
            "cell-marker",
            Box::new({
                let w = leaf.clone();
                move |i| i.remove_from_concept(&names::cell(false), &w)
            }),
            vec!["EncLetZero", "LetCov.fwd"],
        ),
        (
            "hd-pos",
            Box::new(move |i| i.remove_from_concept(&names::hd_pos(1, false), "")),
            vec!["HdPosCov[1].fwd"],
        ),
    ];
    for (name, mutate, expected) in mutations {
        let mut tree = base.clone();
        mutate(&mut tree);
        let failing = check_kb(&tree, &kb).failing_labels();
        let expected: BTreeSet<String> = expected.into_iter().map(str::to_string).collect();
        lines.push(CheckLine::expect(
            format!("conf-mutation[{name}]"),
            failing == expected,
            format!("failing {failing:?}, expected {expected:?}"),
        ));
    }
    lines
}

/// Enriched suite: every (configuration, origin) pair of the machine's
/// accepting run yields a model of the enriched axioms, the arithmetic
/// gadget holds non-vacuously at the root, and an off-by-one previous head
/// position fails exactly the transition-consistency axiom.
pub fn criterion_enriched(atm: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let run = match find_accepting_run(atm) {
        Ok(Some(run)) => run,
        Ok(None) => return vec![CheckLine::fail("enr-models", "machine does not accept")],
        Err(e) => return vec![CheckLine::fail("enr-models", e.to_string())],
    };
    let gcis = kb_enr(atm);
    let kb = tbox_kb(gcis.clone());

    for (path, cfg, origin) in run_origins(atm, &run) {
        let node = if path.is_empty() {
            "root".to_string()
        } else {
            path.clone()
        };
        let id = format!("enr-models[node={node}]");
        let tree = match build_enriched_tree(atm, &cfg, &origin) {
            Ok(t) => t,
            Err(e) => {
                lines.push(CheckLine::fail(id, e.to_string()));
                continue;
            }
        };
        lines.push(CheckLine::from_report(id, &check_kb(&tree, &kb)));

        let Origin::Step { transition, .. } = &origin else {
            continue;
        };
        let label = format!("TransiCons[{}]", names::transition_tag(transition));
        let axiom = gcis
            .iter()
            .find(|g| g.label.as_deref() == Some(label.as_str()))
            .expect("every transition has a consistency axiom");
        lines.push(CheckLine::expect(
            format!("enr-gadget[node={node}]"),
            tree.eval(&axiom.rhs).contains(""),
            format!("{label} right-hand side does not hold at the root"),
        ));

        let phd = (cfg.head as i64 - transition.dir.offset()) as usize;
        let wrong_phd = (phd + 1) % atm.tape_len();
        let id = format!("enr-phd-off-by-one[node={node}]");
        match build_enriched_tree_with_phd(atm, &cfg, &origin, wrong_phd) {
            Err(e) => lines.push(CheckLine::fail(id, e.to_string())),
            Ok(skewed) => {
                let failing = check_kb(&skewed, &kb).failing_labels();
                let expected: BTreeSet<String> = [label.clone()].into();
                lines.push(CheckLine::expect(
                    id,
                    failing == expected,
                    format!("failing {failing:?}, expected {expected:?}"),
                ));
            }
        }
    }
    lines
}

fn pad_with_junk(interp: &Interpretation, seed: u64) -> Interpretation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut padded = interp.clone();
    let concepts: Vec<String> = interp.concept_names().cloned().collect();
    let roles: Vec<String> = interp.role_names().cloned().collect();
    let reals: Vec<String> = interp.domain().iter().cloned().collect();
    let junk: Vec<String> = (0..rng.gen_range(1..=3))
        .map(|i| format!("junk{i}"))
        .collect();
    for j in &junk {
        padded.add_element(j.clone());
        for c in &concepts {
            if rng.gen_bool(0.3) {
                padded.add_to_concept(c.clone(), j.clone());
            }
        }
    }
    for j in &junk {
        for r in &roles {
            if rng.gen_bool(0.5) {
                let from = reals[rng.gen_range(0..reals.len())].clone();
                padded.add_role_pair(r.clone(), from, j.clone());
            }
            if rng.gen_bool(0.5) {
                let to = junk[rng.gen_range(0..junk.len())].clone();
                padded.add_role_pair(r.clone(), j.clone(), to);
            }
        }
    }
    padded
}

fn hom_exists(
    fresh: &Interpretation,
    target: &Interpretation,
    root_image: &str,
) -> Result<bool, String> {
    let anchors = [(String::new(), root_image.to_string())].into();
    cq::find_homomorphism(fresh, target, &anchors, &budget())
        .map(|h| h.is_some())
        .map_err(|e| e.to_string())
}

fn hom_triple(lines: &mut Vec<CheckLine>, kind: &str, witness: &Interpretation, seed: u64) {
    let push =
        |lines: &mut Vec<CheckLine>, id: String, result: Result<bool, String>, expected: bool| {
            match result {
                Err(e) => lines.push(CheckLine::fail(id, e)),
                Ok(found) => lines.push(CheckLine::expect(
                    id,
                    found == expected,
                    format!("homomorphism found: {found}"),
                )),
            }
        };
    push(
        lines,
        format!("hom-{kind}"),
        hom_exists(witness, witness, ""),
        true,
    );

    let padded = pad_with_junk(witness, seed);
    push(
        lines,
        format!("hom-{kind}-padded"),
        hom_exists(witness, &padded, ""),
        true,
    );

    // Removing a required successor must make the search fail.
    let mut broken = witness.clone();
    broken.remove_role_pair(&names::ell(1), "", "0");
    push(
        lines,
        format!("hom-{kind}-removal"),
        hom_exists(witness, &broken, ""),
        false,
    );
}

/// Homomorphism suite: a fresh witness embeds into each builder output (and
/// into junk-padded copies) anchored at every root, and the search fails
/// once a required successor is removed.
pub fn criterion_homomorphisms(atm: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();

    for n in [1, 2] {
        let unit = build_unit(n).expect("n >= 1");
        hom_triple(
            &mut lines,
            &format!("unit[n={n}]"),
            &unit,
            11 + u64::from(n),
        );
    }

    let initial = atm.initial_configuration();
    match build_config_tree(atm, &initial) {
        Err(e) => lines.push(CheckLine::fail("hom-conf", e.to_string())),
        Ok(tree) => hom_triple(&mut lines, "conf", &tree, 20),
    }
    match build_enriched_tree(atm, &initial, &Origin::Init) {
        Err(e) => lines.push(CheckLine::fail("hom-enr", e.to_string())),
        Ok(tree) => hom_triple(&mut lines, "enr", &tree, 21),
    }

    // Quasi-computation tree: anchor a fresh copy of each component's
    // enriched tree at that component's root.
    let run = match find_accepting_run(atm) {
        Ok(Some(run)) => run,
        _ => {
            lines.push(CheckLine::fail("hom-qct", "machine does not accept"));
            return lines;
        }
    };
    let qct = match build_quasi_computation_tree(atm, &run) {
        Ok(q) => q,
        Err(e) => {
            lines.push(CheckLine::fail("hom-qct", e.to_string()));
            return lines;
        }
    };
    let padded = pad_with_junk(&qct, 22);
    for (path, cfg, origin) in run_origins(atm, &run) {
        let node = if path.is_empty() {
            "root".to_string()
        } else {
            path.clone()
        };
        let id = format!("hom-qct[node={node}]");
        let fresh = match build_enriched_tree(atm, &cfg, &origin) {
            Ok(t) => t,
            Err(e) => {
                lines.push(CheckLine::fail(id, e.to_string()));
                continue;
            }
        };
        // The fresh root's L/R choice must mirror the component root's.
        let fresh = if path.ends_with('1') {
            let mut flipped = fresh;
            flipped.remove_from_concept(names::L, "");
            flipped.add_to_concept(names::R, "");
            flipped
        } else {
            fresh
        };
        let root = format!("{path}#");
        let result: Result<bool, String> =
            (|| Ok(hom_exists(&fresh, &qct, &root)? && hom_exists(&fresh, &padded, &root)?))();
        match result {
            Err(e) => lines.push(CheckLine::fail(id, e)),
            Ok(found) => lines.push(CheckLine::expect(id, found, "no homomorphism")),
        }
    }
    let mut broken = qct.clone();
    broken.remove_role_pair(&names::ell(1), "#", "#0");
    let fresh = build_enriched_tree(atm, &initial, &Origin::Init).expect("built above");
    match hom_exists(&fresh, &broken, "#") {
        Err(e) => lines.push(CheckLine::fail("hom-qct-removal", e)),
        Ok(found) => lines.push(CheckLine::expect(
            "hom-qct-removal",
            !found,
            "homomorphism survived a removed successor",
        )),
    }
    lines
}

/// `(parent path, child path)` pairs of a run tree.
fn tree_edges(run: &RunTree) -> Vec<(String, String)> {
    run.nodes()
        .iter()
        .flat_map(|(path, node)| {
            (0..node.children.len())
                .map(|i| (path.clone(), format!("{path}{i}")))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn leaves_of_component(path: &str, depth: u32) -> Vec<String> {
    (0..(1usize << depth))
        .map(|v| format!("{path}#{}", address_word(v, depth)))
        .collect()
}

/// Match-set suite: the consecutive-leaf query, the bit-fixing queries and
/// the equal-address queries produce exactly the sets enumerated from the
/// run-tree structure.
pub fn criterion_match_sets(atm: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let n = atm.n();
    let depth = n + 1;
    let run = match find_accepting_run(atm) {
        Ok(Some(run)) => run,
        _ => return vec![CheckLine::fail("match-sets", "machine does not accept")],
    };
    let qct = match build_quasi_computation_tree(atm, &run) {
        Ok(q) => q,
        Err(e) => return vec![CheckLine::fail("match-sets", e.to_string())],
    };
    let edges = tree_edges(&run);
    let all_leaves: Vec<String> = run
        .nodes()
        .iter()
        .flat_map(|(p, _)| leaves_of_component(p, depth))
        .collect();

    let mut expect_main = BTreeSet::new();
    for (p, q) in &edges {
        for x in leaves_of_component(p, depth) {
            for y in leaves_of_component(q, depth) {
                expect_main.insert((x.clone(), y));
            }
        }
    }
    match matches_of(&qct, &query_main(n)) {
        Err(e) => lines.push(CheckLine::fail("match-qmain", e)),
        Ok(got) => lines.push(CheckLine::expect(
            "match-qmain",
            got == expect_main,
            format!("got {} pairs, expected {}", got.len(), expect_main.len()),
        )),
    }

    let bit_of = |id: &str, i: u32| {
        let (_, word) = split_element(id).expect("a quasi-computation-tree element");
        word.as_bytes()[(i - 1) as usize] == b'1'
    };
    for i in 1..=depth {
        let mut bit_sets = Vec::new();
        for b in [false, true] {
            // Leaf identity pairs, plus consecutive-tree leaf pairs whose
            // i-th address bit is b on both sides.
            let mut expected: BTreeSet<(String, String)> =
                all_leaves.iter().map(|l| (l.clone(), l.clone())).collect();
            for (x, y) in &expect_main {
                if bit_of(x, i) == b && bit_of(y, i) == b {
                    expected.insert((x.clone(), y.clone()));
                }
            }
            let id = format!("match-qbit[i={i},b={}]", u8::from(b));
            let got = query_ith_bit(i, b, n)
                .map_err(|e| e.to_string())
                .and_then(|q| matches_of(&qct, &q));
            match got {
                Err(e) => lines.push(CheckLine::fail(id, e)),
                Ok(got) => {
                    lines.push(CheckLine::expect(
                        id,
                        got == expected,
                        format!("got {} pairs, expected {}", got.len(), expected.len()),
                    ));
                    bit_sets.push(got);
                }
            }
        }

        let expected: BTreeSet<(String, String)> = expect_main
            .iter()
            .filter(|(x, y)| bit_of(x, i) == bit_of(y, i))
            .cloned()
            .collect();
        let id = format!("match-qaddr[i={i}]");
        let got = query_addr(i, n)
            .map_err(|e| e.to_string())
            .and_then(|q| matches_of(&qct, &q));
        match got {
            Err(e) => lines.push(CheckLine::fail(id, e)),
            Ok(got) => {
                lines.push(CheckLine::expect(
                    id,
                    got == expected,
                    format!("got {} pairs, expected {}", got.len(), expected.len()),
                ));
                // Relational-calculus identity: the equal-address matches are
                // the consecutive-leaf matches intersected with the
                // composition of the two bit-fixing match sets.
                if let [bit0, bit1] = bit_sets.as_slice() {
                    let composed = compose_roles(bit0, bit1);
                    let derived: BTreeSet<(String, String)> =
                        expect_main.intersection(&composed).cloned().collect();
                    lines.push(CheckLine::expect(
                        format!("match-qaddr-identity[i={i}]"),
                        got == derived,
                        "composition identity violated",
                    ));
                }
            }
        }
    }
    lines
}

/// Independent enumeration of what the spoiling query must match: for every
/// run-tree edge and every untouched cell whose letter differs between
/// parent and child, the cell's child node carrying `zz0` in the parent tree
/// paired with the same-address node (carrying `zz1`) in the child tree.
fn expected_spoiler_matches(atm: &Atm, run: &RunTree) -> BTreeSet<(String, String)> {
    let n = atm.n();
    let mut out = BTreeSet::new();
    for (path, node) in run.nodes() {
        for (i, child) in node.ordered_children().into_iter().enumerate() {
            let child_path = format!("{path}{i}");
            for k in 0..atm.tape_len() {
                if k == node.config.head {
                    continue;
                }
                let parent_letter = node.config.tape[k];
                if parent_letter != child.tree.config.tape[k] {
                    let cell = address_word(k, n);
                    let digit = u8::from(parent_letter);
                    out.insert((
                        format!("{path}#{cell}{digit}"),
                        format!("{child_path}#{cell}{digit}"),
                    ));
                }
            }
        }
    }
    out
}

fn check_spoiler_pairs(
    qct: &Interpretation,
    pairs: &BTreeSet<(String, String)>,
) -> Result<(), String> {
    for (x, y) in pairs {
        let (px, wx) = split_element(x).ok_or("malformed element")?;
        let (py, wy) = split_element(y).ok_or("malformed element")?;
        if wx != wy || !py.starts_with(px) || py.len() != px.len() + 1 {
            return Err(format!(
                "({x},{y}) is not an equal-address consecutive pair"
            ));
        }
        if !qct.in_concept(&names::cell(false), x) {
            return Err(format!("{x} lacks zz0"));
        }
        if !qct.in_concept(&names::cell(true), y) {
            return Err(format!("{y} lacks zz1"));
        }
        if !qct.in_concept(names::NO_P_HD_ABV, y) {
            return Err(format!("{y} lacks NoPHdAbv"));
        }
    }
    Ok(())
}

/// Main-theorem suite: the faithful quasi-computation tree models the
/// machine KB with no spoiling match; every single-cell fault injection
/// still yields a model but with exactly the predicted matches; the
/// acceptance oracle agrees with exhaustive search on the reference pair.
pub fn criterion_dichotomy(accepting: &Atm, rejecting: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let kb = kb_machine(accepting, false);
    let spoiler = match query_machine(accepting) {
        Ok(q) => q,
        Err(e) => return vec![CheckLine::fail("main-spoiler", e.to_string())],
    };
    let run = match find_accepting_run(accepting) {
        Ok(Some(run)) => run,
        _ => return vec![CheckLine::fail("main-run", "machine does not accept")],
    };

    let mut dichotomy_ok = true;
    let evaluate =
        |lines: &mut Vec<CheckLine>, dichotomy_ok: &mut bool, tag: &str, tree: &RunTree| {
            let qct = match build_quasi_computation_tree(accepting, tree) {
                Ok(q) => q,
                Err(e) => {
                    lines.push(CheckLine::fail(format!("main-model[{tag}]"), e.to_string()));
                    *dichotomy_ok = false;
                    return;
                }
            };
            lines.push(CheckLine::from_report(
                format!("main-model[{tag}]"),
                &check_kb(&qct, &kb),
            ));
            let expected = expected_spoiler_matches(accepting, tree);
            match matches_of(&qct, &spoiler) {
                Err(e) => {
                    lines.push(CheckLine::fail(format!("main-spoiler[{tag}]"), e));
                    *dichotomy_ok = false;
                }
                Ok(got) => {
                    let strict = is_valid_run_tree(accepting, tree, true);
                    let conditions = check_spoiler_pairs(&qct, &got);
                    let pass = got == expected && conditions.is_ok() && strict == got.is_empty();
                    *dichotomy_ok &= pass;
                    lines.push(CheckLine::expect(
                        format!("main-spoiler[{tag}]"),
                        pass,
                        format!("got {got:?}, expected {expected:?}, conditions: {conditions:?}"),
                    ));
                }
            }
        };

    evaluate(&mut lines, &mut dichotomy_ok, "faithful", &run);
    for (path, _) in run.nodes() {
        if path.is_empty() {
            continue;
        }
        let parent_head = run
            .node_at(&path[..path.len() - 1])
            .expect("parent exists")
            .config
            .head;
        for cell in (0..accepting.tape_len()).filter(|&c| c != parent_head) {
            match inject_tape_fault(accepting, &run, &path, cell) {
                Err(e) => lines.push(CheckLine::fail(
                    format!("main-model[fault-{path}-{cell}]"),
                    e.to_string(),
                )),
                Ok(faulty) => {
                    evaluate(
                        &mut lines,
                        &mut dichotomy_ok,
                        &format!("fault-{path}-{cell}"),
                        &faulty,
                    );
                }
            }
        }
    }
    lines.push(CheckLine::expect(
        "main-dichotomy",
        dichotomy_ok,
        "spoiling matches did not coincide exactly with non-strict runs",
    ));

    let oracle = (|| -> Result<bool, String> {
        let acc = is_accepting(accepting).map_err(|e| e.to_string())?;
        let rej = is_accepting(rejecting).map_err(|e| e.to_string())?;
        let rej_run = find_accepting_run(rejecting).map_err(|e| e.to_string())?;
        Ok(acc && !rej && rej_run.is_none())
    })();
    match oracle {
        Err(e) => lines.push(CheckLine::fail("main-oracle", e)),
        Ok(ok) => lines.push(CheckLine::expect(
            "main-oracle",
            ok,
            "oracle verdicts disagree on the reference machines",
        )),
    }
    lines
}

/// Closed-form axiom count of the machine KB (TBox plus the one assertion),
/// derived symbolically from the per-schema index ranges.
pub fn machine_kb_closed_form(atm: &Atm) -> usize {
    let n = atm.n() as usize;
    let d = n + 1;
    let q = atm.states().len();
    let m = atm.delta().len();
    let existential = atm
        .states()
        .iter()
        .filter(|s| !atm.is_final(s) && atm.is_existential(s))
        .count();
    let universal = atm
        .states()
        .iter()
        .filter(|s| !atm.is_final(s) && !atm.is_existential(s))
        .count();
    let unit = 6 + d * (d + 1) / 2 + 7 * d + d * (d + 1);
    let conf = 20 + q * (q - 1) / 2 + 5 * n;
    let enr = 18 + 2 * m + m * (m - 1) / 2 + 5 * n;
    let machine = 3 * existential + 5 * universal + 3 + 2 * n;
    unit + conf + enr + machine + 1
}

/// Closed-form atom count of the spoiling query.
pub fn spoiler_atom_closed_form(n: u32) -> usize {
    let n = n as usize;
    12 * n * n + 26 * n + 19
}

/// Closed-form variable count of the spoiling query.
pub fn spoiler_var_closed_form(n: u32) -> usize {
    let n = n as usize;
    2 + (n + 1) * (12 * n + 9)
}

/// Polynomiality suite: generated sizes match the symbolically derived
/// closed forms for tape exponents 1 through 8 and grow monotonically.
pub fn criterion_polynomiality(atm: &Atm) -> Vec<CheckLine> {
    let mut prev_axioms = 0usize;
    let mut prev_atoms = 0usize;
    let mut monotone = true;
    let mut axioms_ok = true;
    let mut atoms_ok = true;
    let mut detail = String::new();
    for n in 1..=8u32 {
        let scaled = atm.with_tape_exponent(n);
        let kb = kb_machine(&scaled, false);
        if kb.axiom_count() != machine_kb_closed_form(&scaled) {
            axioms_ok = false;
            detail = format!(
                "N={n}: {} axioms vs closed form {}",
                kb.axiom_count(),
                machine_kb_closed_form(&scaled)
            );
        }
        let query = match query_machine(&scaled) {
            Ok(q) => q,
            Err(e) => return vec![CheckLine::fail("poly-query-atoms", e.to_string())],
        };
        if query.atom_count() != spoiler_atom_closed_form(n)
            || query.vars().len() != spoiler_var_closed_form(n)
        {
            atoms_ok = false;
            detail = format!(
                "N={n}: {} atoms / {} vars vs {} / {}",
                query.atom_count(),
                query.vars().len(),
                spoiler_atom_closed_form(n),
                spoiler_var_closed_form(n)
            );
        }
        monotone &= kb.axiom_count() > prev_axioms && query.atom_count() > prev_atoms;
        prev_axioms = kb.axiom_count();
        prev_atoms = query.atom_count();
    }
    vec![
        CheckLine::expect("poly-kb-axioms", axioms_ok, detail.clone()),
        CheckLine::expect("poly-query-atoms", atoms_ok, detail),
        CheckLine::expect(
            "poly-monotone",
            monotone,
            "sizes are not strictly increasing in the tape exponent",
        ),
    ]
}

/// Determinism suite: compiling three times yields byte-identical output,
/// and all four serialization round trips are identities on randomized
/// instances (25 per format).
pub fn criterion_determinism(atm: &Atm) -> Vec<CheckLine> {
    let mut lines = Vec::new();

    let emit_all = || -> Result<(String, String, String), String> {
        let bundle = reduce(atm, false).map_err(|e| e.to_string())?;
        Ok((
            serial::emit_kb_dltext(&bundle.kb),
            serial::emit_kb_owlfs(&bundle.kb),
            serial::emit_cq(&bundle.query).map_err(|e| e.to_string())?,
        ))
    };
    match (emit_all(), emit_all(), emit_all()) {
        (Ok(a), Ok(b), Ok(c)) => lines.push(CheckLine::expect(
            "det-compile",
            a == b && b == c,
            "compile output differs across runs",
        )),
        _ => lines.push(CheckLine::fail("det-compile", "compilation failed")),
    }

    let roundtrip = |id: &str, check: &mut dyn FnMut(&mut ChaCha8Rng) -> Result<bool, String>| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut pass = true;
        let mut detail = String::new();
        for k in 0..25 {
            match check(&mut rng) {
                Ok(true) => {}
                Ok(false) => {
                    pass = false;
                    detail = format!("instance {k} did not round-trip");
                    break;
                }
                Err(e) => {
                    pass = false;
                    detail = format!("instance {k}: {e}");
                    break;
                }
            }
        }
        CheckLine::expect(format!("det-roundtrip-{id}"), pass, detail)
    };

    let atm_line = roundtrip("atm", &mut |rng| {
        let machine = gen::random_atm(rng, 2);
        let text = serial::emit_atm(&machine);
        let (back, _) = serial::parse_atm(&text).map_err(|e| e.to_string())?;
        Ok(back == machine && serial::emit_atm(&back) == text)
    });
    let interp_line = roundtrip("interp", &mut |rng| {
        let interp = gen::random_interpretation(rng, 6);
        let text = serial::emit_interp(&interp);
        let back = serial::parse_interp(&text).map_err(|e| e.to_string())?;
        Ok(back == interp && serial::emit_interp(&back) == text)
    });
    let kb_line = roundtrip("kb", &mut |rng| {
        let kb = gen::random_kb(rng);
        let text = serial::emit_kb_dltext(&kb);
        let back = serial::parse_kb(&text).map_err(|e| e.to_string())?;
        Ok(back == kb && serial::emit_kb_dltext(&back) == text)
    });
    let cq_line = roundtrip("cq", &mut |rng| {
        let query = gen::random_cq(rng, 4);
        let text = serial::emit_cq(&query).map_err(|e| e.to_string())?;
        let back = serial::parse_cq(&text).map_err(|e| e.to_string())?;
        let again = serial::emit_cq(&back).map_err(|e| e.to_string())?;
        Ok(back == query && again == text)
    });
    lines.extend([atm_line, interp_line, kb_line, cq_line]);
    lines
}

/// Runs every suite. `rejecting` supplies the reference rejecting machine
/// for the oracle checks; `max_unit_depth` bounds the unit suite.
pub fn run_all(accepting: &Atm, rejecting: &Atm, max_unit_depth: u32) -> Vec<CheckLine> {
    let mut lines = criterion_units(max_unit_depth);
    lines.extend(criterion_config_trees(accepting));
    lines.extend(criterion_enriched(accepting));
    lines.extend(criterion_homomorphisms(accepting));
    lines.extend(criterion_match_sets(accepting));
    lines.extend(criterion_dichotomy(accepting, rejecting));
    lines.extend(criterion_polynomiality(accepting));
    lines.extend(criterion_determinism(accepting));
    lines
}

/// The full suite over the built-in reference machines.
pub fn run_default() -> Vec<CheckLine> {
    run_all(&tiny_acceptor(), &tiny_rejector(), 3)
}
