//! Builders for the intended models: configuration units, configuration
//! trees, enriched configuration trees and quasi-computation trees.
//!
//! Tree nodes are binary address words; the word read left to right is the
//! node's address with the most significant bit first. A quasi-computation
//! tree element is `"{path}#{word}"` where `path` addresses the component
//! tree (existential steps contribute `0`) and `word` the node inside it.

use thiserror::Error;

use crate::atm::{run_violation, Atm, Branch, Configuration, RunTree, Transition};
use crate::dl::Interpretation;
use crate::names;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("unit depth must be at least 1")]
    UnitDepthZero,
    #[error("malformed configuration: {0}")]
    BadConfiguration(String),
    #[error("origin transition targets {expected} but the configuration is in {found}")]
    StateMismatch { expected: String, found: String },
    #[error("previous head position {0} is off the tape")]
    PreviousHeadOffTape(i64),
    #[error("written cell {cell} should carry {expected} per the origin transition")]
    WrittenLetterMismatch { cell: usize, expected: u8 },
    #[error("Init origin requires the initial configuration, got {0}")]
    InitOriginNotInitial(String),
    #[error("not a valid quasi-run: {0}")]
    InvalidQuasiRun(String),
    #[error("rejecting state present at node '{0}'")]
    RejectingStatePresent(String),
}

/// How an enriched configuration tree was reached: either it is the initial
/// tree, or it was produced by a transition taken on the given branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Init,
    Step {
        transition: Transition,
        branch: Branch,
    },
}

/// The binary word of length `width` encoding `value`, most significant bit
/// first.
pub fn address_word(value: usize, width: u32) -> String {
    (0..width)
        .rev()
        .map(|i| if value & (1 << i) != 0 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`address_word`].
pub fn address_value(word: &str) -> usize {
    word.chars()
        .fold(0, |acc, c| (acc << 1) | usize::from(c == '1'))
}

fn bit_at(word: &str, i: u32) -> bool {
    word.as_bytes()[(i - 1) as usize] == b'1'
}

/// An n-configuration unit with the root placed in `L`.
pub fn build_unit(n: u32) -> Result<Interpretation, WitnessError> {
    build_unit_rooted(n, true)
}

/// An n-configuration unit: the full binary tree of words of length at most
/// `n`, with level, address-bit and left/right decorations, self-loops on
/// every node for every `ell_i`/`r_i`, and `next`-loops on the leaves only.
/// The root's `L`/`R` membership is the caller's choice.
pub fn build_unit_rooted(n: u32, root_in_l: bool) -> Result<Interpretation, WitnessError> {
    if n == 0 {
        return Err(WitnessError::UnitDepthZero);
    }
    let mut interp = Interpretation::new();
    let mut words: Vec<String> = vec![String::new()];
    for len in 1..=n {
        let mut next = Vec::new();
        for w in words.iter().filter(|w| w.len() + 1 == len as usize) {
            next.push(format!("{w}0"));
            next.push(format!("{w}1"));
        }
        words.extend(next);
    }

    for w in &words {
        interp.add_element(w.clone());
    }
    for w in &words {
        let len = w.len() as u32;
        interp.add_to_concept(names::lvl(len), w.clone());
        for i in 1..=len {
            interp.add_to_concept(names::ad(i, bit_at(w, i)), w.clone());
        }
        let left = if w.is_empty() {
            root_in_l
        } else {
            w.ends_with('0')
        };
        interp.add_to_concept(if left { names::L } else { names::R }, w.clone());
        for i in 1..=n {
            interp.add_role_pair(names::ell(i), w.clone(), w.clone());
            interp.add_role_pair(names::rr(i), w.clone(), w.clone());
        }
        if len < n {
            interp.add_role_pair(names::ell(len + 1), w.clone(), format!("{w}0"));
            interp.add_role_pair(names::rr(len + 1), w.clone(), format!("{w}1"));
        }
        if len == n {
            interp.add_role_pair(names::NEXT, w.clone(), w.clone());
        }
    }
    Ok(interp)
}

fn check_configuration(atm: &Atm, cfg: &Configuration) -> Result<(), WitnessError> {
    if cfg.tape.len() != atm.tape_len() || cfg.head >= atm.tape_len() {
        return Err(WitnessError::BadConfiguration(cfg.to_string()));
    }
    if !atm.states().contains(&cfg.state) {
        return Err(WitnessError::BadConfiguration(cfg.to_string()));
    }
    Ok(())
}

fn decorate_config(interp: &mut Interpretation, atm: &Atm, cfg: &Configuration) {
    let n = atm.n();
    interp.add_to_concept(names::st(&cfg.state), "");
    let w_head = address_word(cfg.head, n);
    for k in 0..atm.tape_len() {
        let w = address_word(k, n);
        let a = cfg.tape[k];
        interp.add_to_concept(names::letter(a), w.clone());
        interp.add_to_concept(names::cell(a), format!("{w}0"));
        interp.add_to_concept(names::cell(!a), format!("{w}1"));
        let here = if w == w_head {
            names::HD_HERE
        } else {
            names::NO_HD_HERE
        };
        interp.add_to_concept(here, w);
    }
    // Head-address bits live on level 0 and on every level-N node.
    for i in 1..=n {
        let b = bit_at(&w_head, i);
        interp.add_to_concept(names::hd_pos(i, b), "");
        for k in 0..atm.tape_len() {
            interp.add_to_concept(names::hd_pos(i, b), address_word(k, n));
        }
    }
    interp.add_to_concept(names::hd_let(cfg.letter_under_head()), "");
}

/// A configuration tree: an `(N+1)`-configuration unit decorated with the
/// state, the tape letters (both directly and via the `zz0`/`zz1` children),
/// the head marker and the head address broadcast.
pub fn build_config_tree(atm: &Atm, cfg: &Configuration) -> Result<Interpretation, WitnessError> {
    build_config_tree_rooted(atm, cfg, true)
}

fn build_config_tree_rooted(
    atm: &Atm,
    cfg: &Configuration,
    root_in_l: bool,
) -> Result<Interpretation, WitnessError> {
    check_configuration(atm, cfg)?;
    let mut interp = build_unit_rooted(atm.n() + 1, root_in_l)?;
    decorate_config(&mut interp, atm, cfg);
    Ok(interp)
}

fn decorate_enriched(
    interp: &mut Interpretation,
    atm: &Atm,
    cfg: &Configuration,
    ptr_concept: &str,
    phd: usize,
) {
    let n = atm.n();
    interp.add_to_concept(ptr_concept.to_string(), "");
    let w_phd = address_word(phd, n);
    for k in 0..atm.tape_len() {
        let w = address_word(k, n);
        let here = if w == w_phd {
            names::P_HD_HERE
        } else {
            names::NO_P_HD_HERE
        };
        interp.add_to_concept(here, w.clone());
        let above = if w == w_phd {
            names::P_HD_ABV
        } else {
            names::NO_P_HD_ABV
        };
        interp.add_to_concept(above, format!("{w}0"));
        interp.add_to_concept(above, format!("{w}1"));
    }
    for i in 1..=n {
        let b = bit_at(&w_phd, i);
        interp.add_to_concept(names::p_hd_pos(i, b), "");
        for k in 0..atm.tape_len() {
            interp.add_to_concept(names::p_hd_pos(i, b), address_word(k, n));
        }
    }
    interp.add_to_concept(names::p_hd_let(cfg.tape[phd]), "");
}

fn origin_data(
    atm: &Atm,
    cfg: &Configuration,
    origin: &Origin,
) -> Result<(String, usize), WitnessError> {
    match origin {
        Origin::Init => {
            if *cfg != atm.initial_configuration() {
                return Err(WitnessError::InitOriginNotInitial(cfg.to_string()));
            }
            Ok((names::INIT.to_string(), 0))
        }
        Origin::Step { transition, .. } => {
            if cfg.state != transition.target {
                return Err(WitnessError::StateMismatch {
                    expected: transition.target.clone(),
                    found: cfg.state.clone(),
                });
            }
            let phd = cfg.head as i64 - transition.dir.offset();
            if phd < 0 || phd >= atm.tape_len() as i64 {
                return Err(WitnessError::PreviousHeadOffTape(phd));
            }
            let phd = phd as usize;
            if cfg.tape[phd] != transition.write {
                return Err(WitnessError::WrittenLetterMismatch {
                    cell: phd,
                    expected: u8::from(transition.write),
                });
            }
            Ok((names::pr_tr(transition), phd))
        }
    }
}

/// An enriched configuration tree: a configuration tree additionally carrying
/// the origin marker (`Init` or the generating transition) plus the previous
/// head position, its broadcast, the `PHdAbv`/`NoPHdAbv` split one level
/// below, and the letter currently stored at the previous head position.
pub fn build_enriched_tree(
    atm: &Atm,
    cfg: &Configuration,
    origin: &Origin,
) -> Result<Interpretation, WitnessError> {
    build_enriched_tree_rooted(atm, cfg, origin, true)
}

fn build_enriched_tree_rooted(
    atm: &Atm,
    cfg: &Configuration,
    origin: &Origin,
    root_in_l: bool,
) -> Result<Interpretation, WitnessError> {
    let (ptr_concept, phd) = origin_data(atm, cfg, origin)?;
    let mut interp = build_config_tree_rooted(atm, cfg, root_in_l)?;
    decorate_enriched(&mut interp, atm, cfg, &ptr_concept, phd);
    Ok(interp)
}

/// Like [`build_enriched_tree`] but with the recorded previous head position
/// overridden, bypassing the consistency checks. Only used to manufacture
/// counterexamples in tests and the verification suites.
pub(crate) fn build_enriched_tree_with_phd(
    atm: &Atm,
    cfg: &Configuration,
    origin: &Origin,
    phd: usize,
) -> Result<Interpretation, WitnessError> {
    let ptr_concept = match origin {
        Origin::Init => names::INIT.to_string(),
        Origin::Step { transition, .. } => {
            if cfg.state != transition.target {
                return Err(WitnessError::StateMismatch {
                    expected: transition.target.clone(),
                    found: cfg.state.clone(),
                });
            }
            names::pr_tr(transition)
        }
    };
    let mut interp = build_config_tree_rooted(atm, cfg, true)?;
    decorate_enriched(&mut interp, atm, cfg, &ptr_concept, phd);
    Ok(interp)
}

fn prefix_component(target: &mut Interpretation, component: &Interpretation, path: &str) {
    let id = |w: &str| format!("{path}#{w}");
    for e in component.domain() {
        target.add_element(id(e));
    }
    let names: Vec<String> = component.concept_names().cloned().collect();
    for c in names {
        for e in component.concept_ext(&c) {
            target.add_to_concept(c.clone(), id(&e));
        }
    }
    let roles: Vec<String> = component.role_names().cloned().collect();
    for r in roles {
        for (a, b) in component.role_ext(&r) {
            target.add_role_pair(r.clone(), id(&a), id(&b));
        }
    }
}

/// A quasi-computation tree: the disjoint union of one enriched configuration
/// tree per quasi-run node, with `next` edges from each component root to the
/// roots of its children (leaf `next`-loops stay inside the components), the
/// global root marked `Init` and mapped from the individual `a`.
///
/// Component roots are `L` unless their path ends in `1` (the second branch
/// of a universal node). No role other than `next` crosses components.
pub fn build_quasi_computation_tree(
    atm: &Atm,
    run: &RunTree,
) -> Result<Interpretation, WitnessError> {
    if let Some(v) = run_violation(atm, run, false) {
        return Err(WitnessError::InvalidQuasiRun(v));
    }
    for (path, node) in run.nodes() {
        if node.config.state == atm.rejecting_state() {
            return Err(WitnessError::RejectingStatePresent(path.clone()));
        }
    }

    let mut out = Interpretation::new();
    for (path, cfg, origin) in run_origins(atm, run) {
        let root_in_l = !path.ends_with('1');
        let component = build_enriched_tree_rooted(atm, &cfg, &origin, root_in_l)?;
        prefix_component(&mut out, &component, &path);
    }
    for (path, node) in run.nodes() {
        for i in 0..node.children.len() {
            out.add_role_pair(names::NEXT, format!("{path}#"), format!("{path}{i}#"));
        }
    }
    out.set_individual(names::INIT_INDIVIDUAL, "#");
    Ok(out)
}

/// Per quasi-run node, in preorder: its path, its configuration and the
/// origin of its enriched configuration tree. The origin transition is the
/// branch-tagged transition read off the parent's current tape, so fault
/// injections upstream are reflected here.
pub fn run_origins(atm: &Atm, run: &RunTree) -> Vec<(String, Configuration, Origin)> {
    run.nodes()
        .into_iter()
        .map(|(path, node)| {
            let origin = if path.is_empty() {
                Origin::Init
            } else {
                let parent = run
                    .node_at(&path[..path.len() - 1])
                    .expect("parent of a listed node");
                let child_idx = (path.as_bytes()[path.len() - 1] - b'0') as usize;
                let branch = parent.ordered_children()[child_idx].branch;
                let transition = atm
                    .transition(
                        &parent.config.state,
                        parent.config.letter_under_head(),
                        branch,
                    )
                    .expect("valid quasi-run")
                    .clone();
                Origin::Step { transition, branch }
            };
            (path, node.config.clone(), origin)
        })
        .collect()
}

/// Splits a quasi-computation tree element into its component path and
/// in-component word.
pub fn split_element(id: &str) -> Option<(&str, &str)> {
    id.split_once('#')
}
