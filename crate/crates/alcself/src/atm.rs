//! Alternating Turing machines over the binary alphabet with a tape of
//! length `2^n`, together with configurations, (quasi-)successor steps,
//! (quasi-)run trees and a desk-scale acceptance oracle.
//!
//! Machines are normalised: every non-final state has exactly two outgoing
//! transitions per letter, transitions strictly alternate between existential
//! and universal states, and the initial state is universal. [`RawAtm::validate`]
//! is the only way to obtain an [`Atm`], so downstream code can rely on these
//! invariants.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Head movement of a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn offset(self) -> i64 {
        match self {
            Dir::Left => -1,
            Dir::Right => 1,
        }
    }

    pub fn signed_str(self) -> &'static str {
        match self {
            Dir::Left => "-1",
            Dir::Right => "+1",
        }
    }

    pub fn from_offset(d: i64) -> Option<Dir> {
        match d {
            -1 => Some(Dir::Left),
            1 => Some(Dir::Right),
            _ => None,
        }
    }
}

/// Which of the two transitions available at a `(state, letter)` pair was
/// taken. The pair is ordered lexicographically by `(write, target, dir)`
/// under the machine's state order, `First` being the smaller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    First,
    Second,
}

impl Branch {
    pub fn index(self) -> usize {
        match self {
            Branch::First => 0,
            Branch::Second => 1,
        }
    }

    /// Path letter contributed to a tree address: first child `0`, second `1`.
    pub fn path_char(self) -> char {
        match self {
            Branch::First => '0',
            Branch::Second => '1',
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::First => write!(f, "first"),
            Branch::Second => write!(f, "second"),
        }
    }
}

/// A single transition `(s, a, b, s', d)`: in state `s` reading `a`, write
/// `b`, switch to `s'` and move the head by `d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transition {
    pub source: String,
    pub read: bool,
    pub write: bool,
    pub target: String,
    pub dir: Dir,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{},{})",
            self.source,
            u8::from(self.read),
            u8::from(self.write),
            self.target,
            self.dir.signed_str()
        )
    }
}

/// A machine configuration: tape contents, current state and head position.
/// The tape always has length `2^n` for the owning machine's `n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub tape: Vec<bool>,
    pub state: String,
    pub head: usize,
}

impl Configuration {
    pub fn letter_under_head(&self) -> bool {
        self.tape[self.head]
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tape: String = self
            .tape
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        write!(f, "[{} {}@{}]", tape, self.state, self.head)
    }
}

/// An unvalidated machine description, as read from a file or built by hand.
#[derive(Debug, Clone, Default)]
pub struct RawAtm {
    pub n: u32,
    pub states: Vec<String>,
    pub existential: Vec<String>,
    pub initial: String,
    pub accepting: String,
    pub rejecting: String,
    pub delta: Vec<Transition>,
}

/// A violation of the machine normal form, reported by [`RawAtm::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtmViolation {
    #[error("tape-size exponent must be at least 1")]
    TapeExponentZero,
    #[error("state list is empty")]
    NoStates,
    #[error("duplicate state id {0:?}")]
    DuplicateState(String),
    #[error("unknown state {state:?} referenced by {context}")]
    UnknownState { state: String, context: String },
    #[error("distinguished-state clash: {0}")]
    DistinguishedClash(String),
    #[error("initial state must be universal")]
    InitialExistential,
    #[error("fan-out != 2 at ({state},{letter}): found {found}")]
    FanOut {
        state: String,
        letter: u8,
        found: usize,
    },
    #[error("final state {state} has {found} outgoing transitions at letter {letter}")]
    FinalHasTransitions {
        state: String,
        letter: u8,
        found: usize,
    },
    #[error("alternation violation in {0}")]
    Alternation(String),
}

/// Runtime errors of the simulation operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtmError {
    #[error("configuration {0} is final and has no successors")]
    FinalConfiguration(String),
    #[error("off-tape move: {0} via {1}")]
    OffTapeMove(String, String),
    #[error("halting assumption violated: no final state within {0} steps")]
    HaltingBudget(u64),
    #[error("exploration budget exceeded: more than {0} distinct configurations")]
    ConfigBudget(usize),
    #[error("quasi-successor enumeration over {0} free cells exceeds the desk-scale budget")]
    QuasiEnumerationTooLarge(u64),
}

/// A validated alternating Turing machine.
///
/// The state list keeps its declaration order; that order is the total state
/// order used when splitting `delta(s, a)` into its first and second element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atm {
    n: u32,
    states: Vec<String>,
    existential: BTreeSet<String>,
    initial: String,
    accepting: String,
    rejecting: String,
    delta: Vec<Transition>,
}

impl RawAtm {
    /// Checks every normal-form invariant and returns the validated machine,
    /// or the full list of violations. Duplicate transition tuples are
    /// collapsed before the fan-out check.
    pub fn validate(&self) -> Result<Atm, Vec<AtmViolation>> {
        let mut violations = Vec::new();

        if self.n == 0 {
            violations.push(AtmViolation::TapeExponentZero);
        }
        if self.states.is_empty() {
            violations.push(AtmViolation::NoStates);
        }
        let mut seen = BTreeSet::new();
        for s in &self.states {
            if !seen.insert(s.clone()) {
                violations.push(AtmViolation::DuplicateState(s.clone()));
            }
        }
        let known = |s: &String| seen.contains(s);

        for (state, context) in [
            (&self.initial, "the initial-state field"),
            (&self.accepting, "the accepting-state field"),
            (&self.rejecting, "the rejecting-state field"),
        ] {
            if !known(state) {
                violations.push(AtmViolation::UnknownState {
                    state: state.clone(),
                    context: context.to_string(),
                });
            }
        }
        for s in &self.existential {
            if !known(s) {
                violations.push(AtmViolation::UnknownState {
                    state: s.clone(),
                    context: "the existential set".to_string(),
                });
            }
        }
        if self.initial == self.accepting || self.initial == self.rejecting {
            violations.push(AtmViolation::DistinguishedClash(format!(
                "initial state {} equals a final state",
                self.initial
            )));
        }
        if self.accepting == self.rejecting {
            violations.push(AtmViolation::DistinguishedClash(format!(
                "accepting and rejecting states coincide ({})",
                self.accepting
            )));
        }

        let existential: BTreeSet<String> = self.existential.iter().cloned().collect();
        if existential.contains(&self.initial) {
            violations.push(AtmViolation::InitialExistential);
        }

        // Deduplicate and order the transition table canonically.
        let state_index: HashMap<&str, usize> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let key = |t: &Transition| {
            (
                state_index
                    .get(t.source.as_str())
                    .copied()
                    .unwrap_or(usize::MAX),
                t.read,
                t.write,
                state_index
                    .get(t.target.as_str())
                    .copied()
                    .unwrap_or(usize::MAX),
                t.dir,
            )
        };
        let mut delta: Vec<Transition> = self.delta.clone();
        delta.sort_by_key(&key);
        delta.dedup();

        for t in &delta {
            for (state, context) in [
                (&t.source, format!("transition {t} (source)")),
                (&t.target, format!("transition {t} (target)")),
            ] {
                if !known(state) {
                    violations.push(AtmViolation::UnknownState {
                        state: state.clone(),
                        context,
                    });
                }
            }
            if known(&t.source) && known(&t.target) {
                let src_exist = existential.contains(&t.source);
                let tgt_exist = existential.contains(&t.target);
                if src_exist == tgt_exist {
                    violations.push(AtmViolation::Alternation(t.to_string()));
                }
            }
        }

        for s in &self.states {
            let is_final = s == &self.accepting || s == &self.rejecting;
            for letter in [false, true] {
                let found = delta
                    .iter()
                    .filter(|t| &t.source == s && t.read == letter)
                    .count();
                if is_final {
                    if found != 0 {
                        violations.push(AtmViolation::FinalHasTransitions {
                            state: s.clone(),
                            letter: u8::from(letter),
                            found,
                        });
                    }
                } else if found != 2 {
                    violations.push(AtmViolation::FanOut {
                        state: s.clone(),
                        letter: u8::from(letter),
                        found,
                    });
                }
            }
        }

        if violations.is_empty() {
            Ok(Atm {
                n: self.n,
                states: self.states.clone(),
                existential,
                initial: self.initial.clone(),
                accepting: self.accepting.clone(),
                rejecting: self.rejecting.clone(),
                delta,
            })
        } else {
            Err(violations)
        }
    }
}

impl Atm {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Tape length `2^n`.
    pub fn tape_len(&self) -> usize {
        1usize << self.n
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn existential_states(&self) -> &BTreeSet<String> {
        &self.existential
    }

    pub fn initial_state(&self) -> &str {
        &self.initial
    }

    pub fn accepting_state(&self) -> &str {
        &self.accepting
    }

    pub fn rejecting_state(&self) -> &str {
        &self.rejecting
    }

    /// The transition table in its canonical order.
    pub fn delta(&self) -> &[Transition] {
        &self.delta
    }

    pub fn is_existential(&self, state: &str) -> bool {
        self.existential.contains(state)
    }

    pub fn is_final(&self, state: &str) -> bool {
        state == self.accepting || state == self.rejecting
    }

    /// Returns a copy of this machine with a different tape-size exponent.
    /// The transition table is unaffected, so validity is preserved.
    pub fn with_tape_exponent(&self, n: u32) -> Atm {
        assert!(n >= 1, "tape-size exponent must be at least 1");
        let mut atm = self.clone();
        atm.n = n;
        atm
    }

    /// The two transitions available at `(state, letter)`, in branch order.
    /// Empty for final states.
    pub fn transitions_at(&self, state: &str, letter: bool) -> Vec<&Transition> {
        self.delta
            .iter()
            .filter(|t| t.source == state && t.read == letter)
            .collect()
    }

    /// `delta_1` or `delta_2` at `(state, letter)`, per the branch tag.
    pub fn transition(&self, state: &str, letter: bool, branch: Branch) -> Option<&Transition> {
        self.transitions_at(state, letter)
            .get(branch.index())
            .copied()
    }

    /// The initial configuration: initial state, all-zero tape, head on cell 0.
    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            tape: vec![false; self.tape_len()],
            state: self.initial.clone(),
            head: 0,
        }
    }

    fn apply(&self, cfg: &Configuration, t: &Transition) -> Result<Configuration, AtmError> {
        let head = cfg.head as i64 + t.dir.offset();
        if head < 0 || head >= self.tape_len() as i64 {
            return Err(AtmError::OffTapeMove(cfg.to_string(), t.to_string()));
        }
        let mut tape = cfg.tape.clone();
        tape[cfg.head] = t.write;
        Ok(Configuration {
            tape,
            state: t.target.clone(),
            head: head as usize,
        })
    }

    /// Both successor configurations of a non-final configuration, in branch
    /// order.
    pub fn successors(
        &self,
        cfg: &Configuration,
    ) -> Result<[(Branch, Configuration); 2], AtmError> {
        if self.is_final(&cfg.state) {
            return Err(AtmError::FinalConfiguration(cfg.to_string()));
        }
        let ts = self.transitions_at(&cfg.state, cfg.letter_under_head());
        debug_assert_eq!(ts.len(), 2);
        Ok([
            (Branch::First, self.apply(cfg, ts[0])?),
            (Branch::Second, self.apply(cfg, ts[1])?),
        ])
    }

    /// All quasi-successors: configurations that agree with a successor on
    /// state, head and the written cell, with every untouched cell free.
    /// Desk scale only; the enumeration has `2 * 2^(2^n - 1)` entries before
    /// deduplication.
    pub fn quasi_successors(
        &self,
        cfg: &Configuration,
    ) -> Result<BTreeSet<(Branch, Configuration)>, AtmError> {
        let free_cells = self.tape_len() as u64 - 1;
        if free_cells > 16 {
            return Err(AtmError::QuasiEnumerationTooLarge(free_cells));
        }
        let mut out = BTreeSet::new();
        for (branch, succ) in self.successors(cfg)? {
            let untouched: Vec<usize> = (0..self.tape_len()).filter(|&i| i != cfg.head).collect();
            for mask in 0u64..(1u64 << untouched.len()) {
                let mut variant = succ.clone();
                for (k, &i) in untouched.iter().enumerate() {
                    variant.tape[i] = mask & (1 << k) != 0;
                }
                out.insert((branch, variant));
            }
        }
        Ok(out)
    }
}

/// Budget for the acceptance recursion. `max_depth` bounds the length of any
/// explored configuration sequence and defaults to `2^(2^n)`; exceeding it
/// means the halting assumption does not hold for the machine.
#[derive(Debug, Clone)]
pub struct OracleBudget {
    pub max_depth: u64,
    pub max_configs: usize,
}

impl OracleBudget {
    pub fn for_machine(atm: &Atm) -> OracleBudget {
        let exp = 1u32 << atm.n.min(6);
        let max_depth = if exp >= 63 { u64::MAX } else { 1u64 << exp };
        OracleBudget {
            max_depth,
            max_configs: 1 << 22,
        }
    }
}

struct OracleSearch<'a> {
    atm: &'a Atm,
    budget: &'a OracleBudget,
    memo: HashMap<Configuration, bool>,
}

impl OracleSearch<'_> {
    fn accepts(&mut self, cfg: &Configuration, depth: u64) -> Result<bool, AtmError> {
        if self.atm.is_final(&cfg.state) {
            return Ok(cfg.state == self.atm.accepting);
        }
        if depth >= self.budget.max_depth {
            return Err(AtmError::HaltingBudget(self.budget.max_depth));
        }
        if let Some(&v) = self.memo.get(cfg) {
            return Ok(v);
        }
        if self.memo.len() >= self.budget.max_configs {
            return Err(AtmError::ConfigBudget(self.budget.max_configs));
        }
        let [(_, first), (_, second)] = self.atm.successors(cfg)?;
        let verdict = if self.atm.is_existential(&cfg.state) {
            self.accepts(&first, depth + 1)? || self.accepts(&second, depth + 1)?
        } else {
            self.accepts(&first, depth + 1)? && self.accepts(&second, depth + 1)?
        };
        self.memo.insert(cfg.clone(), verdict);
        Ok(verdict)
    }

    fn witness(&mut self, cfg: &Configuration, depth: u64) -> Result<Option<RunTree>, AtmError> {
        if self.atm.is_final(&cfg.state) {
            return Ok((cfg.state == self.atm.accepting).then(|| RunTree {
                config: cfg.clone(),
                children: Vec::new(),
            }));
        }
        if depth >= self.budget.max_depth {
            return Err(AtmError::HaltingBudget(self.budget.max_depth));
        }
        let [(b1, first), (b2, second)] = self.atm.successors(cfg)?;
        let children = if self.atm.is_existential(&cfg.state) {
            // Prefer the first branch so witnesses are deterministic.
            let mut picked = None;
            for (branch, succ) in [(b1, first), (b2, second)] {
                if self.accepts(&succ, depth + 1)? {
                    let sub = self
                        .witness(&succ, depth + 1)?
                        .expect("oracle said accepting");
                    picked = Some(vec![RunChild { branch, tree: sub }]);
                    break;
                }
            }
            match picked {
                Some(c) => c,
                None => return Ok(None),
            }
        } else {
            let mut both = Vec::with_capacity(2);
            for (branch, succ) in [(b1, first), (b2, second)] {
                match self.witness(&succ, depth + 1)? {
                    Some(sub) => both.push(RunChild { branch, tree: sub }),
                    None => return Ok(None),
                }
            }
            both
        };
        Ok(Some(RunTree {
            config: cfg.clone(),
            children,
        }))
    }
}

/// Decides acceptance by alternating recursion with memoisation.
pub fn is_accepting(atm: &Atm) -> Result<bool, AtmError> {
    is_accepting_with(atm, &OracleBudget::for_machine(atm))
}

pub fn is_accepting_with(atm: &Atm, budget: &OracleBudget) -> Result<bool, AtmError> {
    let mut search = OracleSearch {
        atm,
        budget,
        memo: HashMap::new(),
    };
    search.accepts(&atm.initial_configuration(), 0)
}

/// Produces an accepting run tree, or `None` exactly when [`is_accepting`]
/// answers `false`.
pub fn find_accepting_run(atm: &Atm) -> Result<Option<RunTree>, AtmError> {
    find_accepting_run_with(atm, &OracleBudget::for_machine(atm))
}

pub fn find_accepting_run_with(
    atm: &Atm,
    budget: &OracleBudget,
) -> Result<Option<RunTree>, AtmError> {
    let mut search = OracleSearch {
        atm,
        budget,
        memo: HashMap::new(),
    };
    search.witness(&atm.initial_configuration(), 0)
}

/// A (quasi-)run tree. Children carry the branch tag that generated them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTree {
    pub config: Configuration,
    pub children: Vec<RunChild>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunChild {
    pub branch: Branch,
    pub tree: RunTree,
}

impl RunTree {
    pub fn leaf(config: Configuration) -> RunTree {
        RunTree {
            config,
            children: Vec::new(),
        }
    }

    /// Children in branch order (first, then second), regardless of how they
    /// were inserted.
    pub fn ordered_children(&self) -> Vec<&RunChild> {
        let mut cs: Vec<&RunChild> = self.children.iter().collect();
        cs.sort_by_key(|c| c.branch);
        cs
    }

    /// Node addressed by a path over `{'0','1'}` (branch-order child index).
    pub fn node_at(&self, path: &str) -> Option<&RunTree> {
        let mut node = self;
        for c in path.chars() {
            let idx = match c {
                '0' => 0,
                '1' => 1,
                _ => return None,
            };
            node = &node.ordered_children().get(idx)?.tree;
        }
        Some(node)
    }

    fn node_at_mut(&mut self, path: &str) -> Option<&mut RunTree> {
        let mut node = self;
        for c in path.chars() {
            let idx = match c {
                '0' => 0,
                '1' => 1,
                _ => return None,
            };
            let mut order: Vec<usize> = (0..node.children.len()).collect();
            order.sort_by_key(|&i| node.children[i].branch);
            let real = *order.get(idx)?;
            node = &mut node.children[real].tree;
        }
        Some(node)
    }

    /// All `(path, node)` pairs in preorder, paths over `{'0','1'}`.
    pub fn nodes(&self) -> Vec<(String, &RunTree)> {
        let mut out = Vec::new();
        fn walk<'a>(node: &'a RunTree, path: String, out: &mut Vec<(String, &'a RunTree)>) {
            out.push((path.clone(), node));
            for (i, child) in node.ordered_children().into_iter().enumerate() {
                walk(&child.tree, format!("{path}{i}"), out);
            }
        }
        walk(self, String::new(), &mut out);
        out
    }
}

/// Checks the (quasi-)run conditions and reports the first violation, or
/// `None` if the tree is valid. With `strict` the children must be proper
/// successors; otherwise quasi-successors suffice.
pub fn run_violation(atm: &Atm, tree: &RunTree, strict: bool) -> Option<String> {
    if tree.config != atm.initial_configuration() {
        return Some(format!(
            "root is {} instead of the initial configuration",
            tree.config
        ));
    }
    check_node(atm, tree, strict, "")
}

pub fn is_valid_run_tree(atm: &Atm, tree: &RunTree, strict: bool) -> bool {
    run_violation(atm, tree, strict).is_none()
}

fn check_node(atm: &Atm, node: &RunTree, strict: bool, path: &str) -> Option<String> {
    let cfg = &node.config;
    if cfg.tape.len() != atm.tape_len() || cfg.head >= atm.tape_len() {
        return Some(format!("malformed configuration at node '{path}'"));
    }
    if atm.is_final(&cfg.state) {
        if !node.children.is_empty() {
            return Some(format!("final node '{path}' has children"));
        }
        return None;
    }
    let tags: BTreeSet<Branch> = node.children.iter().map(|c| c.branch).collect();
    if atm.is_existential(&cfg.state) {
        if node.children.len() != 1 {
            return Some(format!(
                "fan-out: existential node '{path}' has {} children",
                node.children.len()
            ));
        }
    } else if node.children.len() != 2 || tags.len() != 2 {
        return Some(format!(
            "fan-out: universal node '{path}' needs one child per branch tag"
        ));
    }
    for (i, child) in node.ordered_children().into_iter().enumerate() {
        let child_path = format!("{path}{i}");
        let t = match atm.transition(&cfg.state, cfg.letter_under_head(), child.branch) {
            Some(t) => t,
            None => return Some(format!("no transition for node '{child_path}'")),
        };
        let c = &child.tree.config;
        if c.state != t.target {
            return Some(format!(
                "node '{child_path}': state {} does not match transition {t}",
                c.state
            ));
        }
        let expected_head = cfg.head as i64 + t.dir.offset();
        if expected_head < 0 || expected_head >= atm.tape_len() as i64 {
            return Some(format!("node '{child_path}': off-tape move via {t}"));
        }
        if c.head as i64 != expected_head {
            return Some(format!(
                "node '{child_path}': head {} does not match transition {t}",
                c.head
            ));
        }
        if c.tape.len() != atm.tape_len() {
            return Some(format!("node '{child_path}': wrong tape length"));
        }
        if c.tape[cfg.head] != t.write {
            return Some(format!(
                "node '{child_path}': written cell {} does not carry {}",
                cfg.head,
                u8::from(t.write)
            ));
        }
        if strict {
            for i in 0..atm.tape_len() {
                if i != cfg.head && c.tape[i] != cfg.tape[i] {
                    return Some(format!("node '{child_path}': untouched cell {i} changed"));
                }
            }
        }
        if let Some(v) = check_node(atm, &child.tree, strict, &child_path) {
            return Some(v);
        }
    }
    None
}

/// The smallest machine exercising both quantifier kinds and both head
/// directions: a universal initial state branching into an existential state
/// that always reaches the accepting state.
pub fn tiny_acceptor() -> Atm {
    reference_machine("s_acc")
}

/// Same shape as [`tiny_acceptor`], with the existential state's rows
/// retargeted to the rejecting state.
pub fn tiny_rejector() -> Atm {
    reference_machine("s_rej")
}

fn reference_machine(e1_target: &str) -> Atm {
    let t = |source: &str, read: bool, write: bool, target: &str, dir: Dir| Transition {
        source: source.to_string(),
        read,
        write,
        target: target.to_string(),
        dir,
    };
    let mut delta = Vec::new();
    for read in [false, true] {
        delta.push(t("s_init", read, false, "e1", Dir::Right));
        delta.push(t("s_init", read, true, "e1", Dir::Right));
        delta.push(t("e1", read, false, e1_target, Dir::Left));
        delta.push(t("e1", read, true, e1_target, Dir::Left));
    }
    RawAtm {
        n: 1,
        states: vec![
            "s_init".to_string(),
            "e1".to_string(),
            "s_acc".to_string(),
            "s_rej".to_string(),
        ],
        existential: vec!["e1".to_string()],
        initial: "s_init".to_string(),
        accepting: "s_acc".to_string(),
        rejecting: "s_rej".to_string(),
        delta,
    }
    .validate()
    .expect("reference machine is valid")
}

/// Flips one tape cell of a non-root node, turning a run into a quasi-run
/// that is no longer a proper run. The targeted cell must differ from the
/// cell written by the node's generating transition.
pub fn inject_tape_fault(
    atm: &Atm,
    tree: &RunTree,
    node_path: &str,
    cell: usize,
) -> Result<RunTree, FaultError> {
    if node_path.is_empty() {
        return Err(FaultError::RootTargeted);
    }
    let parent_path = &node_path[..node_path.len() - 1];
    let parent = tree
        .node_at(parent_path)
        .ok_or_else(|| FaultError::NoSuchNode(node_path.to_string()))?;
    tree.node_at(node_path)
        .ok_or_else(|| FaultError::NoSuchNode(node_path.to_string()))?;
    if cell >= atm.tape_len() {
        return Err(FaultError::CellOutOfRange(cell));
    }
    // The written cell is the parent's head position.
    if cell == parent.config.head {
        return Err(FaultError::NotUntouched(cell));
    }
    let mut out = tree.clone();
    let node = out.node_at_mut(node_path).expect("checked above");
    node.config.tape[cell] = !node.config.tape[cell];
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultError {
    #[error("cannot inject a fault at the root")]
    RootTargeted,
    #[error("no node at path {0:?}")]
    NoSuchNode(String),
    #[error("cell {0} is outside the tape")]
    CellOutOfRange(usize),
    #[error("cell {0} is not an untouched cell (it was written by the generating transition)")]
    NotUntouched(usize),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tape: &str, state: &str, head: usize) -> Configuration {
        Configuration {
            tape: tape.chars().map(|c| c == '1').collect(),
            state: state.to_string(),
            head,
        }
    }

    #[test]
    fn reference_machines_validate() {
        // Direct enumeration of the invariants on the hand-written machine.
        let atm = tiny_acceptor();
        assert_eq!(atm.tape_len(), 2);
        for s in atm.states() {
            for letter in [false, true] {
                let fan = atm.transitions_at(s, letter).len();
                if atm.is_final(s) {
                    assert_eq!(fan, 0);
                } else {
                    assert_eq!(fan, 2);
                }
            }
        }
        for t in atm.delta() {
            assert_ne!(atm.is_existential(&t.source), atm.is_existential(&t.target));
        }
        assert!(!atm.is_existential(atm.initial_state()));
        tiny_rejector();
    }

    #[test]
    fn validation_rejects_wrong_fanout() {
        let mut raw = RawAtm {
            n: 1,
            states: vec!["s_init".into(), "e1".into(), "s_acc".into(), "s_rej".into()],
            existential: vec!["e1".into()],
            initial: "s_init".into(),
            accepting: "s_acc".into(),
            rejecting: "s_rej".into(),
            delta: vec![],
        };
        // delta(s_init, 0) has one element, everything else is empty.
        raw.delta.push(Transition {
            source: "s_init".into(),
            read: false,
            write: false,
            target: "e1".into(),
            dir: Dir::Right,
        });
        let errs = raw.validate().unwrap_err();
        assert!(errs.contains(&AtmViolation::FanOut {
            state: "s_init".into(),
            letter: 0,
            found: 1
        }));
    }

    #[test]
    fn validation_rejects_existential_initial() {
        let mut raw = RawAtm::default();
        let acc = tiny_acceptor();
        raw.n = acc.n();
        raw.states = acc.states().to_vec();
        raw.existential = vec!["e1".into(), "s_init".into()];
        raw.initial = "s_init".into();
        raw.accepting = "s_acc".into();
        raw.rejecting = "s_rej".into();
        raw.delta = acc.delta().to_vec();
        let errs = raw.validate().unwrap_err();
        assert!(errs.contains(&AtmViolation::InitialExistential));
        // The retargeted rows now also break alternation, which is reported too.
        assert!(errs
            .iter()
            .any(|e| matches!(e, AtmViolation::Alternation(_))));
    }

    #[test]
    fn validation_rejects_distinguished_clash() {
        let raw = RawAtm {
            n: 1,
            states: vec!["s".into(), "t".into()],
            initial: "s".into(),
            accepting: "t".into(),
            rejecting: "t".into(),
            ..RawAtm::default()
        };
        let errs = raw.validate().unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, AtmViolation::DistinguishedClash(_))));
    }

    #[test]
    fn successors_of_initial_configuration() {
        // Hand application of the reference delta: write 0 or 1, move right.
        let atm = tiny_acceptor();
        let [(b1, c1), (b2, c2)] = atm.successors(&atm.initial_configuration()).unwrap();
        assert_eq!(b1, Branch::First);
        assert_eq!(c1, cfg("00", "e1", 1));
        assert_eq!(b2, Branch::Second);
        assert_eq!(c2, cfg("10", "e1", 1));
    }

    #[test]
    fn successors_reject_final_configuration() {
        let atm = tiny_acceptor();
        let err = atm.successors(&cfg("00", "s_acc", 0)).unwrap_err();
        assert!(matches!(err, AtmError::FinalConfiguration(_)));
    }

    #[test]
    fn successors_reject_off_tape_move() {
        // A right move at the right-most cell: head 1 on a 2-cell tape, taking
        // s_init's +1 transitions.
        let atm = tiny_acceptor();
        let err = atm.successors(&cfg("00", "s_init", 1)).unwrap_err();
        assert!(matches!(err, AtmError::OffTapeMove(_, _)));
    }

    #[test]
    fn quasi_successors_free_the_untouched_cell() {
        let atm = tiny_acceptor();
        let qs = atm.quasi_successors(&atm.initial_configuration()).unwrap();
        // Per branch: cell 0 is written, cell 1 is free, so 2 variants each.
        let first: Vec<_> = qs.iter().filter(|(b, _)| *b == Branch::First).collect();
        assert_eq!(first.len(), 2);
        assert!(first
            .iter()
            .all(|(_, c)| !c.tape[0] && c.state == "e1" && c.head == 1));
        let second: Vec<_> = qs.iter().filter(|(b, _)| *b == Branch::Second).collect();
        assert_eq!(second.len(), 2);
        assert!(second.iter().all(|(_, c)| c.tape[0]));
    }

    #[test]
    fn successors_are_quasi_successors() {
        let atm = tiny_acceptor();
        for c in [atm.initial_configuration(), cfg("01", "e1", 1)] {
            let succ = atm.successors(&c).unwrap();
            let quasi = atm.quasi_successors(&c).unwrap();
            for pair in succ {
                assert!(quasi.contains(&pair));
            }
        }
    }

    #[test]
    fn oracle_accepts_and_rejects_reference_machines() {
        // Hand trace: both existential children of the initial configuration
        // can reach s_acc, so the universal root accepts.
        assert!(is_accepting(&tiny_acceptor()).unwrap());
        assert!(!is_accepting(&tiny_rejector()).unwrap());
    }

    #[test]
    fn accepting_run_shape_for_tiny_acceptor() {
        let atm = tiny_acceptor();
        let run = find_accepting_run(&atm).unwrap().unwrap();
        assert_eq!(run.children.len(), 2);
        for child in &run.children {
            assert_eq!(child.tree.config.state, "e1");
            assert_eq!(child.tree.children.len(), 1);
            let leaf = &child.tree.children[0].tree;
            assert_eq!(leaf.config.state, "s_acc");
            assert!(leaf.children.is_empty());
        }
        assert_eq!(run.nodes().len(), 5);
        assert!(is_valid_run_tree(&atm, &run, true));
        assert!(is_valid_run_tree(&atm, &run, false));
    }

    #[test]
    fn rejector_has_no_run() {
        assert!(find_accepting_run(&tiny_rejector()).unwrap().is_none());
    }

    #[test]
    fn flipping_an_untouched_cell_is_quasi_but_not_strict() {
        let atm = tiny_acceptor();
        let run = find_accepting_run(&atm).unwrap().unwrap();
        // Cell 1 of the first-branch child is untouched (the root writes cell 0).
        let faulty = inject_tape_fault(&atm, &run, "0", 1).unwrap();
        assert!(run_violation(&atm, &faulty, true).is_some());
        assert!(run_violation(&atm, &faulty, false).is_none());
    }

    #[test]
    fn fault_injection_rejects_written_cell_and_root() {
        let atm = tiny_acceptor();
        let run = find_accepting_run(&atm).unwrap().unwrap();
        assert_eq!(
            inject_tape_fault(&atm, &run, "0", 0).unwrap_err(),
            FaultError::NotUntouched(0)
        );
        assert_eq!(
            inject_tape_fault(&atm, &run, "", 0).unwrap_err(),
            FaultError::RootTargeted
        );
    }

    #[test]
    fn universal_node_with_one_child_fails_fanout() {
        let atm = tiny_acceptor();
        let mut run = find_accepting_run(&atm).unwrap().unwrap();
        run.children.pop();
        let v = run_violation(&atm, &run, false).unwrap();
        assert!(v.contains("fan-out"), "unexpected violation: {v}");
    }

    #[test]
    fn oracle_agrees_with_run_search_on_random_machines() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut accepted = 0;
        for _ in 0..300 {
            let atm = crate::gen::random_atm(&mut rng, 2);
            match (is_accepting(&atm), find_accepting_run(&atm)) {
                (Ok(verdict), Ok(run)) => {
                    assert_eq!(verdict, run.is_some());
                    if let Some(run) = run {
                        accepted += 1;
                        assert!(is_valid_run_tree(&atm, &run, true));
                        assert!(is_valid_run_tree(&atm, &run, false));
                        for (_, node) in run.nodes() {
                            if node.children.is_empty() {
                                assert_eq!(node.config.state, *atm.accepting_state());
                            }
                        }
                    }
                }
                // Off-tape moves and halting violations must surface from
                // both entry points alike.
                (Err(a), Err(b)) => {
                    assert_eq!(std::mem::discriminant(&a), std::mem::discriminant(&b))
                }
                (a, b) => panic!("oracle {a:?} disagrees with run search {b:?}"),
            }
        }
        assert!(accepted > 5, "generator never produced accepting machines");
    }

    #[test]
    fn successors_are_quasi_successors_on_random_machines() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        for _ in 0..100 {
            let atm = crate::gen::random_atm(&mut rng, 2);
            let tape: Vec<bool> = (0..atm.tape_len()).map(|_| rng.gen_bool(0.5)).collect();
            let state = atm.states()[rng.gen_range(0..atm.states().len())].clone();
            if atm.is_final(&state) {
                continue;
            }
            let config = Configuration {
                tape,
                state,
                head: rng.gen_range(0..atm.tape_len()),
            };
            let (succ, quasi) = match (atm.successors(&config), atm.quasi_successors(&config)) {
                (Ok(s), Ok(q)) => (s, q),
                (Err(a), Err(b)) => {
                    assert_eq!(a, b);
                    continue;
                }
                (a, b) => panic!("{a:?} vs {b:?}"),
            };
            for pair in succ {
                assert!(quasi.contains(&pair));
            }
        }
    }
}
