//! ALC+Self concepts, knowledge bases, finite interpretations and a model
//! checker.
//!
//! Derived constructors (`Or`, `Forall`, `Implies`, `Bottom`) are first-class
//! AST nodes with direct semantics; property tests pin them to their
//! negation expansions. Unknown concept and role names evaluate to the empty
//! extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// An ALC+Self concept expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Name(String),
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    Exists(String, Box<Concept>),
    Forall(String, Box<Concept>),
    Implies(Box<Concept>, Box<Concept>),
    /// `∃r.Self`, true at `d` iff `(d, d)` is in the role.
    SelfLoop(String),
}

impl Concept {
    pub fn name(n: impl Into<String>) -> Concept {
        Concept::Name(n.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Concept {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Concept {
        Concept::Forall(role.into(), Box::new(c))
    }

    pub fn implies(a: Concept, b: Concept) -> Concept {
        Concept::Implies(Box::new(a), Box::new(b))
    }

    pub fn self_loop(role: impl Into<String>) -> Concept {
        Concept::SelfLoop(role.into())
    }

    /// Right-folded conjunction; `Top` for an empty list.
    pub fn and_all(items: impl IntoIterator<Item = Concept>) -> Concept {
        Self::fold(items, Concept::Top, Concept::and)
    }

    /// Right-folded disjunction; `Bottom` for an empty list.
    pub fn or_all(items: impl IntoIterator<Item = Concept>) -> Concept {
        Self::fold(items, Concept::Bottom, Concept::or)
    }

    fn fold(
        items: impl IntoIterator<Item = Concept>,
        empty: Concept,
        join: fn(Concept, Concept) -> Concept,
    ) -> Concept {
        let mut items: Vec<Concept> = items.into_iter().collect();
        match items.pop() {
            None => empty,
            Some(last) => items.into_iter().rev().fold(last, |acc, c| join(c, acc)),
        }
    }
}

/// A general concept inclusion `lhs ⊑ rhs` with an optional provenance label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gci {
    pub lhs: Concept,
    pub rhs: Concept,
    pub label: Option<String>,
}

impl Gci {
    pub fn new(lhs: Concept, rhs: Concept) -> Gci {
        Gci {
            lhs,
            rhs,
            label: None,
        }
    }

    pub fn labelled(label: impl Into<String>, lhs: Concept, rhs: Concept) -> Gci {
        Gci {
            lhs,
            rhs,
            label: Some(label.into()),
        }
    }
}

/// An ABox assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Assertion {
    Concept {
        concept: Concept,
        individual: String,
        label: Option<String>,
    },
    Role {
        role: String,
        from: String,
        to: String,
        label: Option<String>,
    },
}

impl Assertion {
    pub fn label(&self) -> Option<&str> {
        match self {
            Assertion::Concept { label, .. } | Assertion::Role { label, .. } => label.as_deref(),
        }
    }
}

/// A knowledge base. The ABox may be empty (the TBox-only reduction variant
/// relies on that).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub abox: Vec<Assertion>,
    pub tbox: Vec<Gci>,
}

impl KnowledgeBase {
    pub fn axiom_count(&self) -> usize {
        self.abox.len() + self.tbox.len()
    }
}

/// A finite interpretation: a domain of element ids plus extensions for
/// concept names, role names and individuals. Missing names denote empty
/// extensions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Interpretation {
    domain: BTreeSet<String>,
    concepts: BTreeMap<String, BTreeSet<String>>,
    roles: BTreeMap<String, BTreeSet<(String, String)>>,
    individuals: BTreeMap<String, String>,
}

impl Interpretation {
    pub fn new() -> Interpretation {
        Interpretation::default()
    }

    pub fn add_element(&mut self, id: impl Into<String>) {
        self.domain.insert(id.into());
    }

    pub fn add_to_concept(&mut self, concept: impl Into<String>, element: impl Into<String>) {
        let element = element.into();
        debug_assert!(self.domain.contains(&element), "element outside domain");
        self.concepts
            .entry(concept.into())
            .or_default()
            .insert(element);
    }

    pub fn add_role_pair(
        &mut self,
        role: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
    ) {
        let pair = (from.into(), to.into());
        debug_assert!(
            self.domain.contains(&pair.0) && self.domain.contains(&pair.1),
            "role pair outside domain"
        );
        self.roles.entry(role.into()).or_default().insert(pair);
    }

    pub fn set_individual(&mut self, name: impl Into<String>, element: impl Into<String>) {
        self.individuals.insert(name.into(), element.into());
    }

    pub fn remove_from_concept(&mut self, concept: &str, element: &str) {
        if let Some(ext) = self.concepts.get_mut(concept) {
            ext.remove(element);
        }
    }

    pub fn remove_role_pair(&mut self, role: &str, from: &str, to: &str) {
        if let Some(ext) = self.roles.get_mut(role) {
            ext.remove(&(from.to_string(), to.to_string()));
        }
    }

    pub fn domain(&self) -> &BTreeSet<String> {
        &self.domain
    }

    pub fn concept_names(&self) -> impl Iterator<Item = &String> {
        self.concepts.keys()
    }

    pub fn role_names(&self) -> impl Iterator<Item = &String> {
        self.roles.keys()
    }

    pub fn concept_ext(&self, name: &str) -> BTreeSet<String> {
        self.concepts.get(name).cloned().unwrap_or_default()
    }

    pub fn in_concept(&self, name: &str, element: &str) -> bool {
        self.concepts
            .get(name)
            .is_some_and(|ext| ext.contains(element))
    }

    pub fn role_ext(&self, name: &str) -> BTreeSet<(String, String)> {
        self.roles.get(name).cloned().unwrap_or_default()
    }

    pub fn has_role_pair(&self, role: &str, from: &str, to: &str) -> bool {
        self.roles
            .get(role)
            .is_some_and(|ext| ext.contains(&(from.to_string(), to.to_string())))
    }

    pub fn individuals(&self) -> &BTreeMap<String, String> {
        &self.individuals
    }

    pub fn individual(&self, name: &str) -> Option<&String> {
        self.individuals.get(name)
    }

    fn successors<'a>(&'a self, role: &str, from: &str) -> impl Iterator<Item = &'a String> {
        let from = from.to_string();
        self.roles
            .get(role)
            .into_iter()
            .flatten()
            .filter(move |(f, _)| *f == from)
            .map(|(_, t)| t)
    }

    /// The extension of a concept expression under this interpretation.
    pub fn eval(&self, concept: &Concept) -> BTreeSet<String> {
        match concept {
            Concept::Top => self.domain.clone(),
            Concept::Bottom => BTreeSet::new(),
            Concept::Name(n) => self.concept_ext(n),
            Concept::Not(c) => {
                let inner = self.eval(c);
                self.domain.difference(&inner).cloned().collect()
            }
            Concept::And(a, b) => {
                let ea = self.eval(a);
                let eb = self.eval(b);
                ea.intersection(&eb).cloned().collect()
            }
            Concept::Or(a, b) => {
                let ea = self.eval(a);
                let eb = self.eval(b);
                ea.union(&eb).cloned().collect()
            }
            Concept::Exists(role, c) => {
                let target = self.eval(c);
                self.domain
                    .iter()
                    .filter(|d| self.successors(role, d).any(|e| target.contains(e)))
                    .cloned()
                    .collect()
            }
            Concept::Forall(role, c) => {
                let target = self.eval(c);
                self.domain
                    .iter()
                    .filter(|d| self.successors(role, d).all(|e| target.contains(e)))
                    .cloned()
                    .collect()
            }
            Concept::Implies(a, b) => {
                let ea = self.eval(a);
                let eb = self.eval(b);
                self.domain
                    .iter()
                    .filter(|d| !ea.contains(*d) || eb.contains(*d))
                    .cloned()
                    .collect()
            }
            Concept::SelfLoop(role) => self
                .domain
                .iter()
                .filter(|d| self.has_role_pair(role, d, d))
                .cloned()
                .collect(),
        }
    }
}

/// Verdict of checking one GCI: whether it holds, and a witness element of
/// `lhs \ rhs` when it does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GciVerdict {
    pub holds: bool,
    pub counterexample: Option<String>,
}

pub fn check_gci(interp: &Interpretation, gci: &Gci) -> GciVerdict {
    let lhs = interp.eval(&gci.lhs);
    let rhs = interp.eval(&gci.rhs);
    match lhs.difference(&rhs).next() {
        None => GciVerdict {
            holds: true,
            counterexample: None,
        },
        Some(witness) => GciVerdict {
            holds: false,
            counterexample: Some(witness.clone()),
        },
    }
}

/// One row of a knowledge-base check report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub label: String,
    pub holds: bool,
    pub witness: Option<String>,
    pub error: Option<String>,
}

impl fmt::Display for AxiomVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(err) = &self.error {
            write!(f, "{}=error {}", self.label, err)
        } else if self.holds {
            write!(f, "{}=ok", self.label)
        } else if let Some(w) = &self.witness {
            write!(f, "{}=fail witness={}", self.label, w)
        } else {
            write!(f, "{}=fail", self.label)
        }
    }
}

/// Report of checking every axiom of a knowledge base, in input order
/// (ABox first, then TBox).
#[derive(Debug, Clone, Default)]
pub struct KbReport {
    pub entries: Vec<AxiomVerdict>,
}

impl KbReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds && e.error.is_none())
    }

    /// Labels of the axioms that do not hold.
    pub fn failing_labels(&self) -> BTreeSet<String> {
        self.entries
            .iter()
            .filter(|e| !e.holds || e.error.is_some())
            .map(|e| e.label.clone())
            .collect()
    }
}

pub fn check_kb(interp: &Interpretation, kb: &KnowledgeBase) -> KbReport {
    let mut entries = Vec::with_capacity(kb.axiom_count());
    for (i, assertion) in kb.abox.iter().enumerate() {
        let label = assertion
            .label()
            .map(str::to_string)
            .unwrap_or_else(|| format!("abox[{i}]"));
        let verdict = match assertion {
            Assertion::Concept {
                concept,
                individual,
                ..
            } => match interp.individual(individual) {
                None => AxiomVerdict {
                    label,
                    holds: false,
                    witness: None,
                    error: Some(format!("individual {individual} is not mapped")),
                },
                Some(elem) => {
                    let holds = interp.eval(concept).contains(elem);
                    AxiomVerdict {
                        label,
                        holds,
                        witness: (!holds).then(|| elem.clone()),
                        error: None,
                    }
                }
            },
            Assertion::Role { role, from, to, .. } => {
                match (interp.individual(from), interp.individual(to)) {
                    (Some(a), Some(b)) => {
                        let holds = interp.has_role_pair(role, a, b);
                        AxiomVerdict {
                            label,
                            holds,
                            witness: (!holds).then(|| format!("({a},{b})")),
                            error: None,
                        }
                    }
                    _ => AxiomVerdict {
                        label,
                        holds: false,
                        witness: None,
                        error: Some(format!("individual {from} or {to} is not mapped")),
                    },
                }
            }
        };
        entries.push(verdict);
    }
    for (i, gci) in kb.tbox.iter().enumerate() {
        let label = gci.label.clone().unwrap_or_else(|| format!("tbox[{i}]"));
        let v = check_gci(interp, gci);
        entries.push(AxiomVerdict {
            label,
            holds: v.holds,
            witness: v.counterexample,
            error: None,
        });
    }
    KbReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn two_loop_interp() -> Interpretation {
        let mut i = Interpretation::new();
        i.add_element("d");
        i.add_element("e");
        i.add_to_concept("A", "d");
        i.add_role_pair("r", "d", "d");
        i.add_role_pair("r", "d", "e");
        i
    }

    #[test]
    fn self_loop_is_exact() {
        let i = two_loop_interp();
        let ext = i.eval(&Concept::self_loop("r"));
        assert_eq!(ext, ["d".to_string()].into());
    }

    #[test]
    fn top_is_whole_domain() {
        let i = two_loop_interp();
        assert_eq!(i.eval(&Concept::Top), i.domain().clone());
    }

    #[test]
    fn unknown_names_are_empty() {
        let i = two_loop_interp();
        assert!(i.eval(&Concept::name("Nope")).is_empty());
        assert!(i.eval(&Concept::exists("nope", Concept::Top)).is_empty());
    }

    #[test]
    fn next_successors_exist_exactly_at_leaves_of_a_unit() {
        // In a depth-2 unit only the four leaves have next-loops, so the
        // existential restriction over next picks out exactly them.
        let unit = crate::witness::build_unit(2).unwrap();
        let ext = unit.eval(&Concept::exists("next", Concept::Top));
        assert_eq!(ext, unit.concept_ext("Lvl_2"));
        // Both directions of the leaf-loop equivalence hold.
        let fwd = check_gci(
            &unit,
            &Gci::new(Concept::name("Lvl_2"), Concept::self_loop("next")),
        );
        let bwd = check_gci(
            &unit,
            &Gci::new(Concept::self_loop("next"), Concept::name("Lvl_2")),
        );
        assert!(fwd.holds && bwd.holds);
    }

    #[test]
    fn check_gci_reports_witness() {
        let i = two_loop_interp();
        let good = Gci::new(Concept::Top, Concept::Top);
        assert!(check_gci(&i, &good).holds);
        let bad = Gci::new(Concept::name("A"), Concept::Bottom);
        let v = check_gci(&i, &bad);
        assert!(!v.holds);
        assert_eq!(v.counterexample.as_deref(), Some("d"));
    }

    #[test]
    fn empty_kb_is_vacuously_satisfied() {
        let report = check_kb(&two_loop_interp(), &KnowledgeBase::default());
        assert!(report.all_hold());
        assert!(report.entries.is_empty());
    }

    #[test]
    fn unmapped_individual_is_an_error_entry() {
        let kb = KnowledgeBase {
            abox: vec![Assertion::Concept {
                concept: Concept::name("A"),
                individual: "missing".into(),
                label: None,
            }],
            tbox: vec![],
        };
        let report = check_kb(&two_loop_interp(), &kb);
        assert!(!report.all_hold());
        assert!(report.entries[0].error.is_some());
    }

    #[test]
    fn report_is_monotone_under_axiom_union() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let interp = gen::random_interpretation(&mut rng, 5);
            let t1: Vec<Gci> = (0..4).map(|_| gen::random_gci(&mut rng)).collect();
            let t2: Vec<Gci> = (0..3).map(|_| gen::random_gci(&mut rng)).collect();
            let mut both = t1.clone();
            both.extend(t2.clone());
            let kb1 = KnowledgeBase {
                abox: vec![],
                tbox: t1,
            };
            let kb12 = KnowledgeBase {
                abox: vec![],
                tbox: both,
            };
            let r1 = check_kb(&interp, &kb1);
            let r12 = check_kb(&interp, &kb12);
            for (a, b) in r1.entries.iter().zip(r12.entries.iter()) {
                assert_eq!(a.holds, b.holds);
            }
        }
    }

    proptest! {
        // Derived constructors match their negation expansions.
        #[test]
        fn derived_constructors_match_expansions(seed in 0u64..500) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let interp = gen::random_interpretation(&mut rng, 6);
            let c = gen::random_concept(&mut rng, 3);
            let d = gen::random_concept(&mut rng, 3);
            let role = gen::role_name(&mut rng);

            let or_direct = interp.eval(&Concept::or(c.clone(), d.clone()));
            let or_expanded = interp.eval(&Concept::not(Concept::and(
                Concept::not(c.clone()),
                Concept::not(d.clone()),
            )));
            prop_assert_eq!(or_direct.clone(), or_expanded);
            let union: std::collections::BTreeSet<_> =
                interp.eval(&c).union(&interp.eval(&d)).cloned().collect();
            prop_assert_eq!(or_direct, union);

            let forall_direct = interp.eval(&Concept::forall(role.clone(), c.clone()));
            let forall_expanded = interp.eval(&Concept::not(Concept::exists(
                role.clone(),
                Concept::not(c.clone()),
            )));
            prop_assert_eq!(forall_direct, forall_expanded);

            let implies_direct = interp.eval(&Concept::implies(c.clone(), d.clone()));
            let implies_expanded = interp.eval(&Concept::or(Concept::not(c), d));
            prop_assert_eq!(implies_direct, implies_expanded);

            let bottom = interp.eval(&Concept::Bottom);
            let not_top = interp.eval(&Concept::not(Concept::Top));
            prop_assert_eq!(bottom, not_top);
        }
    }
}
