//! Conjunctive queries: atoms, the path-syntax shorthand, and (in
//! [`solve`]) match enumeration over finite interpretations plus
//! structure-to-structure homomorphism search.

mod solve;

pub use solve::{exists_match, find_homomorphism, find_matches, Budget, SolveError};

use std::collections::BTreeSet;

use thiserror::Error;

/// A conjunctive query with concept atoms `A(x)`, role atoms `r(x, y)` and
/// an ordered (possibly empty) list of distinguished variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cq {
    concept_atoms: BTreeSet<(String, String)>,
    role_atoms: BTreeSet<(String, String, String)>,
    distinguished: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CqError {
    #[error("degenerate path: no role between the endpoints")]
    DegeneratePath,
    #[error("malformed path: two consecutive concept guards")]
    ConsecutiveGuards,
    #[error("degenerate query: no atoms")]
    DegenerateQuery,
    #[error("distinguished variable {0} does not occur in any atom")]
    UnboundDistinguished(String),
}

impl Cq {
    pub fn new() -> Cq {
        Cq::default()
    }

    pub fn add_concept_atom(&mut self, concept: impl Into<String>, var: impl Into<String>) {
        self.concept_atoms.insert((concept.into(), var.into()));
    }

    pub fn add_role_atom(
        &mut self,
        role: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
    ) {
        self.role_atoms
            .insert((role.into(), from.into(), to.into()));
    }

    pub fn set_distinguished(&mut self, vars: Vec<String>) {
        self.distinguished = vars;
    }

    /// Unions another query's atoms into this one (set semantics).
    pub fn merge(&mut self, other: &Cq) {
        self.concept_atoms
            .extend(other.concept_atoms.iter().cloned());
        self.role_atoms.extend(other.role_atoms.iter().cloned());
    }

    pub fn concept_atoms(&self) -> &BTreeSet<(String, String)> {
        &self.concept_atoms
    }

    pub fn role_atoms(&self) -> &BTreeSet<(String, String, String)> {
        &self.role_atoms
    }

    pub fn distinguished(&self) -> &[String] {
        &self.distinguished
    }

    pub fn atom_count(&self) -> usize {
        self.concept_atoms.len() + self.role_atoms.len()
    }

    /// All variables occurring in atoms.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut vs = BTreeSet::new();
        for (_, v) in &self.concept_atoms {
            vs.insert(v.clone());
        }
        for (_, a, b) in &self.role_atoms {
            vs.insert(a.clone());
            vs.insert(b.clone());
        }
        vs
    }

    pub fn validate(&self) -> Result<(), CqError> {
        if self.concept_atoms.is_empty() && self.role_atoms.is_empty() {
            return Err(CqError::DegenerateQuery);
        }
        let vars = self.vars();
        for d in &self.distinguished {
            if !vars.contains(d) {
                return Err(CqError::UnboundDistinguished(d.clone()));
            }
        }
        Ok(())
    }
}

/// One segment of a path expression: an optional concept guard or a role
/// step. `Top` guards are simply omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathSeg {
    Guard(String),
    Role(String),
}

/// Fresh-variable source: yields `{label}#{counter}` in generation order.
#[derive(Debug, Clone)]
pub struct Fresh {
    label: String,
    counter: usize,
}

impl Fresh {
    pub fn new(label: impl Into<String>) -> Fresh {
        Fresh {
            label: label.into(),
            counter: 0,
        }
    }

    pub fn mint(&mut self) -> String {
        self.counter += 1;
        format!("{}#{}", self.label, self.counter)
    }
}

/// Expands a path expression `(A_0?; r_1; A_1?; ...; r_k; A_k?)(from, to)`
/// into the corresponding conjunction, minting fresh intermediate variables
/// between the endpoints. The endpoints become the distinguished variables.
pub fn expand_path(
    segments: &[PathSeg],
    from: &str,
    to: &str,
    fresh: &mut Fresh,
) -> Result<Cq, CqError> {
    let role_count = segments
        .iter()
        .filter(|s| matches!(s, PathSeg::Role(_)))
        .count();
    if role_count == 0 {
        return Err(CqError::DegeneratePath);
    }
    let mut cq = Cq::new();
    let mut current = from.to_string();
    let mut roles_done = 0;
    let mut last_was_guard = false;
    for seg in segments {
        match seg {
            PathSeg::Guard(concept) => {
                if last_was_guard {
                    return Err(CqError::ConsecutiveGuards);
                }
                cq.add_concept_atom(concept.clone(), current.clone());
                last_was_guard = true;
            }
            PathSeg::Role(role) => {
                roles_done += 1;
                let next = if roles_done == role_count {
                    to.to_string()
                } else {
                    fresh.mint()
                };
                cq.add_role_atom(role.clone(), current.clone(), next.clone());
                current = next;
                last_was_guard = false;
            }
        }
    }
    cq.set_distinguished(vec![from.to_string(), to.to_string()]);
    Ok(cq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    #[test]
    fn guarded_single_step_path() {
        // (A?; r; B?)(x0, x1) expands to A(x0) ∧ r(x0,x1) ∧ B(x1).
        let segs = [
            PathSeg::Guard("A".into()),
            PathSeg::Role("r".into()),
            PathSeg::Guard("B".into()),
        ];
        let cq = expand_path(&segs, "x0", "x1", &mut Fresh::new("q")).unwrap();
        assert_eq!(cq.concept_atoms().len(), 2);
        assert!(cq.concept_atoms().contains(&("A".into(), "x0".into())));
        assert!(cq.concept_atoms().contains(&("B".into(), "x1".into())));
        assert_eq!(
            cq.role_atoms().iter().collect::<Vec<_>>(),
            vec![&("r".into(), "x0".into(), "x1".into())]
        );
    }

    #[test]
    fn two_step_path_mints_a_fresh_variable() {
        let segs = [PathSeg::Role("r".into()), PathSeg::Role("s".into())];
        let cq = expand_path(&segs, "x", "y", &mut Fresh::new("q")).unwrap();
        assert!(cq
            .role_atoms()
            .contains(&("r".into(), "x".into(), "q#1".into())));
        assert!(cq
            .role_atoms()
            .contains(&("s".into(), "q#1".into(), "y".into())));
        assert_eq!(cq.vars().len(), 3);
    }

    #[test]
    fn empty_role_list_is_degenerate() {
        let segs = [PathSeg::Guard("A".into())];
        assert_eq!(
            expand_path(&segs, "x", "y", &mut Fresh::new("q")).unwrap_err(),
            CqError::DegeneratePath
        );
    }

    #[test]
    fn unbound_distinguished_variable_is_rejected() {
        let mut cq = Cq::new();
        cq.add_concept_atom("A", "x");
        cq.set_distinguished(vec!["y".into()]);
        assert_eq!(
            cq.validate().unwrap_err(),
            CqError::UnboundDistinguished("y".into())
        );
    }

    proptest! {
        // Atom counts of a path expansion: one role atom per role, one
        // concept atom per guard.
        #[test]
        fn path_expansion_atom_counts(seed in 0u64..200) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            use rand::Rng;
            let n_roles = rng.gen_range(1..6usize);
            let mut segs = Vec::new();
            let mut guards = 0usize;
            for i in 0..n_roles {
                if rng.gen_bool(0.5) {
                    segs.push(PathSeg::Guard(format!("G{i}")));
                    guards += 1;
                }
                segs.push(PathSeg::Role(format!("r{i}")));
            }
            if rng.gen_bool(0.5) {
                segs.push(PathSeg::Guard("Gend".into()));
                guards += 1;
            }
            let cq = expand_path(&segs, "u", "v", &mut Fresh::new("p")).unwrap();
            prop_assert_eq!(cq.role_atoms().len(), n_roles);
            prop_assert_eq!(cq.concept_atoms().len(), guards);
            prop_assert_eq!(cq.vars().len(), n_roles + 1);
        }
    }
}
