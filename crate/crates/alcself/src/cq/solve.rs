//! Backtracking match search over finite interpretations.
//!
//! Candidate sets are seeded from concept atoms and kept arc-consistent over
//! role atoms (AC-3) throughout the search; the variable order is smallest
//! candidate set first, ties broken by variable name. Projections to
//! distinguished variables are enumerated by pinning those variables first
//! and running an existence check for the rest, so the multiplicity of
//! matches over local variables never blows up the enumeration.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cq::{Cq, CqError};
use crate::dl::Interpretation;

/// Search budget, counted in backtracking nodes (candidate assignments).
#[derive(Debug, Clone)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_nodes: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget exceeded after {0} nodes")]
    BudgetExceeded(u64),
    #[error("invalid query: {0}")]
    InvalidQuery(#[from] CqError),
    #[error("anchor {0} is outside the source or target domain")]
    AnchorOutsideDomain(String),
}

#[derive(Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> BitSet {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    fn full(n: usize) -> BitSet {
        let mut s = BitSet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    fn singleton(n: usize, i: usize) -> BitSet {
        let mut s = BitSet::empty(n);
        s.insert(i);
        s
    }

    fn intersect_with(&mut self, other: &BitSet) -> bool {
        let mut changed = false;
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            let new = *w & o;
            changed |= new != *w;
            *w = new;
        }
        changed
    }

    fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn retain(&mut self, mut keep: impl FnMut(usize) -> bool) -> bool {
        let mut changed = false;
        for i in 0..self.words.len() * 64 {
            if self.contains(i) && !keep(i) {
                self.words[i / 64] &= !(1 << (i % 64));
                changed = true;
            }
        }
        changed
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.words.len() * 64).filter(|&i| self.contains(i))
    }

    fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

struct RoleTable {
    succ: Vec<BitSet>,
    pred: Vec<BitSet>,
}

struct Constraint {
    role: usize,
    from: usize,
    to: usize,
}

/// A constraint network: one variable per query variable (or source element),
/// candidate bitsets over the target domain, and one constraint per role atom.
struct Csp {
    elems: Vec<String>,
    vars: Vec<String>,
    cands: Vec<BitSet>,
    roles: Vec<RoleTable>,
    constraints: Vec<Constraint>,
    touching: Vec<Vec<usize>>,
}

impl Csp {
    fn role_table(interp: &Interpretation, role: &str, index: &BTreeMap<&str, usize>) -> RoleTable {
        let n = index.len();
        let mut succ = vec![BitSet::empty(n); n];
        let mut pred = vec![BitSet::empty(n); n];
        for (a, b) in interp.role_ext(role) {
            let (ia, ib) = (index[a.as_str()], index[b.as_str()]);
            succ[ia].insert(ib);
            pred[ib].insert(ia);
        }
        RoleTable { succ, pred }
    }

    fn from_query(interp: &Interpretation, cq: &Cq) -> Csp {
        let elems: Vec<String> = interp.domain().iter().cloned().collect();
        let index: BTreeMap<&str, usize> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let vars: Vec<String> = cq.vars().into_iter().collect();
        let var_index: BTreeMap<&str, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let n = elems.len();

        let mut cands = vec![BitSet::full(n); vars.len()];
        for (concept, var) in cq.concept_atoms() {
            let mut ext = BitSet::empty(n);
            for e in interp.concept_ext(concept) {
                ext.insert(index[e.as_str()]);
            }
            cands[var_index[var.as_str()]].intersect_with(&ext);
        }

        let role_names: Vec<String> = cq
            .role_atoms()
            .iter()
            .map(|(r, _, _)| r.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let role_index: BTreeMap<&str, usize> = role_names
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_str(), i))
            .collect();
        let roles: Vec<RoleTable> = role_names
            .iter()
            .map(|r| Self::role_table(interp, r, &index))
            .collect();

        let mut constraints = Vec::new();
        let mut touching = vec![Vec::new(); vars.len()];
        for (role, from, to) in cq.role_atoms() {
            let c = Constraint {
                role: role_index[role.as_str()],
                from: var_index[from.as_str()],
                to: var_index[to.as_str()],
            };
            touching[c.from].push(constraints.len());
            touching[c.to].push(constraints.len());
            constraints.push(c);
        }

        Csp {
            elems,
            vars,
            cands,
            roles,
            constraints,
            touching,
        }
    }

    fn from_structures(
        src: &Interpretation,
        dst: &Interpretation,
        anchors: &BTreeMap<String, String>,
    ) -> Result<Csp, SolveError> {
        let elems: Vec<String> = dst.domain().iter().cloned().collect();
        let index: BTreeMap<&str, usize> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let vars: Vec<String> = src.domain().iter().cloned().collect();
        let var_index: BTreeMap<&str, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let n = elems.len();

        let mut cands = vec![BitSet::full(n); vars.len()];
        for concept in src.concept_names() {
            let mut ext = BitSet::empty(n);
            for e in dst.concept_ext(concept) {
                ext.insert(index[e.as_str()]);
            }
            for e in src.concept_ext(concept) {
                cands[var_index[e.as_str()]].intersect_with(&ext);
            }
        }
        for (from, to) in anchors {
            let v = *var_index
                .get(from.as_str())
                .ok_or_else(|| SolveError::AnchorOutsideDomain(from.clone()))?;
            let e = *index
                .get(to.as_str())
                .ok_or_else(|| SolveError::AnchorOutsideDomain(to.clone()))?;
            cands[v].intersect_with(&BitSet::singleton(n, e));
        }

        let role_names: Vec<String> = src.role_names().cloned().collect();
        let roles: Vec<RoleTable> = role_names
            .iter()
            .map(|r| Self::role_table(dst, r, &index))
            .collect();
        let mut constraints = Vec::new();
        let mut touching = vec![Vec::new(); vars.len()];
        for (ri, role) in role_names.iter().enumerate() {
            for (a, b) in src.role_ext(role) {
                let c = Constraint {
                    role: ri,
                    from: var_index[a.as_str()],
                    to: var_index[b.as_str()],
                };
                touching[c.from].push(constraints.len());
                touching[c.to].push(constraints.len());
                constraints.push(c);
            }
        }

        Ok(Csp {
            elems,
            vars,
            cands,
            roles,
            constraints,
            touching,
        })
    }
}

struct Search<'a> {
    csp: &'a Csp,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    /// Restores arc consistency starting from the given worklist of
    /// constraints. Returns `false` on a wiped-out candidate set.
    fn ac(&self, cands: &mut [BitSet], mut work: Vec<usize>) -> bool {
        while let Some(ci) = work.pop() {
            let c = &self.csp.constraints[ci];
            let table = &self.csp.roles[c.role];

            // A shrink re-enqueues every constraint touching the variable,
            // including the one just revised: for a self-arc r(v, v) the
            // revision changes its own support set.
            let to_cands = cands[c.to].clone();
            if cands[c.from].retain(|a| table.succ[a].intersects(&to_cands)) {
                if cands[c.from].is_empty() {
                    return false;
                }
                work.extend_from_slice(&self.csp.touching[c.from]);
            }

            let from_cands = cands[c.from].clone();
            if cands[c.to].retain(|b| table.pred[b].intersects(&from_cands)) {
                if cands[c.to].is_empty() {
                    return false;
                }
                work.extend_from_slice(&self.csp.touching[c.to]);
            }
        }
        true
    }

    fn ac_all(&self, cands: &mut [BitSet]) -> bool {
        if cands.iter().any(BitSet::is_empty) {
            return false;
        }
        self.ac(cands, (0..self.csp.constraints.len()).collect())
    }

    /// Pins `var` to `value` and restores arc consistency around it.
    fn assign(
        &mut self,
        cands: &mut [BitSet],
        var: usize,
        value: usize,
    ) -> Result<bool, SolveError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(SolveError::BudgetExceeded(self.nodes));
        }
        cands[var] = BitSet::singleton(self.csp.elems.len(), value);
        Ok(self.ac(cands, self.csp.touching[var].clone()))
    }

    /// Smallest non-singleton candidate set; ties are broken by variable
    /// order (variables are sorted by name).
    fn pick_var(&self, cands: &[BitSet]) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for (v, set) in cands.iter().enumerate() {
            let size = set.count();
            if size >= 2 && best.is_none_or(|(_, s)| size < s) {
                best = Some((v, size));
            }
        }
        best.map(|(v, _)| v)
    }

    /// Finds one full solution of the (already arc-consistent) network.
    fn solve(&mut self, cands: &[BitSet]) -> Result<Option<Vec<usize>>, SolveError> {
        let var = match self.pick_var(cands) {
            None => {
                // All candidate sets are singletons and arc-consistent,
                // so reading them off yields a solution.
                return Ok(Some(
                    cands.iter().map(|s| s.first().expect("nonempty")).collect(),
                ));
            }
            Some(v) => v,
        };
        let values: Vec<usize> = cands[var].iter().collect();
        for value in values {
            let mut next = cands.to_vec();
            if self.assign(&mut next, var, value)? {
                if let Some(solution) = self.solve(&next)? {
                    return Ok(Some(solution));
                }
            }
        }
        Ok(None)
    }

    fn enumerate_projections(
        &mut self,
        cands: &[BitSet],
        dist: &[usize],
        tuple: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<String>>,
    ) -> Result<(), SolveError> {
        match dist.split_first() {
            None => {
                if self.solve(cands)?.is_some() {
                    out.insert(tuple.iter().map(|&e| self.csp.elems[e].clone()).collect());
                }
            }
            Some((&var, rest)) => {
                let values: Vec<usize> = cands[var].iter().collect();
                for value in values {
                    let mut next = cands.to_vec();
                    if self.assign(&mut next, var, value)? {
                        tuple.push(value);
                        self.enumerate_projections(&next, rest, tuple, out)?;
                        tuple.pop();
                    }
                }
            }
        }
        Ok(())
    }
}

/// All projections of matches to the distinguished variables, as sorted
/// tuples (set semantics: duplicates collapse).
pub fn find_matches(
    interp: &Interpretation,
    cq: &Cq,
    budget: &Budget,
) -> Result<BTreeSet<Vec<String>>, SolveError> {
    cq.validate()?;
    let csp = Csp::from_query(interp, cq);
    let mut search = Search {
        csp: &csp,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let mut cands = csp.cands.clone();
    let mut out = BTreeSet::new();
    if !search.ac_all(&mut cands) {
        return Ok(out);
    }
    let dist: Vec<usize> = cq
        .distinguished()
        .iter()
        .map(|d| csp.vars.binary_search(d).expect("validated"))
        .collect();
    search.enumerate_projections(&cands, &dist, &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Whether some match exists; stops at the first one.
pub fn exists_match(interp: &Interpretation, cq: &Cq, budget: &Budget) -> Result<bool, SolveError> {
    cq.validate()?;
    let csp = Csp::from_query(interp, cq);
    let mut search = Search {
        csp: &csp,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let mut cands = csp.cands.clone();
    if !search.ac_all(&mut cands) {
        return Ok(false);
    }
    Ok(search.solve(&cands)?.is_some())
}

/// A concept- and role-preserving map from `src` into `dst` extending the
/// anchors, or `None`. The source is treated as its canonical query: one
/// variable per element, one constraint per concept or role membership.
pub fn find_homomorphism(
    src: &Interpretation,
    dst: &Interpretation,
    anchors: &BTreeMap<String, String>,
    budget: &Budget,
) -> Result<Option<BTreeMap<String, String>>, SolveError> {
    let csp = Csp::from_structures(src, dst, anchors)?;
    let mut search = Search {
        csp: &csp,
        nodes: 0,
        max_nodes: budget.max_nodes,
    };
    let mut cands = csp.cands.clone();
    if !search.ac_all(&mut cands) {
        return Ok(None);
    }
    Ok(search.solve(&cands)?.map(|solution| {
        csp.vars
            .iter()
            .cloned()
            .zip(solution.into_iter().map(|e| csp.elems[e].clone()))
            .collect()
    }))
}
