//! The query family: the root-to-leaf query, the consecutive-leaf query, the
//! bit-fixing top-down queries, the equal-address queries, and the spoiling
//! query that detects tape mismatches.
//!
//! Every composite query shares only its global variables; the locals of each
//! conjunct copy are namespaced by the conjunct's schema and index, so copies
//! never collide.

use crate::atm::Atm;
use crate::cq::{expand_path, Cq, Fresh, PathSeg};
use crate::names;
use crate::reduction::ReductionError;

fn rl_segments(n: u32) -> Vec<PathSeg> {
    let mut segs = vec![PathSeg::Guard(names::lvl(0))];
    for i in 1..=n {
        segs.push(PathSeg::Role(names::ell(i)));
        segs.push(PathSeg::Role(names::rr(i)));
    }
    segs.push(PathSeg::Guard(names::lvl(n)));
    segs
}

fn query_rl_at(n: u32, from: &str, to: &str, label: &str) -> Cq {
    let mut cq = expand_path(&rl_segments(n), from, to, &mut Fresh::new(label))
        .expect("the root-to-leaf path has n >= 1 roles");
    cq.set_distinguished(vec![from.to_string(), to.to_string()]);
    cq
}

/// The root-to-leaf query `(Lvl_0?; ell_1; r_1; ...; ell_n; r_n; Lvl_n?)`
/// with distinguished endpoints `x_0` and `x_{2n}`.
pub fn query_rl(n: u32) -> Result<Cq, ReductionError> {
    if n == 0 {
        return Err(ReductionError::UnitDepthZero);
    }
    Ok(query_rl_at(n, "x_0", &format!("x_{}", 2 * n), "rl"))
}

fn query_main_at(n_param: u32, x: &str, y: &str, ns: &str) -> Cq {
    let mut fresh = Fresh::new(format!("{ns}main"));
    let xr = fresh.mint();
    let yr = fresh.mint();
    let mut cq = query_rl_at(n_param + 1, &xr, x, &format!("{ns}main.rl1"));
    cq.merge(&query_rl_at(n_param + 1, &yr, y, &format!("{ns}main.rl2")));
    cq.add_role_atom(names::NEXT, xr, yr);
    cq.set_distinguished(vec![x.to_string(), y.to_string()]);
    cq
}

/// Two root-to-leaf copies joined by one `next` atom: on quasi-computation
/// trees its matches are exactly the leaf pairs of consecutive configuration
/// trees. Distinguished variables `x`, `y`.
pub fn query_main(n_param: u32) -> Cq {
    query_main_at(n_param, "x", "y", "")
}

fn down_segments(i: u32, b: bool, n_param: u32) -> Vec<PathSeg> {
    let mut segs = Vec::new();
    for j in 1..=n_param + 1 {
        if j == i {
            segs.push(PathSeg::Role(if b { names::rr(i) } else { names::ell(i) }));
        } else {
            segs.push(PathSeg::Role(names::ell(j)));
            segs.push(PathSeg::Role(names::rr(j)));
        }
    }
    segs
}

fn query_ith_bit_at(
    i: u32,
    b: bool,
    n_param: u32,
    x: &str,
    y: &str,
    ns: &str,
) -> Result<Cq, ReductionError> {
    if i == 0 || i > n_param + 1 {
        return Err(ReductionError::IndexOutOfRange {
            index: i,
            max: n_param + 1,
        });
    }
    let base = format!("{ns}bit{i}_{}", u8::from(b));
    let mut fresh = Fresh::new(base.clone());
    let xp = fresh.mint();
    let yp = fresh.mint();
    let segs = down_segments(i, b, n_param);
    let mut cq = expand_path(&segs, &xp, x, &mut Fresh::new(format!("{base}.down1")))
        .expect("top-down paths are nonempty");
    cq.merge(
        &expand_path(&segs, &yp, y, &mut Fresh::new(format!("{base}.down2")))
            .expect("top-down paths are nonempty"),
    );
    cq.add_role_atom(names::NEXT, xp, yp);
    cq.add_concept_atom(names::lvl(n_param + 1), x);
    cq.add_concept_atom(names::lvl(n_param + 1), y);
    cq.set_distinguished(vec![x.to_string(), y.to_string()]);
    Ok(cq)
}

/// The bit-fixing query: two top-down paths that must cross `ell_i` (bit 0)
/// or `r_i` (bit 1) on the way from the roots of two `next`-linked trees to
/// the distinguished leaves `x`, `y`. A match may instead circle in place on
/// one leaf's self-loops.
pub fn query_ith_bit(i: u32, b: bool, n_param: u32) -> Result<Cq, ReductionError> {
    query_ith_bit_at(i, b, n_param, "x", "y", "")
}

fn query_addr_at(i: u32, n_param: u32, x: &str, y: &str, ns: &str) -> Result<Cq, ReductionError> {
    let base = format!("{ns}addr{i}");
    let z = Fresh::new(base.clone()).mint();
    let mut cq = query_main_at(n_param, x, y, &format!("{base}."));
    cq.merge(&query_ith_bit_at(
        i,
        false,
        n_param,
        x,
        &z,
        &format!("{base}."),
    )?);
    cq.merge(&query_ith_bit_at(
        i,
        true,
        n_param,
        &z,
        y,
        &format!("{base}."),
    )?);
    cq.set_distinguished(vec![x.to_string(), y.to_string()]);
    Ok(cq)
}

/// Pairs leaves of consecutive configuration trees that agree on the i-th
/// address bit: `q_main[x,y] ∧ q_i^0[x,z] ∧ q_i^1[z,y]`.
pub fn query_addr(i: u32, n_param: u32) -> Result<Cq, ReductionError> {
    query_addr_at(i, n_param, "x", "y", "")
}

/// The spoiling query: the conjunction of all equal-address queries plus the
/// guards `NoPHdAbv(y)`, `zz0(x)`, `zz1(y)`. On a quasi-computation tree it
/// matches exactly the untouched-cell mismatches between consecutive
/// configurations; the asymmetry of the cell guards is intentional.
pub fn query_machine(atm: &Atm) -> Result<Cq, ReductionError> {
    let n = atm.n();
    let mut cq = Cq::new();
    for i in 1..=n + 1 {
        cq.merge(&query_addr_at(i, n, "x", "y", "")?);
    }
    cq.add_concept_atom(names::NO_P_HD_ABV, "y");
    cq.add_concept_atom(names::cell(false), "x");
    cq.add_concept_atom(names::cell(true), "y");
    cq.set_distinguished(vec!["x".to_string(), "y".to_string()]);
    Ok(cq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;

    #[test]
    fn rl_query_counts() {
        // n = 2: 4 role atoms, 2 concept atoms, 5 variables.
        let q = query_rl(2).unwrap();
        assert_eq!(q.role_atoms().len(), 4);
        assert_eq!(q.concept_atoms().len(), 2);
        assert_eq!(q.vars().len(), 5);
        assert_eq!(q.distinguished(), ["x_0", "x_4"]);
        assert!(q.concept_atoms().contains(&("Lvl_0".into(), "x_0".into())));
        assert!(q.concept_atoms().contains(&("Lvl_2".into(), "x_4".into())));
    }

    #[test]
    fn rl_query_rejects_depth_zero() {
        assert!(query_rl(0).is_err());
    }

    #[test]
    fn main_query_counts() {
        // 2 * (2(N+1) + 2) + 1 atoms.
        for n_param in 1..=3u32 {
            let q = query_main(n_param);
            assert_eq!(
                q.atom_count() as u32,
                2 * (2 * (n_param + 1) + 2) + 1,
                "N={n_param}"
            );
            assert_eq!(q.distinguished(), ["x", "y"]);
        }
    }

    #[test]
    fn ith_bit_query_shape() {
        let n_param = 1u32;
        let q = query_ith_bit(1, false, n_param).unwrap();
        // Two copies of a (2(N+1)-1)-role path, one next atom, two guards.
        assert_eq!(q.role_atoms().len() as u32, 2 * (2 * (n_param + 1) - 1) + 1);
        assert_eq!(q.concept_atoms().len(), 2);
        // The ell_1;r_1 block is replaced by ell_1 alone.
        assert!(q.role_atoms().iter().any(|(r, _, _)| r == "ell_1"));
        let r1_count = q.role_atoms().iter().filter(|(r, _, _)| r == "r_1").count();
        assert_eq!(r1_count, 0);
        assert!(query_ith_bit(3, false, n_param).is_err());
        assert!(query_ith_bit(0, false, n_param).is_err());
    }

    #[test]
    fn machine_query_counts_follow_the_quadratic() {
        // Symbolic expansion with set-semantics deduplication of the shared
        // guards: (N+1)(12N+11) role atoms and 3(N+1)+5 concept atoms.
        for n in 1..=8u32 {
            let atm = tiny_acceptor().with_tape_exponent(n);
            let q = query_machine(&atm).unwrap();
            let n = n as usize;
            assert_eq!(q.role_atoms().len(), (n + 1) * (12 * n + 11));
            assert_eq!(q.concept_atoms().len(), 3 * (n + 1) + 5);
            assert_eq!(q.atom_count(), 12 * n * n + 26 * n + 19);
            assert_eq!(q.vars().len(), 2 + (n + 1) * (12 * n + 9));
        }
    }

    #[test]
    fn machine_query_guards_are_asymmetric() {
        let q = query_machine(&tiny_acceptor()).unwrap();
        assert!(q.concept_atoms().contains(&("zz0".into(), "x".into())));
        assert!(q.concept_atoms().contains(&("zz1".into(), "y".into())));
        assert!(q.concept_atoms().contains(&("NoPHdAbv".into(), "y".into())));
        assert!(!q.concept_atoms().contains(&("NoPHdAbv".into(), "x".into())));
        assert!(!q.concept_atoms().contains(&("zz1".into(), "x".into())));
    }
}
