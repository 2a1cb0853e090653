//! The shared signature: every concept and role name used by the generated
//! knowledge bases and by the witness structures is minted here, so the two
//! sides cannot drift apart.
//!
//! Indexed families are rendered ASCII-only: `Lvl_0`, `Ad_2^1`, `HdPos_1^0`,
//! `ell_1`, `r_1`. The two cell-marker concepts are rendered `zz0` / `zz1`.
//! A transition `(s, a, b, s', d)` is rendered `s.a.b.s'.+1` (or `.-1`).

use crate::atm::Transition;

pub const L: &str = "L";
pub const R: &str = "R";
pub const NEXT: &str = "next";
pub const AUX: &str = "aux";
pub const INIT: &str = "Init";
pub const HD_HERE: &str = "HdHere";
pub const NO_HD_HERE: &str = "NoHdHere";
pub const P_HD_HERE: &str = "PHdHere";
pub const NO_P_HD_HERE: &str = "NoPHdHere";
pub const P_HD_ABV: &str = "PHdAbv";
pub const NO_P_HD_ABV: &str = "NoPHdAbv";
/// The ABox individual naming the root of the intended model.
pub const INIT_INDIVIDUAL: &str = "a";

fn bit(b: bool) -> u8 {
    u8::from(b)
}

pub fn lvl(i: u32) -> String {
    format!("Lvl_{i}")
}

pub fn ad(i: u32, b: bool) -> String {
    format!("Ad_{}^{}", i, bit(b))
}

pub fn ell(i: u32) -> String {
    format!("ell_{i}")
}

pub fn rr(i: u32) -> String {
    format!("r_{i}")
}

pub fn st(state: &str) -> String {
    format!("St_{state}")
}

pub fn letter(a: bool) -> String {
    format!("Let_{}", bit(a))
}

/// Cell marker placed on the two children of a tape-cell node.
pub fn cell(b: bool) -> String {
    format!("zz{}", bit(b))
}

pub fn hd_pos(i: u32, b: bool) -> String {
    format!("HdPos_{}^{}", i, bit(b))
}

pub fn hd_let(a: bool) -> String {
    format!("HdLet_{}", bit(a))
}

pub fn p_hd_pos(i: u32, b: bool) -> String {
    format!("PHdPos_{}^{}", i, bit(b))
}

pub fn p_hd_let(a: bool) -> String {
    format!("PHdLet_{}", bit(a))
}

/// Renders a transition tuple for use inside names and labels.
pub fn transition_tag(t: &Transition) -> String {
    format!(
        "{}.{}.{}.{}.{}",
        t.source,
        bit(t.read),
        bit(t.write),
        t.target,
        t.dir.signed_str()
    )
}

pub fn pr_tr(t: &Transition) -> String {
    format!("PrTr_{}", transition_tag(t))
}
