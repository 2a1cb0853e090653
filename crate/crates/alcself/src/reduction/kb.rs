//! Axiom-schema emitters for the four knowledge-base layers: units,
//! configuration trees, enriched trees, and the machine axioms.

use crate::atm::{Atm, Dir};
use crate::dl::{Assertion, Concept, Gci, KnowledgeBase};
use crate::names;
use crate::reduction::ReductionError;

fn gci(label: String, lhs: Concept, rhs: Concept) -> Gci {
    Gci::labelled(label, lhs, rhs)
}

/// `lhs ≡ rhs` as the two inclusions `label.fwd` and `label.bwd`.
fn equiv(out: &mut Vec<Gci>, label: &str, lhs: Concept, rhs: Concept) {
    out.push(gci(format!("{label}.fwd"), lhs.clone(), rhs.clone()));
    out.push(gci(format!("{label}.bwd"), rhs, lhs));
}

fn name(n: String) -> Concept {
    Concept::Name(n)
}

/// `∀ell_1.∀r_1.….∀ell_k.∀r_k. body`
fn forall_chain(k: u32, body: Concept) -> Concept {
    let mut c = body;
    for i in (1..=k).rev() {
        c = Concept::forall(names::rr(i), c);
        c = Concept::forall(names::ell(i), c);
    }
    c
}

/// `∃ell_1.∃r_1.….∃ell_k.∃r_k. body`
fn exists_chain(k: u32, body: Concept) -> Concept {
    let mut c = body;
    for i in (1..=k).rev() {
        c = Concept::exists(names::rr(i), c);
        c = Concept::exists(names::ell(i), c);
    }
    c
}

/// The axiomatisation of n-configuration units: levels, pervasive self-loops,
/// leaf `next`-loops, left/right split, child existence, and address bits
/// with their downward propagation.
pub fn kb_unit(n: u32) -> Result<Vec<Gci>, ReductionError> {
    if n == 0 {
        return Err(ReductionError::UnitDepthZero);
    }
    let mut out = Vec::new();

    out.push(gci(
        "LvlCov".into(),
        Concept::Top,
        Concept::or_all((0..=n).map(|i| name(names::lvl(i)))),
    ));
    for i in 0..=n {
        for j in (i + 1)..=n {
            out.push(gci(
                format!("LvlDisj[{i},{j}]"),
                Concept::and(name(names::lvl(i)), name(names::lvl(j))),
                Concept::Bottom,
            ));
        }
    }

    out.push(gci(
        "all-loops-but-next".into(),
        Concept::Top,
        Concept::and_all((1..=n).flat_map(|i| {
            [
                Concept::self_loop(names::ell(i)),
                Concept::self_loop(names::rr(i)),
            ]
        })),
    ));
    equiv(
        &mut out,
        "leaves-next-loop",
        name(names::lvl(n)),
        Concept::self_loop(names::NEXT),
    );

    out.push(gci(
        "LRCov".into(),
        Concept::Top,
        Concept::or(name(names::L.into()), name(names::R.into())),
    ));
    out.push(gci(
        "LRDisj".into(),
        Concept::and(name(names::L.into()), name(names::R.into())),
        Concept::Bottom,
    ));

    for i in 0..n {
        out.push(gci(
            format!("LsuccLvl[{i}]"),
            name(names::lvl(i)),
            Concept::and(
                Concept::exists(names::ell(i + 1), name(names::lvl(i + 1))),
                Concept::forall(
                    names::ell(i + 1),
                    Concept::implies(name(names::lvl(i + 1)), name(names::L.into())),
                ),
            ),
        ));
        out.push(gci(
            format!("RsuccLvl[{i}]"),
            name(names::lvl(i)),
            Concept::and(
                Concept::exists(names::rr(i + 1), name(names::lvl(i + 1))),
                Concept::forall(
                    names::rr(i + 1),
                    Concept::implies(name(names::lvl(i + 1)), name(names::R.into())),
                ),
            ),
        ));
    }

    for i in 1..=n {
        out.push(gci(
            format!("LBitZero[{i}]"),
            Concept::and(name(names::lvl(i)), name(names::L.into())),
            name(names::ad(i, false)),
        ));
        out.push(gci(
            format!("RBitOne[{i}]"),
            Concept::and(name(names::lvl(i)), name(names::R.into())),
            name(names::ad(i, true)),
        ));
        out.push(gci(
            format!("AdDisj[{i}]"),
            Concept::and(name(names::ad(i, false)), name(names::ad(i, true))),
            Concept::Bottom,
        ));
        for j in 0..i {
            for b in [false, true] {
                out.push(gci(
                    format!("AdLvlDisj[{i},{j},{}]", u8::from(b)),
                    Concept::and(name(names::ad(i, b)), name(names::lvl(j))),
                    Concept::Bottom,
                ));
            }
        }
        for b in [false, true] {
            out.push(gci(
                format!("PropBit[{i},{}]", u8::from(b)),
                name(names::ad(i, b)),
                Concept::and_all((1..=n).map(|j| {
                    Concept::and(
                        Concept::forall(names::ell(j), name(names::ad(i, b))),
                        Concept::forall(names::rr(j), name(names::ad(i, b))),
                    )
                })),
            ));
        }
    }

    Ok(out)
}

/// The configuration-tree axioms on top of `kb_unit(N+1)`: unique state at
/// the root, coherent tape representation, head address, head marker and
/// head letter.
pub fn kb_conf(atm: &Atm) -> Vec<Gci> {
    let n = atm.n();
    let mut out = kb_unit(n + 1).expect("validated machines have n >= 1");

    equiv(
        &mut out,
        "StCov",
        name(names::lvl(0)),
        Concept::or_all(atm.states().iter().map(|s| name(names::st(s)))),
    );
    for (i, s) in atm.states().iter().enumerate() {
        for s2 in &atm.states()[i + 1..] {
            out.push(gci(
                format!("StDisj[{s},{s2}]"),
                Concept::and(name(names::st(s)), name(names::st(s2))),
                Concept::Bottom,
            ));
        }
    }

    out.push(gci(
        "LetDisj".into(),
        Concept::and(name(names::cell(false)), name(names::cell(true))),
        Concept::Bottom,
    ));
    equiv(
        &mut out,
        "LetCov",
        name(names::lvl(n + 1)),
        Concept::or(name(names::cell(false)), name(names::cell(true))),
    );
    out.push(gci(
        "LetConDisj".into(),
        Concept::and(name(names::letter(false)), name(names::letter(true))),
        Concept::Bottom,
    ));
    equiv(
        &mut out,
        "LetConCov",
        Concept::or(name(names::letter(false)), name(names::letter(true))),
        name(names::lvl(n)),
    );
    for a in [false, true] {
        let label = if a { "EncLetOne" } else { "EncLetZero" };
        out.push(gci(
            label.into(),
            name(names::letter(a)),
            Concept::and(
                Concept::forall(
                    names::ell(n + 1),
                    Concept::implies(name(names::lvl(n + 1)), name(names::cell(a))),
                ),
                Concept::forall(
                    names::rr(n + 1),
                    Concept::implies(name(names::lvl(n + 1)), name(names::cell(!a))),
                ),
            ),
        ));
    }

    let lvl0_or_n = Concept::or(name(names::lvl(0)), name(names::lvl(n)));
    for i in 1..=n {
        equiv(
            &mut out,
            &format!("HdPosCov[{i}]"),
            lvl0_or_n.clone(),
            Concept::or(name(names::hd_pos(i, false)), name(names::hd_pos(i, true))),
        );
        out.push(gci(
            format!("HdPosDisj[{i}]"),
            Concept::and(name(names::hd_pos(i, false)), name(names::hd_pos(i, true))),
            Concept::Bottom,
        ));
        for b in [false, true] {
            out.push(gci(
                format!("PropHdPos[{i},{}]", u8::from(b)),
                Concept::and(name(names::lvl(0)), name(names::hd_pos(i, b))),
                forall_chain(
                    n,
                    Concept::implies(name(names::lvl(n)), name(names::hd_pos(i, b))),
                ),
            ));
        }
    }

    equiv(
        &mut out,
        "HdHereCov",
        Concept::or(name(names::HD_HERE.into()), name(names::NO_HD_HERE.into())),
        name(names::lvl(n)),
    );
    out.push(gci(
        "HdHereEqualAdr".into(),
        Concept::and(
            name(names::lvl(n)),
            Concept::and_all((1..=n).map(|i| {
                Concept::or_all(
                    [false, true]
                        .map(|b| Concept::and(name(names::ad(i, b)), name(names::hd_pos(i, b)))),
                )
            })),
        ),
        name(names::HD_HERE.into()),
    ));
    out.push(gci(
        "NoHdHereDiffrAdr".into(),
        Concept::and(
            name(names::lvl(n)),
            Concept::or_all((1..=n).flat_map(|i| {
                [false, true]
                    .map(|b| Concept::and(name(names::ad(i, b)), name(names::hd_pos(i, !b))))
            })),
        ),
        name(names::NO_HD_HERE.into()),
    ));

    equiv(
        &mut out,
        "HdLetCov",
        Concept::or(name(names::hd_let(false)), name(names::hd_let(true))),
        name(names::lvl(0)),
    );
    for a in [false, true] {
        out.push(gci(
            format!("RetrHdLet[{}]", u8::from(a)),
            Concept::and(
                name(names::lvl(0)),
                exists_chain(
                    n,
                    Concept::and(name(names::HD_HERE.into()), name(names::letter(a))),
                ),
            ),
            name(names::hd_let(a)),
        ));
        out.push(gci(
            format!("HdLetUnique[{}]", u8::from(a)),
            Concept::and(name(names::lvl(0)), name(names::hd_let(a))),
            forall_chain(
                n,
                Concept::implies(name(names::HD_HERE.into()), name(names::letter(a))),
            ),
        ));
    }

    out
}

/// The binary increment concept `"A + 1 = B"` over the bit families `a`/`b`,
/// most significant bit first: some pivot bit flips 0 to 1, every less
/// significant bit flips 1 to 0, and all more significant bits agree.
fn increment(n: u32, a: &dyn Fn(u32, bool) -> String, b: &dyn Fn(u32, bool) -> String) -> Concept {
    Concept::or_all((1..=n).map(|i| {
        let mut parts = vec![Concept::and(name(a(i, false)), name(b(i, true)))];
        parts.extend((i + 1..=n).map(|j| Concept::and(name(a(j, true)), name(b(j, false)))));
        parts.extend((1..i).map(|j| {
            Concept::or(
                Concept::and(name(a(j, true)), name(b(j, true))),
                Concept::and(name(a(j, false)), name(b(j, false))),
            )
        }));
        Concept::and_all(parts)
    }))
}

/// The enriched-tree axioms on top of [`kb_conf`]: the origin marker, the
/// previous-head family mirroring the head family, the `PHdAbv` split, the
/// per-transition consistency axiom with the increment/decrement gadget, and
/// the initial-configuration axiom.
pub fn kb_enr(atm: &Atm) -> Vec<Gci> {
    let n = atm.n();
    let mut out = kb_conf(atm);

    equiv(
        &mut out,
        "TrCov",
        name(names::lvl(0)),
        Concept::or(
            name(names::INIT.into()),
            Concept::or_all(atm.delta().iter().map(|t| name(names::pr_tr(t)))),
        ),
    );
    for t in atm.delta() {
        out.push(gci(
            format!("TrInitDisj[{}]", names::transition_tag(t)),
            Concept::and(name(names::INIT.into()), name(names::pr_tr(t))),
            Concept::Bottom,
        ));
    }
    for (i, t) in atm.delta().iter().enumerate() {
        for t2 in &atm.delta()[i + 1..] {
            out.push(gci(
                format!(
                    "TrDisj[{},{}]",
                    names::transition_tag(t),
                    names::transition_tag(t2)
                ),
                Concept::and(name(names::pr_tr(t)), name(names::pr_tr(t2))),
                Concept::Bottom,
            ));
        }
    }

    let lvl0_or_n = Concept::or(name(names::lvl(0)), name(names::lvl(n)));
    for i in 1..=n {
        equiv(
            &mut out,
            &format!("PHdPosCov[{i}]"),
            lvl0_or_n.clone(),
            Concept::or(
                name(names::p_hd_pos(i, false)),
                name(names::p_hd_pos(i, true)),
            ),
        );
        out.push(gci(
            format!("PHdPosDisj[{i}]"),
            Concept::and(
                name(names::p_hd_pos(i, false)),
                name(names::p_hd_pos(i, true)),
            ),
            Concept::Bottom,
        ));
        for b in [false, true] {
            out.push(gci(
                format!("PropPHdPos[{i},{}]", u8::from(b)),
                Concept::and(name(names::lvl(0)), name(names::p_hd_pos(i, b))),
                forall_chain(
                    n,
                    Concept::implies(name(names::lvl(n)), name(names::p_hd_pos(i, b))),
                ),
            ));
        }
    }

    equiv(
        &mut out,
        "PHdHereCov",
        Concept::or(
            name(names::P_HD_HERE.into()),
            name(names::NO_P_HD_HERE.into()),
        ),
        name(names::lvl(n)),
    );
    out.push(gci(
        "PHdHereEqualAdr".into(),
        Concept::and(
            name(names::lvl(n)),
            Concept::and_all((1..=n).map(|i| {
                Concept::or_all(
                    [false, true]
                        .map(|b| Concept::and(name(names::ad(i, b)), name(names::p_hd_pos(i, b)))),
                )
            })),
        ),
        name(names::P_HD_HERE.into()),
    ));
    out.push(gci(
        "NoPHdHereDiffAdr".into(),
        Concept::and(
            name(names::lvl(n)),
            Concept::or_all((1..=n).flat_map(|i| {
                [false, true]
                    .map(|b| Concept::and(name(names::ad(i, b)), name(names::p_hd_pos(i, !b))))
            })),
        ),
        name(names::NO_P_HD_HERE.into()),
    ));

    equiv(
        &mut out,
        "PHdLetCov",
        Concept::or(name(names::p_hd_let(false)), name(names::p_hd_let(true))),
        name(names::lvl(0)),
    );
    for a in [false, true] {
        out.push(gci(
            format!("RetrPHdLet[{}]", u8::from(a)),
            Concept::and(
                name(names::lvl(0)),
                exists_chain(
                    n,
                    Concept::and(name(names::P_HD_HERE.into()), name(names::letter(a))),
                ),
            ),
            name(names::p_hd_let(a)),
        ));
        out.push(gci(
            format!("PHdLetUnique[{}]", u8::from(a)),
            Concept::and(name(names::lvl(0)), name(names::p_hd_let(a))),
            forall_chain(
                n,
                Concept::implies(name(names::P_HD_HERE.into()), name(names::letter(a))),
            ),
        ));
    }

    equiv(
        &mut out,
        "PHdAbvCov",
        Concept::or(
            name(names::P_HD_ABV.into()),
            name(names::NO_P_HD_ABV.into()),
        ),
        name(names::lvl(n + 1)),
    );
    out.push(gci(
        "PHdAbvDisj".into(),
        Concept::and(
            name(names::P_HD_ABV.into()),
            name(names::NO_P_HD_ABV.into()),
        ),
        Concept::Bottom,
    ));
    for (label, here, above) in [
        ("PropPHdAbv", names::P_HD_HERE, names::P_HD_ABV),
        ("PropNoPHdAbv", names::NO_P_HD_HERE, names::NO_P_HD_ABV),
    ] {
        out.push(gci(
            label.into(),
            name(here.into()),
            Concept::forall(
                names::ell(n + 1),
                Concept::forall(
                    names::rr(n + 1),
                    Concept::implies(name(names::lvl(n + 1)), name(above.into())),
                ),
            ),
        ));
    }

    for t in atm.delta() {
        let phd = |i, b| names::p_hd_pos(i, b);
        let hd = |i, b| names::hd_pos(i, b);
        let arithmetic = match t.dir {
            Dir::Right => increment(n, &phd, &hd),
            Dir::Left => increment(n, &hd, &phd),
        };
        out.push(gci(
            format!("TransiCons[{}]", names::transition_tag(t)),
            name(names::pr_tr(t)),
            Concept::and_all([
                name(names::p_hd_let(t.write)),
                name(names::st(&t.target)),
                arithmetic,
            ]),
        ));
    }

    out.push(gci(
        "InitConf".into(),
        name(names::INIT.into()),
        Concept::and_all(
            [
                name(names::lvl(0)),
                name(names::L.into()),
                name(names::st(atm.initial_state())),
            ]
            .into_iter()
            .chain((1..=n).map(|i| {
                Concept::and(
                    name(names::hd_pos(i, false)),
                    name(names::p_hd_pos(i, false)),
                )
            }))
            .chain([forall_chain(
                n,
                Concept::implies(name(names::lvl(n)), name(names::letter(false))),
            )]),
        ),
    ));

    out
}

fn non_final(atm: &Atm, existential: bool) -> impl Iterator<Item = &String> {
    atm.states()
        .iter()
        .filter(move |s| !atm.is_final(s) && atm.is_existential(s) == existential)
}

/// The machine knowledge base `K_M = (A_M, T_M)`: the enriched-tree axioms
/// plus configuration succession, head-position transfer, transition choice
/// and rejection-freeness. With `tbox_only` the ABox is empty and the GCI
/// `⊤ ⊑ ∃aux.Init` takes its place.
pub fn kb_machine(atm: &Atm, tbox_only: bool) -> KnowledgeBase {
    let mut tbox = kb_enr(atm);
    let n = atm.n();

    // Non-final existential configurations have one successor (labelled L),
    // universal ones two (one L, one R); final ones none.
    for s in non_final(atm, true) {
        tbox.push(gci(
            format!("EConfSucc[{s}]"),
            name(names::st(s)),
            Concept::and(
                Concept::exists(names::NEXT, Concept::Top),
                Concept::forall(names::NEXT, name(names::L.into())),
            ),
        ));
    }
    for s in non_final(atm, false) {
        tbox.push(gci(
            format!("AConfSucc[{s}]"),
            name(names::st(s)),
            Concept::and(
                Concept::exists(names::NEXT, name(names::L.into())),
                Concept::exists(names::NEXT, name(names::R.into())),
            ),
        ));
    }
    for s in [atm.accepting_state(), atm.rejecting_state()] {
        tbox.push(gci(
            format!("FinConfSucc[{s}]"),
            name(names::st(s)),
            Concept::forall(names::NEXT, Concept::Bottom),
        ));
    }

    for i in 1..=n {
        for b in [false, true] {
            tbox.push(gci(
                format!("TransHeadPos[{i},{}]", u8::from(b)),
                Concept::and(name(names::lvl(0)), name(names::hd_pos(i, b))),
                Concept::forall(names::NEXT, name(names::p_hd_pos(i, b))),
            ));
        }
    }

    for s in non_final(atm, true) {
        for a in [false, true] {
            tbox.push(gci(
                format!("TransiExistState[{s},{}]", u8::from(a)),
                Concept::and(name(names::st(s)), name(names::hd_let(a))),
                Concept::or_all(
                    atm.transitions_at(s, a)
                        .iter()
                        .map(|t| Concept::forall(names::NEXT, name(names::pr_tr(t)))),
                ),
            ));
        }
    }
    for s in non_final(atm, false) {
        for a in [false, true] {
            let ts = atm.transitions_at(s, a);
            for (label, side, t) in [
                ("TransiUnivStateL", names::L, ts[0]),
                ("TransiUnivStateR", names::R, ts[1]),
            ] {
                tbox.push(gci(
                    format!("{label}[{s},{}]", u8::from(a)),
                    Concept::and(name(names::st(s)), name(names::hd_let(a))),
                    Concept::forall(
                        names::NEXT,
                        Concept::implies(name(side.into()), name(names::pr_tr(t))),
                    ),
                ));
            }
        }
    }

    tbox.push(gci(
        "NoRejectState".into(),
        name(names::st(atm.rejecting_state())),
        Concept::Bottom,
    ));

    let mut abox = Vec::new();
    if tbox_only {
        tbox.push(gci(
            "AuxInit".into(),
            Concept::Top,
            Concept::exists(names::AUX, name(names::INIT.into())),
        ));
    } else {
        abox.push(Assertion::Concept {
            concept: name(names::INIT.into()),
            individual: names::INIT_INDIVIDUAL.to_string(),
            label: Some("InitAssertion".to_string()),
        });
    }

    KnowledgeBase { abox, tbox }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;
    use crate::dl::Interpretation;
    use crate::reduction::schema_of;

    fn find<'a>(gcis: &'a [Gci], label: &str) -> &'a Gci {
        gcis.iter()
            .find(|g| g.label.as_deref() == Some(label))
            .unwrap_or_else(|| panic!("no axiom labelled {label}"))
    }

    #[test]
    fn unit_kb_rejects_depth_zero() {
        assert_eq!(kb_unit(0).unwrap_err(), ReductionError::UnitDepthZero);
    }

    #[test]
    fn lvlcov_shape_for_depth_two() {
        let gcis = kb_unit(2).unwrap();
        let ax = find(&gcis, "LvlCov");
        assert_eq!(ax.lhs, Concept::Top);
        assert_eq!(
            ax.rhs,
            Concept::or(
                name("Lvl_0".into()),
                Concept::or(name("Lvl_1".into()), name("Lvl_2".into()))
            )
        );
    }

    #[test]
    fn unit_kb_count_matches_closed_form() {
        // Per index ranges: 6 constant axioms + LvlDisj n(n+1)/2 + 7n for the
        // per-level families + AdLvlDisj n(n+1) + PropBit accounted in the 7n.
        let closed_form = |n: usize| 6 + n * (n + 1) / 2 + 7 * n + n * (n + 1);
        for n in 1..=4u32 {
            assert_eq!(kb_unit(n).unwrap().len(), closed_form(n as usize), "n={n}");
        }
    }

    #[test]
    fn conf_kb_contains_the_broadcast_chain() {
        let atm = tiny_acceptor();
        let gcis = kb_conf(&atm);
        let ax = find(&gcis, "PropHdPos[1,0]");
        assert_eq!(
            ax.lhs,
            Concept::and(name("Lvl_0".into()), name("HdPos_1^0".into()))
        );
        // N = 1, so the chain is ∀ell_1.∀r_1.(Lvl_1 → HdPos_1^0).
        assert_eq!(
            ax.rhs,
            Concept::forall(
                "ell_1",
                Concept::forall(
                    "r_1",
                    Concept::implies(name("Lvl_1".into()), name("HdPos_1^0".into()))
                )
            )
        );
    }

    #[test]
    fn hd_here_equal_adr_compares_bitwise() {
        let atm = tiny_acceptor();
        let gcis = kb_conf(&atm);
        let ax = find(&gcis, "HdHereEqualAdr");
        assert_eq!(
            ax.lhs,
            Concept::and(
                name("Lvl_1".into()),
                Concept::or(
                    Concept::and(name("Ad_1^0".into()), name("HdPos_1^0".into())),
                    Concept::and(name("Ad_1^1".into()), name("HdPos_1^1".into()))
                )
            )
        );
    }

    #[test]
    fn increment_gadget_is_true_exactly_on_successor_pairs() {
        // Independent oracle: evaluate the gadget on a scratch interpretation
        // with one element per (prev, cur) pair of 3-bit addresses.
        let n = 3u32;
        let gadget = increment(n, &names::p_hd_pos, &names::hd_pos);
        let mut interp = Interpretation::new();
        let width = 1usize << n;
        for prev in 0..width {
            for cur in 0..width {
                let e = format!("p{prev}c{cur}");
                interp.add_element(e.clone());
                for i in 1..=n {
                    let pb = prev & (1 << (n - i)) != 0;
                    let cb = cur & (1 << (n - i)) != 0;
                    interp.add_to_concept(names::p_hd_pos(i, pb), e.clone());
                    interp.add_to_concept(names::hd_pos(i, cb), e.clone());
                }
            }
        }
        let ext = interp.eval(&gadget);
        for prev in 0..width {
            for cur in 0..width {
                let expected = cur == prev + 1;
                assert_eq!(
                    ext.contains(&format!("p{prev}c{cur}")),
                    expected,
                    "prev={prev} cur={cur}"
                );
            }
        }
    }

    #[test]
    fn transicons_swaps_families_for_left_moves() {
        let atm = tiny_acceptor();
        let gcis = kb_enr(&atm);
        // Right move: pivot conjunct starts with PHdPos_1^0 ⊓ HdPos_1^1.
        let right = find(&gcis, "TransiCons[s_init.0.0.e1.+1]");
        let shown = format!("{:?}", right.rhs);
        assert!(shown.contains("PHdPos_1^0") && shown.contains("HdPos_1^1"));
        // Left move: families swapped.
        let left = find(&gcis, "TransiCons[e1.0.0.s_acc.-1]");
        let shown = format!("{:?}", left.rhs);
        assert!(shown.contains("HdPos_1^0") && shown.contains("PHdPos_1^1"));
    }

    #[test]
    fn init_conf_forces_the_all_zero_tape() {
        let atm = tiny_acceptor();
        let gcis = kb_enr(&atm);
        let ax = find(&gcis, "InitConf");
        let shown = format!("{:?}", ax.rhs);
        assert!(shown.contains("HdPos_1^0") && shown.contains("PHdPos_1^0"));
        assert!(shown.contains("Let_0"));
        assert!(shown.contains("St_s_init"));
    }

    #[test]
    fn machine_kb_succession_axioms() {
        let atm = tiny_acceptor();
        let kb = kb_machine(&atm, false);
        let ax = find(&kb.tbox, "AConfSucc[s_init]");
        assert_eq!(
            ax.rhs,
            Concept::and(
                Concept::exists("next", name("L".into())),
                Concept::exists("next", name("R".into()))
            )
        );
        let ax = find(&kb.tbox, "EConfSucc[e1]");
        assert_eq!(
            ax.rhs,
            Concept::and(
                Concept::exists("next", Concept::Top),
                Concept::forall("next", name("L".into()))
            )
        );
        let ax = find(&kb.tbox, "NoRejectState");
        assert_eq!(ax.lhs, name("St_s_rej".into()));
        assert_eq!(ax.rhs, Concept::Bottom);
        let ax = find(&kb.tbox, "TransiUnivStateL[s_init,0]");
        assert_eq!(
            ax.rhs,
            Concept::forall(
                "next",
                Concept::implies(name("L".into()), name("PrTr_s_init.0.0.e1.+1".into()))
            )
        );
        // Both final states get the no-successor axiom, even though the
        // rejecting instance is vacuous under NoRejectState.
        find(&kb.tbox, "FinConfSucc[s_acc]");
        find(&kb.tbox, "FinConfSucc[s_rej]");
        assert_eq!(kb.abox.len(), 1);
    }

    #[test]
    fn machine_kb_axiom_count_matches_closed_form() {
        // Symbolically derived from the index ranges, with the reference
        // machine's state and transition counts (q = 4 states, m = 8
        // transitions, one non-final state of each kind) fixed.
        let count = |n: usize| {
            let unit = 6 + (n + 1) * (n + 2) / 2 + 7 * (n + 1) + (n + 1) * (n + 2);
            let conf = 20 + 6 + 5 * n;
            let enr = 18 + 2 * 8 + 8 * 7 / 2 + 5 * n;
            let machine = 1 + 1 + 2 + 2 * n + 2 + 4 + 1;
            unit + conf + enr + machine
        };
        for n in 1..=6u32 {
            let atm = tiny_acceptor().with_tape_exponent(n);
            let kb = kb_machine(&atm, false);
            assert_eq!(kb.tbox.len(), count(n as usize), "n={n}");
        }
    }

    #[test]
    fn schema_of_strips_indices_and_directions() {
        assert_eq!(schema_of("LvlDisj[1,3]"), "LvlDisj");
        assert_eq!(schema_of("leaves-next-loop.fwd"), "leaves-next-loop");
        assert_eq!(schema_of("HdPosCov[2].bwd"), "HdPosCov");
        assert_eq!(schema_of("TransiCons[e1.0.1.s_acc.-1]"), "TransiCons");
        assert_eq!(schema_of("NoRejectState"), "NoRejectState");
    }
}
