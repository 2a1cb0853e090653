//! Provenance-label grammar: `Schema`, `Schema[indices]`, optionally suffixed
//! `.fwd`/`.bwd` for the two halves of an equivalence. Indices are numbers,
//! bits, state ids or transition tags, depending on the schema.

use crate::atm::Atm;
use crate::names;

/// Every axiom schema the generator can emit, grouped by layer.
pub const ALL_SCHEMAS: &[&str] = &[
    // units
    "LvlCov",
    "LvlDisj",
    "all-loops-but-next",
    "leaves-next-loop",
    "LRCov",
    "LRDisj",
    "LsuccLvl",
    "RsuccLvl",
    "LBitZero",
    "RBitOne",
    "AdDisj",
    "AdLvlDisj",
    "PropBit",
    // configuration trees
    "StCov",
    "StDisj",
    "LetDisj",
    "LetCov",
    "LetConDisj",
    "LetConCov",
    "EncLetZero",
    "EncLetOne",
    "HdPosCov",
    "HdPosDisj",
    "PropHdPos",
    "HdHereCov",
    "HdHereEqualAdr",
    "NoHdHereDiffrAdr",
    "HdLetCov",
    "RetrHdLet",
    "HdLetUnique",
    // enriched trees
    "TrCov",
    "TrInitDisj",
    "TrDisj",
    "PHdPosCov",
    "PHdPosDisj",
    "PropPHdPos",
    "PHdHereCov",
    "PHdHereEqualAdr",
    "NoPHdHereDiffAdr",
    "PHdLetCov",
    "RetrPHdLet",
    "PHdLetUnique",
    "PHdAbvCov",
    "PHdAbvDisj",
    "PropPHdAbv",
    "PropNoPHdAbv",
    "TransiCons",
    "InitConf",
    // machine
    "EConfSucc",
    "AConfSucc",
    "FinConfSucc",
    "TransHeadPos",
    "TransiExistState",
    "TransiUnivStateL",
    "TransiUnivStateR",
    "NoRejectState",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Fwd,
    Bwd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedLabel {
    pub schema: String,
    pub indices: Vec<String>,
    pub direction: Option<Direction>,
}

/// Parses a label into schema name, index list and equivalence direction.
pub fn parse_label(label: &str) -> Option<ParsedLabel> {
    let (body, direction) = if let Some(b) = label.strip_suffix(".fwd") {
        (b, Some(Direction::Fwd))
    } else if let Some(b) = label.strip_suffix(".bwd") {
        (b, Some(Direction::Bwd))
    } else {
        (label, None)
    };
    let (schema, indices) = match body.find('[') {
        None => (body.to_string(), Vec::new()),
        Some(open) => {
            let close = body.rfind(']')?;
            if close != body.len() - 1 || close < open {
                return None;
            }
            let inner = &body[open + 1..close];
            if inner.is_empty() {
                return None;
            }
            (
                body[..open].to_string(),
                inner.split(',').map(str::to_string).collect(),
            )
        }
    };
    if schema.is_empty() {
        return None;
    }
    Some(ParsedLabel {
        schema,
        indices,
        direction,
    })
}

fn parse_num(s: &str) -> Option<u32> {
    s.parse().ok()
}

fn is_bit(s: &str) -> bool {
    s == "0" || s == "1"
}

/// Checks that the indices of a parsed label lie in the ranges the schema is
/// emitted for, relative to the given machine.
pub fn validate_label(label: &ParsedLabel, atm: &Atm) -> bool {
    let n = atm.n();
    let depth = n + 1;
    let idx = &label.indices;
    let num = |k: usize| idx.get(k).and_then(|s| parse_num(s));
    let state_ok = |k: usize| idx.get(k).is_some_and(|s| atm.states().contains(s));
    let bit_ok = |k: usize| idx.get(k).is_some_and(|s| is_bit(s));
    let transition_ok = |k: usize| {
        idx.get(k)
            .is_some_and(|s| atm.delta().iter().any(|t| &names::transition_tag(t) == s))
    };

    match label.schema.as_str() {
        "LvlCov" | "all-loops-but-next" | "leaves-next-loop" | "LRCov" | "LRDisj" | "StCov"
        | "LetDisj" | "LetCov" | "LetConDisj" | "LetConCov" | "EncLetZero" | "EncLetOne"
        | "HdHereCov" | "HdHereEqualAdr" | "NoHdHereDiffrAdr" | "HdLetCov" | "TrCov"
        | "PHdHereCov" | "PHdHereEqualAdr" | "NoPHdHereDiffAdr" | "PHdLetCov" | "PHdAbvCov"
        | "PHdAbvDisj" | "PropPHdAbv" | "PropNoPHdAbv" | "InitConf" | "NoRejectState"
        | "InitAssertion" | "AuxInit" => idx.is_empty(),
        "LvlDisj" => {
            idx.len() == 2 && matches!((num(0), num(1)), (Some(i), Some(j)) if i < j && j <= depth)
        }
        "LsuccLvl" | "RsuccLvl" => idx.len() == 1 && matches!(num(0), Some(i) if i < depth),
        "LBitZero" | "RBitOne" | "AdDisj" => {
            idx.len() == 1 && matches!(num(0), Some(i) if (1..=depth).contains(&i))
        }
        "AdLvlDisj" => {
            idx.len() == 3
                && matches!((num(0), num(1)), (Some(i), Some(j)) if (1..=depth).contains(&i) && j < i)
                && bit_ok(2)
        }
        "PropBit" => {
            idx.len() == 2 && matches!(num(0), Some(i) if (1..=depth).contains(&i)) && bit_ok(1)
        }
        "StDisj" => idx.len() == 2 && state_ok(0) && state_ok(1) && idx[0] != idx[1],
        "HdPosCov" | "HdPosDisj" | "PHdPosCov" | "PHdPosDisj" => {
            idx.len() == 1 && matches!(num(0), Some(i) if (1..=n).contains(&i))
        }
        "PropHdPos" | "PropPHdPos" | "TransHeadPos" => {
            idx.len() == 2 && matches!(num(0), Some(i) if (1..=n).contains(&i)) && bit_ok(1)
        }
        "RetrHdLet" | "HdLetUnique" | "RetrPHdLet" | "PHdLetUnique" => idx.len() == 1 && bit_ok(0),
        "TrInitDisj" | "TransiCons" => idx.len() == 1 && transition_ok(0),
        "TrDisj" => idx.len() == 2 && transition_ok(0) && transition_ok(1) && idx[0] != idx[1],
        "EConfSucc" => {
            idx.len() == 1 && state_ok(0) && atm.is_existential(&idx[0]) && !atm.is_final(&idx[0])
        }
        "AConfSucc" => {
            idx.len() == 1 && state_ok(0) && !atm.is_existential(&idx[0]) && !atm.is_final(&idx[0])
        }
        "FinConfSucc" => idx.len() == 1 && state_ok(0) && atm.is_final(&idx[0]),
        "TransiExistState" => {
            idx.len() == 2 && state_ok(0) && atm.is_existential(&idx[0]) && bit_ok(1)
        }
        "TransiUnivStateL" | "TransiUnivStateR" => {
            idx.len() == 2 && state_ok(0) && !atm.is_existential(&idx[0]) && bit_ok(1)
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;

    #[test]
    fn parse_round_trips_the_common_forms() {
        let p = parse_label("LvlDisj[1,3]").unwrap();
        assert_eq!(p.schema, "LvlDisj");
        assert_eq!(p.indices, ["1", "3"]);
        assert_eq!(p.direction, None);

        let p = parse_label("leaves-next-loop.bwd").unwrap();
        assert_eq!(p.schema, "leaves-next-loop");
        assert!(p.indices.is_empty());
        assert_eq!(p.direction, Some(Direction::Bwd));

        let p = parse_label("TrDisj[e1.0.0.s_acc.-1,e1.0.1.s_acc.-1]").unwrap();
        assert_eq!(p.indices.len(), 2);

        assert!(parse_label("Broken[").is_none());
        assert!(parse_label("[1]").is_none());
    }

    #[test]
    fn validation_checks_ranges() {
        let atm = tiny_acceptor();
        let ok = |s: &str| validate_label(&parse_label(s).unwrap(), &atm);
        assert!(ok("LvlDisj[0,2]"));
        assert!(!ok("LvlDisj[2,2]"));
        assert!(!ok("LvlDisj[0,3]"));
        assert!(ok("StDisj[s_init,e1]"));
        assert!(!ok("StDisj[s_init,nope]"));
        assert!(ok("TransiCons[s_init.0.0.e1.+1]"));
        assert!(!ok("TransiCons[s_init.0.0.e1.-1]"));
        assert!(ok("EConfSucc[e1]"));
        assert!(!ok("EConfSucc[s_init]"));
        assert!(ok("HdPosCov[1].fwd"));
        assert!(!ok("HdPosCov[2]"));
    }
}
