//! The dltext knowledge-base format: one axiom per line, prefix notation for
//! compound concepts, an optional `# label:` comment line carrying the
//! following axiom's provenance. ABox assertions come first, then the TBox,
//! both in generation order.
//!
//! ```text
//! # label: InitAssertion
//! Init(a)
//! # label: LvlCov
//! top sub (or Lvl_0 (or Lvl_1 Lvl_2))
//! ```

use std::fmt::Write as _;

use crate::dl::{Assertion, Concept, Gci, KnowledgeBase};
use crate::serial::SerialError;

pub(crate) fn render_concept(c: &Concept, out: &mut String) {
    match c {
        Concept::Top => out.push_str("top"),
        Concept::Bottom => out.push_str("bot"),
        Concept::Name(n) => out.push_str(n),
        Concept::Not(inner) => {
            out.push_str("(not ");
            render_concept(inner, out);
            out.push(')');
        }
        Concept::And(a, b) | Concept::Or(a, b) | Concept::Implies(a, b) => {
            let op = match c {
                Concept::And(..) => "and",
                Concept::Or(..) => "or",
                _ => "implies",
            };
            let _ = write!(out, "({op} ");
            render_concept(a, out);
            out.push(' ');
            render_concept(b, out);
            out.push(')');
        }
        Concept::Exists(role, inner) | Concept::Forall(role, inner) => {
            let op = if matches!(c, Concept::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            let _ = write!(out, "({op} {role} ");
            render_concept(inner, out);
            out.push(')');
        }
        Concept::SelfLoop(role) => {
            let _ = write!(out, "(self {role})");
        }
    }
}

fn concept_string(c: &Concept) -> String {
    let mut s = String::new();
    render_concept(c, &mut s);
    s
}

fn push_label(out: &mut String, label: Option<&str>) {
    if let Some(label) = label {
        let _ = writeln!(out, "# label: {label}");
    }
}

pub fn emit_kb_dltext(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for assertion in &kb.abox {
        push_label(&mut out, assertion.label());
        match assertion {
            Assertion::Concept {
                concept,
                individual,
                ..
            } => {
                let _ = writeln!(out, "{}({})", concept_string(concept), individual);
            }
            Assertion::Role { role, from, to, .. } => {
                let _ = writeln!(out, "{role}({from},{to})");
            }
        }
    }
    for gci in &kb.tbox {
        push_label(&mut out, gci.label.as_deref());
        let _ = writeln!(
            out,
            "{} sub {}",
            concept_string(&gci.lhs),
            concept_string(&gci.rhs)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    Comma,
    Ident(String),
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '.' | '+' | '-')
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Token, usize)>, SerialError> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let column = i + 1;
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '(' => {
                tokens.push((Token::LParen, column));
                chars.next();
            }
            ')' => {
                tokens.push((Token::RParen, column));
                chars.next();
            }
            ',' => {
                tokens.push((Token::Comma, column));
                chars.next();
            }
            c if is_ident_char(c) => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if is_ident_char(c) {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(ident), column));
            }
            other => {
                return Err(SerialError::parse(
                    line_no,
                    column,
                    format!("unexpected character {other:?}"),
                ));
            }
        }
    }
    Ok(tokens)
}

struct LineParser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    line: usize,
}

const KEYWORDS: [&str; 10] = [
    "top", "bot", "not", "and", "or", "exists", "forall", "implies", "self", "sub",
];

impl LineParser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .or_else(|| self.tokens.last())
            .map_or(1, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> SerialError {
        SerialError::parse(self.line, self.column(), message)
    }

    fn next(&mut self) -> Result<&Token, SerialError> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t).ok_or_else(|| {
            SerialError::parse(self.line, self.column(), "unexpected end of line")
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, token: Token) -> Result<(), SerialError> {
        let found = self.next()?.clone();
        if found == token {
            Ok(())
        } else {
            self.pos -= 1;
            Err(self.error(format!("expected {token:?}, found {found:?}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SerialError> {
        match self.next()?.clone() {
            Token::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected {what}, found {other:?}")))
            }
        }
    }

    fn role_or_name(&mut self, what: &str) -> Result<String, SerialError> {
        let s = self.ident(what)?;
        if KEYWORDS.contains(&s.as_str()) {
            self.pos -= 1;
            return Err(self.error(format!("keyword {s:?} cannot be used as {what}")));
        }
        Ok(s)
    }

    fn concept(&mut self) -> Result<Concept, SerialError> {
        match self.next()?.clone() {
            Token::Ident(s) => match s.as_str() {
                "top" => Ok(Concept::Top),
                "bot" => Ok(Concept::Bottom),
                kw if KEYWORDS.contains(&kw) => {
                    self.pos -= 1;
                    Err(self.error(format!("keyword {kw:?} cannot be used as a concept name")))
                }
                _ => Ok(Concept::Name(s)),
            },
            Token::LParen => {
                let op = self.ident("an operator")?;
                let concept = match op.as_str() {
                    "not" => Concept::not(self.concept()?),
                    "and" => Concept::and(self.concept()?, self.concept()?),
                    "or" => Concept::or(self.concept()?, self.concept()?),
                    "implies" => Concept::implies(self.concept()?, self.concept()?),
                    "exists" => {
                        let role = self.role_or_name("a role name")?;
                        Concept::exists(role, self.concept()?)
                    }
                    "forall" => {
                        let role = self.role_or_name("a role name")?;
                        Concept::forall(role, self.concept()?)
                    }
                    "self" => Concept::self_loop(self.role_or_name("a role name")?),
                    other => {
                        self.pos -= 1;
                        return Err(self.error(format!("unknown operator {other:?}")));
                    }
                };
                self.expect(Token::RParen)?;
                Ok(concept)
            }
            other => {
                self.pos -= 1;
                Err(self.error(format!("expected a concept, found {other:?}")))
            }
        }
    }

    fn finished(&self) -> bool {
        self.pos == self.tokens.len()
    }
}

enum Line {
    Gci(Concept, Concept),
    ConceptAssertion(Concept, String),
    RoleAssertion(String, String, String),
}

fn parse_line(tokens: &[(Token, usize)], line_no: usize) -> Result<Line, SerialError> {
    let mut p = LineParser {
        tokens,
        pos: 0,
        line: line_no,
    };
    let lhs = p.concept()?;
    let parsed = match p.peek() {
        Some(Token::Ident(kw)) if kw == "sub" => {
            p.next()?;
            let rhs = p.concept()?;
            Line::Gci(lhs, rhs)
        }
        Some(Token::LParen) => {
            p.next()?;
            let first = p.ident("an individual")?;
            match p.next()?.clone() {
                Token::RParen => Line::ConceptAssertion(lhs, first),
                Token::Comma => {
                    let second = p.ident("an individual")?;
                    p.expect(Token::RParen)?;
                    match lhs {
                        Concept::Name(role) => Line::RoleAssertion(role, first, second),
                        _ => {
                            return Err(SerialError::parse(
                                line_no,
                                1,
                                "role assertions need a plain role name",
                            ))
                        }
                    }
                }
                other => {
                    p.pos -= 1;
                    return Err(p.error(format!("expected ')' or ',', found {other:?}")));
                }
            }
        }
        _ => return Err(p.error("expected 'sub' or an assertion argument list")),
    };
    if !p.finished() {
        return Err(p.error("trailing tokens after the axiom"));
    }
    Ok(parsed)
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, SerialError> {
    if text.trim_start().starts_with("Prefix(") || text.trim_start().starts_with("Ontology(") {
        return Err(SerialError::ExportOnly);
    }
    let mut kb = KnowledgeBase::default();
    let mut pending_label: Option<String> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(label) = comment.trim().strip_prefix("label:") {
                pending_label = Some(label.trim().to_string());
            }
            continue;
        }
        let tokens = tokenize(line, line_no)?;
        let label = pending_label.take();
        match parse_line(&tokens, line_no)? {
            Line::Gci(lhs, rhs) => kb.tbox.push(Gci { lhs, rhs, label }),
            Line::ConceptAssertion(concept, individual) => kb.abox.push(Assertion::Concept {
                concept,
                individual,
                label,
            }),
            Line::RoleAssertion(role, from, to) => kb.abox.push(Assertion::Role {
                role,
                from,
                to,
                label,
            }),
        }
    }
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;
    use crate::reduction::kb_machine;

    #[test]
    fn round_trip_of_the_machine_kb() {
        let kb = kb_machine(&tiny_acceptor(), false);
        let text = emit_kb_dltext(&kb);
        let back = parse_kb(&text).unwrap();
        assert_eq!(kb, back);
        assert_eq!(emit_kb_dltext(&back), text);
    }

    #[test]
    fn equivalences_emit_two_labelled_lines() {
        let kb = kb_machine(&tiny_acceptor(), false);
        let text = emit_kb_dltext(&kb);
        assert!(text.contains("# label: leaves-next-loop.fwd\nLvl_2 sub (self next)\n"));
        assert!(text.contains("# label: leaves-next-loop.bwd\n(self next) sub Lvl_2\n"));
    }

    #[test]
    fn assertions_and_compound_axioms_parse() {
        let text = "
# label: InitAssertion
Init(a)
next(a,b)
(and A (not B)) sub (exists r (self s))
(implies A B)(c)
";
        let kb = parse_kb(text).unwrap();
        assert_eq!(kb.abox.len(), 3);
        assert_eq!(kb.tbox.len(), 1);
        assert_eq!(kb.abox[0].label(), Some("InitAssertion"));
        assert!(matches!(&kb.abox[1], Assertion::Role { role, .. } if role == "next"));
        assert!(matches!(&kb.abox[2], Assertion::Concept { .. }));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_kb("A sub (and B)").unwrap_err();
        match err {
            SerialError::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 1);
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_kb("A").is_err());
        assert!(parse_kb("A sub B C").is_err());
        assert!(parse_kb("A sub |").is_err());
    }

    #[test]
    fn owlfs_input_is_refused() {
        assert_eq!(
            parse_kb("Prefix(:=<http://x#>)").unwrap_err(),
            SerialError::ExportOnly
        );
    }
}
