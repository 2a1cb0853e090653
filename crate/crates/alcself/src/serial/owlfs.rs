//! OWL 2 functional-style export. One logical axiom per line, provenance as
//! an `rdfs:label` annotation, `ObjectHasSelf` for the Self concept. Export
//! only; `parse_kb` refuses this format.

use std::fmt::Write as _;

use crate::dl::{Assertion, Concept, KnowledgeBase};

const SIG: &str = "https://alcself.example/sig#";
const ONTOLOGY: &str = "https://alcself.example/ontology";

fn iri(name: &str) -> String {
    let mut out = String::with_capacity(SIG.len() + name.len() + 2);
    out.push('<');
    out.push_str(SIG);
    for c in name.chars() {
        if c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-' | '~' | '+') {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for byte in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "%{byte:02X}");
            }
        }
    }
    out.push('>');
    out
}

fn render(c: &Concept, out: &mut String) {
    match c {
        Concept::Top => out.push_str("owl:Thing"),
        Concept::Bottom => out.push_str("owl:Nothing"),
        Concept::Name(n) => out.push_str(&iri(n)),
        Concept::Not(inner) => {
            out.push_str("ObjectComplementOf(");
            render(inner, out);
            out.push(')');
        }
        Concept::And(a, b) => {
            out.push_str("ObjectIntersectionOf(");
            render(a, out);
            out.push(' ');
            render(b, out);
            out.push(')');
        }
        Concept::Or(a, b) => {
            out.push_str("ObjectUnionOf(");
            render(a, out);
            out.push(' ');
            render(b, out);
            out.push(')');
        }
        // Functional syntax has no implication constructor; expand it.
        Concept::Implies(a, b) => {
            out.push_str("ObjectUnionOf(ObjectComplementOf(");
            render(a, out);
            out.push_str(") ");
            render(b, out);
            out.push(')');
        }
        Concept::Exists(role, inner) => {
            out.push_str("ObjectSomeValuesFrom(");
            out.push_str(&iri(role));
            out.push(' ');
            render(inner, out);
            out.push(')');
        }
        Concept::Forall(role, inner) => {
            out.push_str("ObjectAllValuesFrom(");
            out.push_str(&iri(role));
            out.push(' ');
            render(inner, out);
            out.push(')');
        }
        Concept::SelfLoop(role) => {
            out.push_str("ObjectHasSelf(");
            out.push_str(&iri(role));
            out.push(')');
        }
    }
}

fn annotation(label: Option<&str>) -> String {
    match label {
        Some(l) => format!("Annotation(rdfs:label \"{l}\") "),
        None => String::new(),
    }
}

pub fn emit_kb_owlfs(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)");
    let _ = writeln!(out, "Prefix(rdfs:=<http://www.w3.org/2000/01/rdf-schema#>)");
    let _ = writeln!(out, "Ontology(<{ONTOLOGY}>");
    for assertion in &kb.abox {
        match assertion {
            Assertion::Concept {
                concept,
                individual,
                label,
            } => {
                let mut c = String::new();
                render(concept, &mut c);
                let _ = writeln!(
                    out,
                    "ClassAssertion({}{} {})",
                    annotation(label.as_deref()),
                    c,
                    iri(individual)
                );
            }
            Assertion::Role {
                role,
                from,
                to,
                label,
            } => {
                let _ = writeln!(
                    out,
                    "ObjectPropertyAssertion({}{} {} {})",
                    annotation(label.as_deref()),
                    iri(role),
                    iri(from),
                    iri(to)
                );
            }
        }
    }
    for gci in &kb.tbox {
        let mut lhs = String::new();
        render(&gci.lhs, &mut lhs);
        let mut rhs = String::new();
        render(&gci.rhs, &mut rhs);
        let _ = writeln!(
            out,
            "SubClassOf({}{} {})",
            annotation(gci.label.as_deref()),
            lhs,
            rhs
        );
    }
    out.push_str(")\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atm::tiny_acceptor;
    use crate::reduction::kb_machine;

    #[test]
    fn logical_axiom_count_matches_dltext() {
        let kb = kb_machine(&tiny_acceptor(), false);
        let owl = emit_kb_owlfs(&kb);
        let logical = owl
            .lines()
            .filter(|l| {
                l.starts_with("SubClassOf(")
                    || l.starts_with("ClassAssertion(")
                    || l.starts_with("ObjectPropertyAssertion(")
            })
            .count();
        assert_eq!(logical, kb.axiom_count());
    }

    #[test]
    fn self_concept_uses_object_has_self() {
        let kb = kb_machine(&tiny_acceptor(), false);
        let owl = emit_kb_owlfs(&kb);
        assert!(owl.contains(&format!("ObjectHasSelf(<{SIG}next>)")));
    }

    #[test]
    fn caret_names_are_percent_encoded() {
        assert_eq!(iri("Ad_1^0"), format!("<{SIG}Ad_1%5E0>"));
        assert_eq!(
            iri("PrTr_e1.0.0.s_acc.-1"),
            format!("<{SIG}PrTr_e1.0.0.s_acc.-1>")
        );
    }

    #[test]
    fn export_is_stable() {
        let kb = kb_machine(&tiny_acceptor(), true);
        assert_eq!(emit_kb_owlfs(&kb), emit_kb_owlfs(&kb));
    }
}
