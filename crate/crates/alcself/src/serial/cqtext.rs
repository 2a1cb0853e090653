//! The query text format: a header line listing the distinguished variables,
//! then one atom per line, sorted.
//!
//! ```text
//! answer: x y
//! Lvl_0(main#1)
//! ell_1(main#1,x)
//! ```

use std::fmt::Write as _;

use crate::cq::Cq;
use crate::serial::SerialError;

pub fn emit_cq(cq: &Cq) -> Result<String, SerialError> {
    cq.validate()
        .map_err(|e| SerialError::InvalidCq(e.to_string()))?;
    let mut out = String::new();
    let _ = writeln!(out, "answer: {}", cq.distinguished().join(" "));
    let mut lines: Vec<String> = cq
        .concept_atoms()
        .iter()
        .map(|(c, v)| format!("{c}({v})"))
        .chain(
            cq.role_atoms()
                .iter()
                .map(|(r, a, b)| format!("{r}({a},{b})")),
        )
        .collect();
    lines.sort();
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | '.' | '+' | '-' | '#')
}

fn well_formed(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_symbol_char)
}

pub fn parse_cq(text: &str) -> Result<Cq, SerialError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| SerialError::parse(1, 1, "empty query file"))?;
    let distinguished: Vec<String> = match header.strip_prefix("answer:") {
        Some(rest) => rest.split_whitespace().map(str::to_string).collect(),
        None => {
            return Err(SerialError::parse(
                header_no,
                1,
                "unknown header: expected 'answer: <vars>'",
            ))
        }
    };

    let mut cq = Cq::new();
    for (line_no, line) in lines {
        let open = line
            .find('(')
            .ok_or_else(|| SerialError::parse(line_no, 1, "expected an atom NAME(...)"))?;
        let close = line
            .rfind(')')
            .filter(|&c| c == line.len() - 1 && c > open)
            .ok_or_else(|| SerialError::parse(line_no, line.len(), "unclosed atom"))?;
        let name = &line[..open];
        let args: Vec<&str> = line[open + 1..close].split(',').map(str::trim).collect();
        if !well_formed(name) || args.iter().any(|a| !well_formed(a)) {
            return Err(SerialError::parse(line_no, 1, "malformed atom"));
        }
        match args.as_slice() {
            [v] => cq.add_concept_atom(name, *v),
            [a, b] => cq.add_role_atom(name, *a, *b),
            _ => {
                return Err(SerialError::parse(
                    line_no,
                    open + 1,
                    "atoms take one or two variables",
                ))
            }
        }
    }
    cq.set_distinguished(distinguished);
    cq.validate()
        .map_err(|e| SerialError::InvalidCq(e.to_string()))?;
    Ok(cq)
}
