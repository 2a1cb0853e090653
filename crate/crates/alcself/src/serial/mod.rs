//! Bit-exact file formats: machines and interpretations as canonical JSON
//! (`.atm.json`, `.interp.json`), knowledge bases as line-oriented dltext
//! (`.kb.dl`) with an OWL 2 functional-style export (`.kb.ofn`), and queries
//! as a small text format (`.cq`). Emission is canonical and byte-stable;
//! every parse of an emitted file reproduces the original value.

mod cqtext;
mod dltext;
mod json;
mod owlfs;

pub use cqtext::{emit_cq, parse_cq};
pub use dltext::{emit_kb_dltext, parse_kb};
pub use json::{emit_atm, emit_interp, parse_atm, parse_interp};
pub use owlfs::emit_kb_owlfs;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerialError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("machine validation failed: {0}")]
    InvalidAtm(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("owlfs is an export-only format")]
    ExportOnly,
    #[error("invalid query: {0}")]
    InvalidCq(String),
    #[error("extension element {element} is outside the domain")]
    OutsideDomain { element: String },
}

impl SerialError {
    fn parse(line: usize, column: usize, message: impl Into<String>) -> SerialError {
        SerialError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
