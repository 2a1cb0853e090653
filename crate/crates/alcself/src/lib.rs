//! A desk-scale workbench for the reduction from alternating Turing machines
//! to conjunctive-query entailment over ALC+Self knowledge bases.
//!
//! The crate is organised around four pillars:
//!
//! - [`atm`]: alternating Turing machines over a binary alphabet with an
//!   exponential tape, their (quasi-)runs and an acceptance oracle;
//! - [`dl`]: ALC+Self concepts, knowledge bases, finite interpretations and a
//!   model checker;
//! - [`cq`]: conjunctive queries, match enumeration and homomorphism search;
//! - [`reduction`] and [`witness`]: the machine-to-(KB, query) compiler and
//!   the builders for its intended models (configuration units, configuration
//!   trees, enriched trees, quasi-computation trees).
//!
//! [`serial`] provides the file formats, [`lemmas`] the verification suites
//! behind `alcself verify-lemmas`, and [`cli`] the batch entry point.

pub mod atm;
pub mod cli;
pub mod cq;
pub mod dl;
pub mod lemmas;
pub mod names;
pub mod reduction;
pub mod serial;
pub mod witness;

pub(crate) mod gen;
