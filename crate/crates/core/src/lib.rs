//! Executable workbench for the free left-distributive algebra on one
//! generator and the critical points of its rank-into-rank interpretation.
//!
//! The crate is split by concern:
//!
//! * [`term`]: terms in one generator, their grammar and printer.
//! * [`laver`]: the finite tables `A_n` and critical-point indices.
//! * [`critcalc`]: a checker for proof scripts over the critical-point calculus.
//! * [`growth`]: the counting functions `Ct_N`, the hierarchy `F_k`, and a
//!   sound symbolic comparator.
//! * [`construction`]: the column construction with count and label audits.
//! * [`report`]: the JSON report shared by every verification suite.

pub mod construction;
pub mod critcalc;
pub mod growth;
pub mod laver;
pub mod report;
pub mod term;

pub use term::{j_sub, parse_term, render_term, NameTable, Term};
