//! Symbolic calculus for comparing critical points and values of the
//! embeddings `j_n`. Proof scripts are checked step by step against a rule
//! catalog; derived facts feed ordering queries, the critical-sequence table
//! check and an audit against the Laver tables.

mod corpus;
mod expr;
mod graph;
mod rules;
mod script;
mod session;

use thiserror::Error;

use crate::laver::LaverError;

pub use corpus::{load_corpus, Corpus, CORPUS_FILES, MAIN_CHAIN, TAIL_CHAIN};
pub use expr::{parse_emb, parse_ord, parse_relation, Emb, Ord, OrdConst, Relation, Subst};
pub use rules::{Lemma, Rule};
pub use script::{parse_scripts, Item, ProofScript, Step};
pub use session::{
    table2_rows, BridgeReport, CellKind, CellStatus, Cmp, Fact, GoalStatus, Justification,
    OrderMatrix, Origin, ScriptReport, Session, Table2Cell, Table2Report, Table2Row, TraceLine,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{script}/{step}: `{rule}` does not give `{relation}`: {msg}")]
    RuleMismatch {
        script: String,
        step: String,
        rule: String,
        relation: String,
        msg: String,
    },
    #[error("{script}/{step}: unknown premise `{premise}`")]
    UnknownPremise {
        script: String,
        step: String,
        premise: String,
    },
    #[error("{script}/{step}: unknown rule `{rule}`")]
    UnknownRule {
        script: String,
        step: String,
        rule: String,
    },
    #[error("{script}/{step} (line {line}): `{relation}` closes a strict cycle")]
    CycleDetected {
        script: String,
        step: String,
        relation: String,
        line: usize,
    },
    #[error("{script}: goal `{goal}` is neither derived nor claimed in the script")]
    GoalUnproved { script: String, goal: String },
    #[error("{script}: duplicate id `{id}`")]
    DuplicateId { script: String, id: String },
    #[error("{script}/{id}: bad definition: {msg}")]
    BadDefinition {
        script: String,
        id: String,
        msg: String,
    },
    #[error("bridge violation at {fact}: {detail}")]
    BridgeViolation { fact: String, detail: String },
    #[error("corpus: {0}")]
    Corpus(String),
    #[error(transparent)]
    Laver(#[from] LaverError),
}
