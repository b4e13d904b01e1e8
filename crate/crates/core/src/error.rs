use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid hider strategy: {0}")]
    InvalidHider(String),

    #[error("invalid mixed strategy: {0}")]
    InvalidMix(String),

    #[error("depth {depth} is not on the grid of resolution {m}")]
    OffGrid { depth: Rational, m: u32 },

    #[error("operation requires k = {expected} objects, got k = {got}")]
    UnsupportedK { expected: usize, got: usize },

    #[error("invalid searcher script: {0}")]
    InvalidScript(String),

    #[error("script budget exceeded: stage 1 digs {used}, budget is {budget}")]
    ScriptBudgetExceeded { used: Rational, budget: Rational },

    #[error("no stage-2 rule for an object found in location {0}")]
    MissingStage2Rule(usize),

    #[error("unknown lemma {0}; expected one of 2, 3, 4, 5")]
    UnknownLemma(u32),

    #[error("empty payoff matrix")]
    EmptyMatrix,

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
}
