//! Formal side: regexes over variables, state-coded parser automata, Dyck
//! acceptors, pushdown automata and the composition `h(R ∩ D)`.

pub mod compose;
pub mod dfa;
pub mod dyck;
pub mod pa;
pub mod pda;
pub mod regex;

use thiserror::Error;

pub use compose::{cs_compose, CsConfig, CsRun, Homomorphism};
pub use dfa::Dfa;
pub use dyck::{dyck_accepts, BracketPair, DyckRun};
pub use pa::{compile_variable, concat_pa, epsilon_pa, pa_accepts, star_pa, union_pa, ParserAutomaton, PaRun, StateCode};
pub use pda::{bracket_pda, sc_pda, Pda, PdaRule, PdaRun};
pub use regex::{Regex, Variable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("pattern syntax: {0}")]
    RegexSyntax(String),
    #[error("variable `{0}` accepts no tokens")]
    EmptyVariable(String),
    #[error("variable `{0}` occurs more than once")]
    DuplicateVariable(String),
    #[error("symbol `{0}` is not a bracket of any declared pair")]
    UnknownSymbol(String),
    #[error("bracket pairs must be non-empty and use distinct symbols")]
    BadPairs,
    #[error("search exceeded {0} configurations")]
    BranchLimit(usize),
    #[error("search reached nesting depth {0} without a decision")]
    DepthLimit(u32),
    #[error("invalid automaton: {0}")]
    Invalid(String),
}
