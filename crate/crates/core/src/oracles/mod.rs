//! Reference deciders used to cross-check the automata: a Thompson NFA for
//! regexes, a prefix counter for bracket balance and CYK for CNF grammars.

pub mod balance;
pub mod cyk;
pub mod nfa;

pub use balance::counter_balanced;
pub use cyk::{cyk_accepts, CnfGrammar, CnfRule};
pub use nfa::Nfa;
