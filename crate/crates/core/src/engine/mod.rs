//! The parser: lexicon and actions, the per-word loop over the brain, and
//! parse-tree readout.

mod parser;
mod rules;
mod trace;
mod tree;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::CircuitError;
use crate::grammar::GrammarError;
use crate::neural::{AreaParams, NeuralError, ProjectionConfig};

pub use parser::{parse_sentence, CompiledGrammar, FailureReason, Parse, ParseFailure, Parser, Verdict};
pub use rules::{apply_rules, Action, Rule, RuleKind, RuleTarget};
pub use trace::{ParseTrace, StepRecord};
pub use tree::{readout, ParseTree, TreeEdge, TreeNode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("malformed rule `{0}`")]
    RuleSyntax(String),
    #[error("rule `{0}` names an unknown area or fiber")]
    UnknownTarget(String),
    #[error("word `{0}` is not in the lexicon")]
    UnknownWord(String),
    #[error("no action for part of speech `{0}`")]
    MissingAction(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Neural(#[from] NeuralError),
}

/// Word → part of speech, and part of speech → action.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    words: Vec<(String, String)>,
    actions: BTreeMap<String, Action>,
}

impl Lexicon {
    pub fn new(words: Vec<(String, String)>, actions: BTreeMap<String, Action>) -> Self {
        Lexicon { words, actions }
    }

    pub fn pos(&self, word: &str) -> Option<&str> {
        self.words.iter().find(|(w, _)| w == word).map(|(_, p)| p.as_str())
    }

    pub fn action(&self, pos: &str) -> Option<&Action> {
        self.actions.get(pos)
    }

    /// Words in declaration order; this is also the order of their Lex blocks.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(|(w, _)| w.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParserOptions {
    pub params: AreaParams,
    pub projection: ProjectionConfig,
    /// Route closure repetitions through recurrent circuits.
    pub circuits: bool,
    /// Rounds used when re-firing an assembly to confirm a tree edge.
    pub recall_rounds: usize,
    /// Fraction of `k` a re-fired assembly must recover.
    pub confirm_threshold: f64,
}

impl Default for ParserOptions {
    fn default() -> Self {
        ParserOptions {
            params: AreaParams::FAST,
            projection: ProjectionConfig::default(),
            circuits: true,
            recall_rounds: 5,
            confirm_threshold: 0.75,
        }
    }
}
