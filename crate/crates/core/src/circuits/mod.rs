//! Circuit constructors: recurrent circuits for Kleene closures and stack
//! circuits for bracket pairs.

pub mod rc;
pub mod stack;

use thiserror::Error;

use crate::neural::NeuralError;

pub use rc::{build_rc, rc_bank, RecurrentCircuit};
pub use stack::{build_sc, run_sc_neural, sc_step, ScRun, ScStep, StackCircuit, DEFAULT_MAX_DEPTH};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("closure has no areas")]
    EmptyClosure,
    #[error("area `{0}` appears twice in a closure or collides with its neighbours")]
    RepeatedArea(String),
    #[error("closing bracket with nothing open")]
    Underflow,
    #[error("stack circuit depth limit {0} exceeded")]
    DepthExceeded(usize),
    #[error("symbol `{0}` is not a bracket of this circuit")]
    UnknownSymbol(String),
    #[error(transparent)]
    Neural(#[from] NeuralError),
}
