//! Sentence parsing on a simulated assembly-calculus brain, with recurrent
//! circuits for Kleene closures and stack circuits for bracket pairs, and the
//! state-coded parser automata that describe what the parser accepts.
//!
//! The neural side is generic over the weight type; [`BrainF32`] and
//! [`ParserF32`] are the usual choices.

pub mod automaton;
pub mod circuits;
pub mod engine;
pub mod grammar;
pub mod neural;
pub mod oracles;
pub mod scalar;

pub use scalar::Weight;

pub type BrainF32 = neural::Brain<f32>;
pub type BrainF64 = neural::Brain<f64>;
pub type ParserF32 = engine::Parser<f32>;
pub type ParserF64 = engine::Parser<f64>;
