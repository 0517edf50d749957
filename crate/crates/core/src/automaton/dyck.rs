//! Dyck acceptance with one counter digit per bracket pair.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketPair {
    pub open: String,
    pub close: String,
}

impl BracketPair {
    pub fn new(open: impl Into<String>, close: impl Into<String>) -> Self {
        BracketPair { open: open.into(), close: close.into() }
    }
}

pub fn validate_pairs(pairs: &[BracketPair]) -> Result<(), AutomatonError> {
    let mut seen = BTreeSet::new();
    for p in pairs {
        if p.open.is_empty() || p.close.is_empty() || !seen.insert(&p.open) || !seen.insert(&p.close) {
            return Err(AutomatonError::BadPairs);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DyckStep {
    /// Not a bracket symbol.
    Neutral,
    Moved,
    /// A closer with no matching opener.
    Underflow,
}

/// Apply one symbol to the digits in place.
pub fn dyck_step(pairs: &[BracketPair], digits: &mut [u32], sym: &str) -> DyckStep {
    for (i, p) in pairs.iter().enumerate() {
        if p.open == sym {
            digits[i] += 1;
            return DyckStep::Moved;
        }
        if p.close == sym {
            if digits[i] == 0 {
                return DyckStep::Underflow;
            }
            digits[i] -= 1;
            return DyckStep::Moved;
        }
    }
    DyckStep::Neutral
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyckRun {
    pub accepted: bool,
    /// Digits after each symbol, starting with all zeros.
    pub trace: Vec<Vec<u32>>,
    /// Index of the closer that had no opener.
    pub underflow_at: Option<usize>,
    pub max_depth: u32,
}

/// Accept iff every digit stays non-negative and all end at zero. Digits
/// count each pair separately, so interleavings such as `( [ ) ]` are
/// accepted.
pub fn dyck_accepts<S: AsRef<str>>(pairs: &[BracketPair], input: &[S]) -> Result<DyckRun, AutomatonError> {
    validate_pairs(pairs)?;
    let mut digits = vec![0u32; pairs.len()];
    let mut trace = vec![digits.clone()];
    let mut max_depth = 0;
    for (i, s) in input.iter().enumerate() {
        match dyck_step(pairs, &mut digits, s.as_ref()) {
            DyckStep::Neutral => return Err(AutomatonError::UnknownSymbol(s.as_ref().to_string())),
            DyckStep::Underflow => {
                return Ok(DyckRun { accepted: false, trace, underflow_at: Some(i), max_depth });
            }
            DyckStep::Moved => {
                max_depth = max_depth.max(digits.iter().copied().sum());
                trace.push(digits.clone());
            }
        }
    }
    let accepted = digits.iter().all(|d| *d == 0);
    Ok(DyckRun { accepted, trace, underflow_at: None, max_depth })
}
