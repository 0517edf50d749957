//! Nondeterministic pushdown automata, accepting in an accepting state with
//! only the bottom marker left on the stack.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::AutomatonError;

/// On `input` (ε if `None`) with `top` on the stack in state `from`, replace
/// `top` by `push` (first element becomes the new top) and go to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaRule {
    pub from: usize,
    pub input: Option<String>,
    pub top: String,
    pub to: usize,
    pub push: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pda {
    pub states: Vec<String>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
    pub bottom: String,
    pub rules: Vec<PdaRule>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdaRun {
    pub accepted: bool,
    /// Largest number of symbols above the bottom marker on any explored branch.
    pub max_height: usize,
}

impl Pda {
    /// Simulate all branches. `max_height` bounds the stack above the bottom
    /// marker; exceeding it is a resource error.
    pub fn run<S: AsRef<str>>(&self, input: &[S], max_height: usize) -> Result<PdaRun, AutomatonError> {
        type Config = (usize, usize, Vec<String>);
        let mut seen: HashSet<Config> = HashSet::new();
        let mut queue: VecDeque<Config> = VecDeque::new();
        let start = (self.start, 0, vec![self.bottom.clone()]);
        seen.insert(start.clone());
        queue.push_back(start);
        let mut accepted = false;
        let mut peak = 0;
        while let Some((q, pos, stack)) = queue.pop_front() {
            peak = peak.max(stack.len() - 1);
            if pos == input.len() && self.accepting.contains(&q) && stack.len() == 1 && stack[0] == self.bottom {
                accepted = true;
            }
            let Some(top) = stack.last() else { continue };
            for r in self.rules.iter().filter(|r| r.from == q && &r.top == top) {
                let npos = match &r.input {
                    None => pos,
                    Some(s) if pos < input.len() && input[pos].as_ref() == s => pos + 1,
                    Some(_) => continue,
                };
                let mut ns = stack.clone();
                ns.pop();
                ns.extend(r.push.iter().rev().cloned());
                if ns.len().saturating_sub(1) > max_height {
                    return Err(AutomatonError::DepthLimit(max_height as u32));
                }
                let c = (r.to, npos, ns);
                if seen.insert(c.clone()) {
                    queue.push_back(c);
                }
            }
        }
        Ok(PdaRun { accepted, max_height: peak })
    }
}

/// The two-state automaton a stack circuit implements for one bracket pair:
/// state `q0` at depth zero, `P` inside brackets, stack symbol `X` per open
/// bracket over the bottom marker `d0`.
pub fn sc_pda(open: &str, close: &str) -> Pda {
    bracket_pda::<&str>(open, close, &[])
}

/// [`sc_pda`] that also reads `neutral` symbols in either state without
/// touching the stack.
pub fn bracket_pda<S: AsRef<str>>(open: &str, close: &str, neutral: &[S]) -> Pda {
    let r = |from, input: Option<&str>, top: &str, to, push: &[&str]| PdaRule {
        from,
        input: input.map(String::from),
        top: top.to_string(),
        to,
        push: push.iter().map(|s| s.to_string()).collect(),
    };
    let mut rules = vec![
        r(0, Some(open), "d0", 1, &["X", "d0"]),
        r(1, Some(open), "X", 1, &["X", "X"]),
        r(1, Some(close), "X", 1, &[]),
        r(1, None, "d0", 0, &["d0"]),
    ];
    for n in neutral {
        rules.push(r(0, Some(n.as_ref()), "d0", 0, &["d0"]));
        rules.push(r(1, Some(n.as_ref()), "X", 1, &["X"]));
    }
    Pda {
        states: vec!["q0".into(), "P".into()],
        start: 0,
        accepting: BTreeSet::from([0]),
        bottom: "d0".into(),
        rules,
    }
}
