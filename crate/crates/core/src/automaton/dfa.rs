//! Complete DFAs and conversion to regexes by state elimination.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::regex::{Regex, Variable};
use super::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    /// `delta[state][symbol index]`.
    pub delta: Vec<Vec<usize>>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
}

impl Dfa {
    pub fn new(
        alphabet: Vec<String>,
        delta: Vec<Vec<usize>>,
        start: usize,
        accepting: BTreeSet<usize>,
    ) -> Result<Self, AutomatonError> {
        let n = delta.len();
        if n == 0 || start >= n {
            return Err(AutomatonError::Invalid("DFA needs a start state".into()));
        }
        if delta.iter().any(|row| row.len() != alphabet.len() || row.iter().any(|t| *t >= n)) {
            return Err(AutomatonError::Invalid("transition table is not total".into()));
        }
        if accepting.iter().any(|a| *a >= n) {
            return Err(AutomatonError::Invalid("accepting state out of range".into()));
        }
        Ok(Dfa { alphabet, delta, start, accepting })
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    pub fn accepts<S: AsRef<str>>(&self, input: &[S]) -> bool {
        let mut q = self.start;
        for s in input {
            let Some(i) = self.alphabet.iter().position(|a| a == s.as_ref()) else { return false };
            q = self.delta[q][i];
        }
        self.accepting.contains(&q)
    }

    /// An equivalent regex whose variables each accept one symbol, or
    /// `None` if the language is empty. Variables are not yet deduplicated.
    pub fn to_regex(&self) -> Option<Regex> {
        let n = self.states();
        // GNFA: states 0..n, start n, final n+1.
        let (s, f) = (n, n + 1);
        let mut r: Vec<Vec<Option<Regex>>> = vec![vec![None; n + 2]; n + 2];
        for q in 0..n {
            for (i, &t) in self.delta[q].iter().enumerate() {
                let sym = Regex::Var(Variable::symbol(self.alphabet[i].clone()));
                r[q][t] = Some(match r[q][t].take() {
                    None => sym,
                    Some(e) => Regex::union(e, sym),
                });
            }
        }
        r[s][self.start] = Some(Regex::Eps);
        for &a in &self.accepting {
            r[a][f] = Some(Regex::Eps);
        }
        let mut alive: Vec<usize> = (0..n).collect();
        while let Some(q) = alive.pop() {
            let loop_ = r[q][q].take().map(star);
            let ins: Vec<usize> = alive.iter().copied().chain([s]).filter(|&i| r[i][q].is_some()).collect();
            let outs: Vec<usize> = alive.iter().copied().chain([f]).filter(|&j| r[q][j].is_some()).collect();
            for &i in &ins {
                for &j in &outs {
                    let mut path = r[i][q].clone().unwrap();
                    if let Some(l) = &loop_ {
                        path = cat(path, l.clone());
                    }
                    path = cat(path, r[q][j].clone().unwrap());
                    r[i][j] = Some(match r[i][j].take() {
                        None => path,
                        Some(e) => Regex::union(e, path),
                    });
                }
            }
            for i in 0..n + 2 {
                r[i][q] = None;
                r[q][i] = None;
            }
        }
        r[s][f].take()
    }
}

fn cat(a: Regex, b: Regex) -> Regex {
    match (a, b) {
        (Regex::Eps, b) => b,
        (a, Regex::Eps) => a,
        (a, b) => Regex::concat(a, b),
    }
}

fn star(a: Regex) -> Regex {
    match a {
        Regex::Eps => Regex::Eps,
        s @ Regex::Star(_) => s,
        a => Regex::star(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ParserAutomaton;

    #[test]
    fn even_number_of_a() {
        let d = Dfa::new(vec!["a".into(), "b".into()], vec![vec![1, 0], vec![0, 1]], 0, BTreeSet::from([0])).unwrap();
        let r = d.to_regex().unwrap().dedupe_variables();
        let pa = ParserAutomaton::from_regex(&r).unwrap();
        for s in [vec![], vec!["a", "a"], vec!["b", "a", "b", "a"]] {
            assert!(d.accepts(&s) && pa.accepts(&s));
        }
        for s in [vec!["a"], vec!["a", "b", "b"]] {
            assert!(!d.accepts(&s) && !pa.accepts(&s));
        }
    }

    #[test]
    fn empty_language() {
        let d = Dfa::new(vec!["a".into()], vec![vec![0]], 0, BTreeSet::new()).unwrap();
        assert!(d.to_regex().is_none());
    }

    #[test]
    fn rejects_partial_table() {
        assert!(Dfa::new(vec!["a".into()], vec![vec![]], 0, BTreeSet::new()).is_err());
    }
}
