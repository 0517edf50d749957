use std::collections::BTreeSet;

use crate::automaton::Regex;

#[derive(Debug, Clone)]
enum Edge {
    Eps(usize),
    Tokens(BTreeSet<String>, usize),
}

/// Thompson construction: one start, one accept, ε-edges between fragments.
#[derive(Debug, Clone)]
pub struct Nfa {
    edges: Vec<Vec<Edge>>,
    start: usize,
    accept: usize,
}

impl Nfa {
    pub fn from_regex(r: &Regex) -> Self {
        let mut nfa = Nfa { edges: Vec::new(), start: 0, accept: 0 };
        let (s, a) = nfa.fragment(r);
        nfa.start = s;
        nfa.accept = a;
        nfa
    }

    fn node(&mut self) -> usize {
        self.edges.push(Vec::new());
        self.edges.len() - 1
    }

    fn fragment(&mut self, r: &Regex) -> (usize, usize) {
        let (s, a) = (self.node(), self.node());
        match r {
            Regex::Var(v) => self.edges[s].push(Edge::Tokens(v.accepts.clone(), a)),
            Regex::Eps => self.edges[s].push(Edge::Eps(a)),
            Regex::Concat(x, y) => {
                let (xs, xa) = self.fragment(x);
                let (ys, ya) = self.fragment(y);
                self.edges[s].push(Edge::Eps(xs));
                self.edges[xa].push(Edge::Eps(ys));
                self.edges[ya].push(Edge::Eps(a));
            }
            Regex::Union(x, y) => {
                for sub in [x, y] {
                    let (fs, fa) = self.fragment(sub);
                    self.edges[s].push(Edge::Eps(fs));
                    self.edges[fa].push(Edge::Eps(a));
                }
            }
            Regex::Star(x) => {
                let (xs, xa) = self.fragment(x);
                self.edges[s].push(Edge::Eps(xs));
                self.edges[s].push(Edge::Eps(a));
                self.edges[xa].push(Edge::Eps(xs));
                self.edges[xa].push(Edge::Eps(a));
            }
        }
        (s, a)
    }

    fn closure(&self, mut set: BTreeSet<usize>) -> BTreeSet<usize> {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for e in &self.edges[q] {
                if let Edge::Eps(t) = e {
                    if set.insert(*t) {
                        stack.push(*t);
                    }
                }
            }
        }
        set
    }

    pub fn accepts<S: AsRef<str>>(&self, input: &[S]) -> bool {
        let mut cur = self.closure(BTreeSet::from([self.start]));
        for tok in input {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for e in &self.edges[q] {
                    if let Edge::Tokens(set, t) = e {
                        if set.contains(tok.as_ref()) {
                            next.insert(*t);
                        }
                    }
                }
            }
            if next.is_empty() {
                return false;
            }
            cur = self.closure(next);
        }
        cur.contains(&self.accept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_of_union() {
        let r = Regex::parse("(a | b)* c", |s| BTreeSet::from([s.to_string()])).unwrap();
        let n = Nfa::from_regex(&r);
        assert!(n.accepts(&["a", "b", "a", "c"]));
        assert!(n.accepts(&["c"]));
        assert!(!n.accepts(&["a"]));
    }
}
