//! `h(R ∩ D)`: a parser automaton for `R` and Dyck digits for `D` run in
//! lockstep over preimage symbols, and the homomorphism `h` maps each
//! preimage symbol to the output tokens it emits.

use std::collections::{BTreeMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::dyck::{dyck_step, validate_pairs, BracketPair, DyckStep};
use super::pa::{ParserAutomaton, StateCode};
use super::AutomatonError;

/// Symbol images. Symbols without an entry map to themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    images: BTreeMap<String, Vec<String>>,
}

impl Homomorphism {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn set(&mut self, symbol: impl Into<String>, image: Vec<String>) {
        self.images.insert(symbol.into(), image);
    }

    pub fn image(&self, symbol: &str) -> Vec<String> {
        self.images.get(symbol).cloned().unwrap_or_else(|| vec![symbol.to_string()])
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|(k, v)| v.len() == 1 && &v[0] == k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsConfig {
    /// Most search configurations explored before giving up.
    pub branch_limit: usize,
    /// Deepest total nesting explored.
    pub max_depth: u32,
}

impl Default for CsConfig {
    fn default() -> Self {
        CsConfig { branch_limit: 10_000, max_depth: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsRun {
    pub accepted: bool,
    /// A preimage witnessing acceptance.
    pub preimage: Option<Vec<String>>,
    pub explored: usize,
}

type Config = (usize, StateCode, Vec<u32>);

/// Decide whether `input ∈ h(L(pa) ∩ D(pairs))`.
pub fn cs_compose<S: AsRef<str>>(
    pa: &ParserAutomaton,
    pairs: &[BracketPair],
    h: &Homomorphism,
    input: &[S],
    cfg: &CsConfig,
) -> Result<CsRun, AutomatonError> {
    validate_pairs(pairs)?;
    let input: Vec<&str> = input.iter().map(|s| s.as_ref()).collect();
    let symbols: Vec<(String, Vec<String>)> = pa.regex().alphabet().into_iter().map(|s| {
        let img = h.image(&s);
        (s, img)
    }).collect();

    let start: Config = (0, pa.start(), vec![0; pairs.len()]);
    let mut parent: BTreeMap<Config, (Config, Option<String>)> = BTreeMap::new();
    let mut seen: HashSet<Config> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut truncated = false;

    while let Some(c) = queue.pop_front() {
        let (pos, code, digits) = &c;
        if *pos == input.len() && pa.is_final(code) && digits.iter().all(|d| *d == 0) {
            let mut pre = Vec::new();
            let mut cur = c.clone();
            while let Some((p, sym)) = parent.get(&cur) {
                pre.extend(sym.clone());
                cur = p.clone();
            }
            pre.reverse();
            return Ok(CsRun { accepted: true, preimage: Some(pre), explored: seen.len() });
        }
        let mut next: Vec<(Config, Option<String>)> = Vec::new();
        for e in pa.eps_moves(code) {
            next.push(((*pos, e, digits.clone()), None));
        }
        for (sym, img) in &symbols {
            let end = pos + img.len();
            if end > input.len() || input[*pos..end].iter().zip(img).any(|(a, b)| *a != b) {
                continue;
            }
            let mut nd = digits.clone();
            if dyck_step(pairs, &mut nd, sym) == DyckStep::Underflow {
                continue;
            }
            if nd.iter().sum::<u32>() > cfg.max_depth {
                truncated = true;
                continue;
            }
            for nc in pa.read(code, sym) {
                next.push(((end, nc, nd.clone()), Some(sym.clone())));
            }
        }
        for (n, sym) in next {
            if seen.insert(n.clone()) {
                if seen.len() > cfg.branch_limit {
                    return Err(AutomatonError::BranchLimit(cfg.branch_limit));
                }
                parent.insert(n.clone(), (c.clone(), sym));
                queue.push_back(n);
            }
        }
    }
    if truncated {
        return Err(AutomatonError::DepthLimit(cfg.max_depth));
    }
    Ok(CsRun { accepted: false, preimage: None, explored: seen.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Regex;
    use std::collections::BTreeSet;

    fn ident(s: &str) -> BTreeSet<String> {
        BTreeSet::from([s.to_string()])
    }

    fn chars(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn brackets_inside_regular_frame() {
        let r = Regex::parse("(a | b | r)*", ident).unwrap();
        let pa = ParserAutomaton::from_regex(&r).unwrap();
        let pairs = [BracketPair::new("a", "b")];
        let cfg = CsConfig::default();
        assert!(cs_compose(&pa, &pairs, &Homomorphism::identity(), &chars("arb"), &cfg).unwrap().accepted);
        assert!(!cs_compose(&pa, &pairs, &Homomorphism::identity(), &chars("abb"), &cfg).unwrap().accepted);
    }

    #[test]
    fn erasing_homomorphism() {
        let r = Regex::parse("a x b", ident).unwrap();
        let pa = ParserAutomaton::from_regex(&r).unwrap();
        let mut h = Homomorphism::identity();
        h.set("a", vec![]);
        h.set("b", vec![]);
        let run = cs_compose(&pa, &[BracketPair::new("a", "b")], &h, &["x"], &CsConfig::default()).unwrap();
        assert!(run.accepted);
        assert_eq!(run.preimage.unwrap(), ["a", "x", "b"]);
    }

    #[test]
    fn unbounded_erasure_hits_limit() {
        let r = Regex::parse("(a | x)*", ident).unwrap();
        let pa = ParserAutomaton::from_regex(&r).unwrap();
        let mut h = Homomorphism::identity();
        h.set("a", vec![]);
        let cfg = CsConfig { branch_limit: 500, max_depth: 1_000 };
        let err = cs_compose(&pa, &[BracketPair::new("a", "b")], &h, &["b"], &cfg).unwrap_err();
        assert!(matches!(err, AutomatonError::BranchLimit(500)));
    }
}
