use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CnfRule {
    Pair(String, String, String),
    Terminal(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CnfGrammar {
    pub start: String,
    pub rules: Vec<CnfRule>,
}

impl CnfGrammar {
    /// `S → open S close | r` in normal form:
    /// `S → A C | r`, `C → S B`, `A → open`, `B → close`.
    pub fn nested(open: &str, close: &str, neutral: &str) -> Self {
        let p = |l: &str, a: &str, b: &str| CnfRule::Pair(l.into(), a.into(), b.into());
        let t = |l: &str, a: &str| CnfRule::Terminal(l.into(), a.into());
        CnfGrammar {
            start: "S".into(),
            rules: vec![p("S", "A", "C"), t("S", neutral), p("C", "S", "B"), t("A", open), t("B", close)],
        }
    }

    /// [`CnfGrammar::nested`] plus `S → S S`: nonempty balanced strings with
    /// no `open close` factor.
    pub fn nested_with_concat(open: &str, close: &str, neutral: &str) -> Self {
        let mut g = Self::nested(open, close, neutral);
        g.rules.push(CnfRule::Pair("S".into(), "S".into(), "S".into()));
        g
    }
}

/// Standard CYK table. The empty string is never derived.
pub fn cyk_accepts<S: AsRef<str>>(g: &CnfGrammar, input: &[S]) -> bool {
    let n = input.len();
    if n == 0 {
        return false;
    }
    // table[i][l-1]: nonterminals deriving input[i..i+l]
    let mut table: Vec<Vec<BTreeSet<&str>>> = vec![vec![BTreeSet::new(); n]; n];
    for (i, tok) in input.iter().enumerate() {
        for r in &g.rules {
            if let CnfRule::Terminal(l, t) = r {
                if t == tok.as_ref() {
                    table[i][0].insert(l);
                }
            }
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for r in &g.rules {
                    if let CnfRule::Pair(l, b, c) = r {
                        if table[i][split - 1].contains(b.as_str()) && table[i + split][len - split - 1].contains(c.as_str()) {
                            table[i][len - 1].insert(l);
                        }
                    }
                }
            }
        }
    }
    table[0][n - 1].contains(g.start.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<String> {
        s.chars().map(String::from).collect()
    }

    #[test]
    fn nested_only() {
        let g = CnfGrammar::nested("a", "b", "r");
        assert!(cyk_accepts(&g, &chars("aarbb")));
        assert!(!cyk_accepts(&g, &chars("arbarb")));
    }

    #[test]
    fn with_concat() {
        let g = CnfGrammar::nested_with_concat("a", "b", "r");
        for s in ["r", "arb", "aarbb", "rarbr", "arbarb"] {
            assert!(cyk_accepts(&g, &chars(s)), "{s}");
        }
        for s in ["", "ab", "a", "arbb", "ba"] {
            assert!(!cyk_accepts(&g, &chars(s)), "{s}");
        }
    }
}
