use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EngineError;
use crate::neural::{Brain, InhibitionState};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Disinhibit,
    Inhibit,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleTarget {
    Area(String),
    Fiber(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub kind: RuleKind,
    pub target: RuleTarget,
}

impl Rule {
    pub fn disinhibit_area(a: impl Into<String>) -> Self {
        Rule { kind: RuleKind::Disinhibit, target: RuleTarget::Area(a.into()) }
    }

    pub fn inhibit_area(a: impl Into<String>) -> Self {
        Rule { kind: RuleKind::Inhibit, target: RuleTarget::Area(a.into()) }
    }

    pub fn disinhibit_fiber(a: impl Into<String>, b: impl Into<String>) -> Self {
        Rule { kind: RuleKind::Disinhibit, target: RuleTarget::Fiber(a.into(), b.into()) }
    }

    pub fn inhibit_fiber(a: impl Into<String>, b: impl Into<String>) -> Self {
        Rule { kind: RuleKind::Inhibit, target: RuleTarget::Fiber(a.into(), b.into()) }
    }

    /// Area names this rule mentions.
    pub fn areas(&self) -> Vec<&str> {
        match &self.target {
            RuleTarget::Area(a) => vec![a],
            RuleTarget::Fiber(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RuleKind::Disinhibit => "disinhibit",
            RuleKind::Inhibit => "inhibit",
        };
        match &self.target {
            RuleTarget::Area(a) => write!(f, "{kind}({a})"),
            RuleTarget::Fiber(a, b) => write!(f, "{kind}({a},{b})"),
        }
    }
}

impl FromStr for Rule {
    type Err = EngineError;

    /// `disinhibit(A)`, `inhibit(A, B)`, whitespace ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EngineError::RuleSyntax(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = compact.find('(').ok_or_else(bad)?;
        if !compact.ends_with(')') {
            return Err(bad());
        }
        let kind = match &compact[..open] {
            "disinhibit" => RuleKind::Disinhibit,
            "inhibit" => RuleKind::Inhibit,
            _ => return Err(bad()),
        };
        let args: Vec<&str> = compact[open + 1..compact.len() - 1].split(',').collect();
        let target = match args.as_slice() {
            [a] if !a.is_empty() => RuleTarget::Area(a.to_string()),
            [a, b] if !a.is_empty() && !b.is_empty() => RuleTarget::Fiber(a.to_string(), b.to_string()),
            _ => return Err(bad()),
        };
        Ok(Rule { kind, target })
    }
}

/// Pre-rules applied before a word's projection, post-rules after.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub pre: Vec<Rule>,
    pub post: Vec<Rule>,
}

impl Action {
    pub fn new(pre: Vec<Rule>, post: Vec<Rule>) -> Self {
        Action { pre, post }
    }
}

/// Apply `rules` in order; a later rule on the same target overrides an
/// earlier one.
pub fn apply_rules<T: Weight>(
    brain: &Brain<T>,
    state: &InhibitionState,
    rules: &[Rule],
) -> Result<InhibitionState, EngineError> {
    let mut next = state.clone();
    for r in rules {
        let on = r.kind == RuleKind::Disinhibit;
        match &r.target {
            RuleTarget::Area(a) => {
                let id = brain.area_id(a).map_err(|_| EngineError::UnknownTarget(r.to_string()))?;
                next.set_area(id, on);
            }
            RuleTarget::Fiber(a, b) => {
                let f = brain.fiber_between(a, b).map_err(|_| EngineError::UnknownTarget(r.to_string()))?;
                next.set_fiber(f, on);
            }
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{build_brain, AreaParams, AreaSpec, FiberSpec};

    fn brain() -> Brain<f32> {
        let p = AreaParams::new(100, 10, 0.1, 0.1).unwrap();
        let areas = [AreaSpec::lexicon("Lex", ["big"], p), AreaSpec::normal("Adj", p)];
        build_brain(&areas, &[FiberSpec::undirected("Lex", "Adj")], 1).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let r: Rule = "disinhibit( Lex , Adj^1 )".parse().unwrap();
        assert_eq!(r, Rule::disinhibit_fiber("Lex", "Adj^1"));
        assert_eq!(r.to_string(), "disinhibit(Lex,Adj^1)");
        assert_eq!("inhibit(Sbj)".parse::<Rule>().unwrap(), Rule::inhibit_area("Sbj"));
        for bad in ["inhibit", "block(A)", "inhibit()", "inhibit(A,B,C)", "inhibit(A"] {
            assert!(bad.parse::<Rule>().is_err(), "{bad}");
        }
    }

    #[test]
    fn empty_rules_keep_state() {
        let b = brain();
        let s = InhibitionState::new();
        assert_eq!(apply_rules(&b, &s, &[]).unwrap(), s);
    }

    #[test]
    fn last_write_wins() {
        let b = brain();
        let rules = [Rule::disinhibit_fiber("Lex", "Adj"), Rule::inhibit_fiber("Lex", "Adj")];
        let s = apply_rules(&b, &InhibitionState::new(), &rules).unwrap();
        assert!(!s.fiber_disinhibited(b.fiber_between("Lex", "Adj").unwrap()));
        let s = apply_rules(&b, &s, &[Rule::disinhibit_fiber("Adj", "Lex")]).unwrap();
        assert!(s.fiber_disinhibited(b.fiber_between("Lex", "Adj").unwrap()));
    }

    #[test]
    fn unknown_target() {
        let b = brain();
        let err = apply_rules(&b, &InhibitionState::new(), &[Rule::inhibit_area("Nope")]).unwrap_err();
        assert!(matches!(err, EngineError::UnknownTarget(_)));
    }
}
