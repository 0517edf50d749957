//! Regular expressions over variables.
//!
//! A variable names a set of accepted tokens (words or part-of-speech tags).
//! Concrete syntax: juxtaposition for concatenation, `|` for union, postfix
//! `*`, parentheses, and `eps` for the empty string.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub accepts: BTreeSet<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: impl Into<String>, accepts: impl IntoIterator<Item = S>) -> Self {
        Variable { name: name.into(), accepts: accepts.into_iter().map(Into::into).collect() }
    }

    /// A variable that accepts exactly the token it is named after.
    pub fn symbol(token: impl Into<String>) -> Self {
        let t = token.into();
        Variable { name: t.clone(), accepts: BTreeSet::from([t]) }
    }

    pub fn accepts(&self, token: &str) -> bool {
        self.accepts.contains(token)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regex {
    Var(Variable),
    Eps,
    Concat(Box<Regex>, Box<Regex>),
    Union(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn var(v: Variable) -> Self {
        Regex::Var(v)
    }

    pub fn concat(a: Regex, b: Regex) -> Self {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn union(a: Regex, b: Regex) -> Self {
        Regex::Union(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Self {
        Regex::Star(Box::new(a))
    }

    /// Left-nested concatenation of a non-empty sequence; `Eps` for an empty one.
    pub fn concat_all(parts: impl IntoIterator<Item = Regex>) -> Self {
        parts.into_iter().reduce(Regex::concat).unwrap_or(Regex::Eps)
    }

    pub fn union_all(parts: impl IntoIterator<Item = Regex>) -> Option<Self> {
        parts.into_iter().reduce(Regex::union)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Var(_) | Regex::Eps => 1,
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Regex::Var(_) | Regex::Eps => 0,
            Regex::Concat(a, b) | Regex::Union(a, b) => 1 + a.depth().max(b.depth()),
            Regex::Star(a) => 1 + a.depth(),
        }
    }

    /// Variables in left-to-right order.
    pub fn variables(&self) -> Vec<&Variable> {
        let mut out = Vec::new();
        self.walk_vars(&mut |v| out.push(v));
        out
    }

    fn walk_vars<'a>(&'a self, f: &mut impl FnMut(&'a Variable)) {
        match self {
            Regex::Var(v) => f(v),
            Regex::Eps => {}
            Regex::Concat(a, b) | Regex::Union(a, b) => {
                a.walk_vars(f);
                b.walk_vars(f);
            }
            Regex::Star(a) => a.walk_vars(f),
        }
    }

    /// Every token some variable accepts.
    pub fn alphabet(&self) -> BTreeSet<String> {
        self.variables().into_iter().flat_map(|v| v.accepts.iter().cloned()).collect()
    }

    /// Rename repeated variable names to `name#2`, `name#3`, … so each
    /// occurrence owns its own digit.
    pub fn dedupe_variables(self) -> Regex {
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        self.rename(&mut seen)
    }

    fn rename(self, seen: &mut BTreeMap<String, usize>) -> Regex {
        match self {
            Regex::Var(mut v) => {
                let count = seen.entry(v.name.clone()).or_insert(0);
                *count += 1;
                if *count > 1 {
                    v.name = format!("{}#{}", v.name, count);
                }
                Regex::Var(v)
            }
            Regex::Eps => Regex::Eps,
            Regex::Concat(a, b) => {
                let a = a.rename(seen);
                Regex::concat(a, b.rename(seen))
            }
            Regex::Union(a, b) => {
                let a = a.rename(seen);
                Regex::union(a, b.rename(seen))
            }
            Regex::Star(a) => Regex::star(a.rename(seen)),
        }
    }

    pub fn has_duplicate_variables(&self) -> bool {
        let mut names = BTreeSet::new();
        !self.variables().into_iter().all(|v| names.insert(v.name.as_str()))
    }

    /// Parse concrete syntax. `resolve` maps a variable name to the tokens it accepts.
    pub fn parse(src: &str, resolve: impl Fn(&str) -> BTreeSet<String>) -> Result<Regex, AutomatonError> {
        let tokens = lex(src)?;
        let mut p = RegexParser { tokens, pos: 0, resolve: &resolve };
        let r = p.union()?;
        if p.pos != p.tokens.len() {
            return Err(AutomatonError::RegexSyntax(format!("unexpected `{}`", p.tokens[p.pos])));
        }
        Ok(r)
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(r: &Regex, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match r {
                Regex::Var(v) => write!(f, "{}", v.name),
                Regex::Eps => write!(f, "eps"),
                Regex::Union(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, 0, f)?;
                    write!(f, " | ")?;
                    go(b, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Regex::Concat(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " ")?;
                    go(b, 1, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                Regex::Star(a) => {
                    go(a, 2, f)?;
                    write!(f, "*")
                }
            }
        }
        go(self, 0, f)
    }
}

fn lex(src: &str) -> Result<Vec<String>, AutomatonError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in src.chars() {
        match c {
            '(' | ')' | '|' | '*' => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                out.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    if out.is_empty() {
        return Err(AutomatonError::RegexSyntax("empty pattern".into()));
    }
    Ok(out)
}

struct RegexParser<'a, F> {
    tokens: Vec<String>,
    pos: usize,
    resolve: &'a F,
}

impl<F: Fn(&str) -> BTreeSet<String>> RegexParser<'_, F> {
    fn peek(&self) -> Option<&str> {
        self.tokens.get(self.pos).map(String::as_str)
    }

    fn union(&mut self) -> Result<Regex, AutomatonError> {
        let mut r = self.concat()?;
        while self.peek() == Some("|") {
            self.pos += 1;
            let rhs = self.concat()?;
            r = Regex::union(r, rhs);
        }
        Ok(r)
    }

    fn concat(&mut self) -> Result<Regex, AutomatonError> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            if t == "|" || t == ")" {
                break;
            }
            parts.push(self.starred()?);
        }
        if parts.is_empty() {
            return Err(AutomatonError::RegexSyntax("empty alternative (write `eps`)".into()));
        }
        Ok(Regex::concat_all(parts))
    }

    fn starred(&mut self) -> Result<Regex, AutomatonError> {
        let mut r = self.atom()?;
        while self.peek() == Some("*") {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, AutomatonError> {
        let t = self.peek().ok_or_else(|| AutomatonError::RegexSyntax("unexpected end of pattern".into()))?.to_string();
        self.pos += 1;
        match t.as_str() {
            "(" => {
                let r = self.union()?;
                if self.peek() != Some(")") {
                    return Err(AutomatonError::RegexSyntax("missing `)`".into()));
                }
                self.pos += 1;
                Ok(r)
            }
            ")" | "|" | "*" => Err(AutomatonError::RegexSyntax(format!("unexpected `{t}`"))),
            "eps" | "ε" => Ok(Regex::Eps),
            name => {
                let accepts = (self.resolve)(name);
                if accepts.is_empty() {
                    return Err(AutomatonError::EmptyVariable(name.to_string()));
                }
                Ok(Regex::Var(Variable { name: name.to_string(), accepts }))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(s: &str) -> BTreeSet<String> {
        BTreeSet::from([s.to_string()])
    }

    #[test]
    fn parses_prepositional_pattern() {
        let r = Regex::parse("S V (O | eps) (Prep I)*", ident).unwrap();
        assert_eq!(r.to_string(), "S V (O | eps) (Prep I)*");
        let names: Vec<_> = r.variables().iter().map(|v| v.name.clone()).collect();
        assert_eq!(names, ["S", "V", "O", "Prep", "I"]);
    }

    #[test]
    fn duplicates_are_renamed() {
        let r = Regex::parse("noun verb (noun | eps) (prep noun)*", ident).unwrap();
        assert!(r.has_duplicate_variables());
        let r = r.dedupe_variables();
        assert!(!r.has_duplicate_variables());
        let names: Vec<_> = r.variables().iter().map(|v| v.name.clone()).collect();
        assert_eq!(names, ["noun", "verb", "noun#2", "prep", "noun#3"]);
        assert!(r.variables()[2].accepts("noun"));
    }

    #[test]
    fn syntax_errors() {
        assert!(Regex::parse("", ident).is_err());
        assert!(Regex::parse("(a", ident).is_err());
        assert!(Regex::parse("a |", ident).is_err());
        assert!(Regex::parse("a)", ident).is_err());
        assert!(matches!(
            Regex::parse("a", |_| BTreeSet::new()),
            Err(AutomatonError::EmptyVariable(_))
        ));
    }

    #[test]
    fn star_binds_tighter_than_concat() {
        let r = Regex::parse("a b*", ident).unwrap();
        assert!(matches!(r, Regex::Concat(_, ref b) if matches!(**b, Regex::Star(_))));
    }
}
