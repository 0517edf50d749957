//! Line-oriented grammar files.
//!
//! ```text
//! # comment
//! name svo
//! lex Lex
//! area Sbj noun                 # area and the part of speech it takes
//! fiber Lex - Sbj               # undirected
//! fiber Adj -> Noun             # directed
//! initial Lex Sbj Verb          # disinhibited before the first word
//! start Sbj                     # areas the first word may land in
//! root Verb                     # tree root, by priority
//! accept Verb Obj PObj          # areas the last word may land in
//! pattern noun verb (noun | eps) (prep noun)*
//! closure Prep PObj             # recurrent circuit over these areas
//! closure Adj -> Noun           # ... followed by Noun
//! pair ( )                      # bracket pair
//! map a -> x y                  # homomorphism image (`eps` for none)
//! action noun pre disinhibit(Lex,Sbj) disinhibit(Lex,Obj)
//! action noun post inhibit(Lex,Sbj)
//! hook PObj post inhibit(Prep)  # extra post-rules when a word lands in PObj
//! words noun cats mice dogs
//! ```
//!
//! Pattern names are parts of speech when some word has that part of
//! speech, otherwise literal tokens.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{AutomatonError, BracketPair, Homomorphism, Regex};
use crate::engine::{Action, Rule};
use crate::neural::FiberSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error("pattern: {0}")]
    Pattern(#[from] AutomatonError),
    #[error("reading grammar: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureDecl {
    pub areas: Vec<String>,
    pub follower: Option<String>,
}

/// How pattern variables read their input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenMode {
    /// Tokens are part-of-speech tags.
    Pos,
    /// Tokens are words.
    Words,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grammar {
    pub name: String,
    pub lex: String,
    /// (area, part of speech it receives)
    pub areas: Vec<(String, Option<String>)>,
    pub fibers: Vec<FiberSpec>,
    pub initial: Vec<String>,
    pub start: Vec<String>,
    pub root: Vec<String>,
    pub accept: Vec<String>,
    pub pattern: Option<String>,
    pub closures: Vec<ClosureDecl>,
    pub pairs: Vec<BracketPair>,
    pub images: Vec<(String, Vec<String>)>,
    pub actions: BTreeMap<String, Action>,
    pub hooks: BTreeMap<String, Vec<Rule>>,
    /// (word, part of speech) in declaration order.
    pub words: Vec<(String, String)>,
}

fn syntax(line: usize, msg: impl Into<String>) -> GrammarError {
    GrammarError::Syntax { line, msg: msg.into() }
}

fn parse_rules(line: usize, parts: &[&str]) -> Result<Vec<Rule>, GrammarError> {
    // Rules may contain spaces after commas; rejoin and split on `)`.
    let joined = parts.join(" ");
    let mut out = Vec::new();
    for chunk in joined.split_inclusive(')') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        out.push(chunk.parse::<Rule>().map_err(|e| syntax(line, e.to_string()))?);
    }
    Ok(out)
}

impl Grammar {
    pub fn parse(src: &str) -> Result<Grammar, GrammarError> {
        let mut g = Grammar { lex: "Lex".into(), ..Default::default() };
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let parts: Vec<&str> = text.split_whitespace().collect();
            let (kw, rest) = (parts[0], &parts[1..]);
            match kw {
                "name" => g.name = rest.join(" "),
                "lex" => match rest {
                    [l] => g.lex = l.to_string(),
                    _ => return Err(syntax(line, "expected `lex NAME`")),
                },
                "area" => match rest {
                    [a] => g.areas.push((a.to_string(), None)),
                    [a, pos] => g.areas.push((a.to_string(), Some(pos.to_string()))),
                    _ => return Err(syntax(line, "expected `area NAME [POS]`")),
                },
                "fiber" => match rest {
                    [a, "-", b] => g.fibers.push(FiberSpec::undirected(*a, *b)),
                    [a, "->", b] => g.fibers.push(FiberSpec::directed(*a, *b)),
                    _ => return Err(syntax(line, "expected `fiber A - B` or `fiber A -> B`")),
                },
                "initial" => g.initial.extend(rest.iter().map(|s| s.to_string())),
                "start" => g.start.extend(rest.iter().map(|s| s.to_string())),
                "root" => g.root.extend(rest.iter().map(|s| s.to_string())),
                "accept" => g.accept.extend(rest.iter().map(|s| s.to_string())),
                "pattern" => {
                    if rest.is_empty() {
                        return Err(syntax(line, "empty pattern"));
                    }
                    g.pattern = Some(rest.join(" "));
                }
                "closure" => {
                    let (areas, follower) = match rest.iter().position(|s| *s == "->") {
                        Some(p) if p + 2 == rest.len() => (&rest[..p], Some(rest[p + 1].to_string())),
                        Some(_) => return Err(syntax(line, "expected `closure A ... [-> B]`")),
                        None => (rest, None),
                    };
                    if areas.is_empty() {
                        return Err(syntax(line, "closure needs at least one area"));
                    }
                    g.closures.push(ClosureDecl { areas: areas.iter().map(|s| s.to_string()).collect(), follower });
                }
                "pair" => match rest {
                    [a, b] => g.pairs.push(BracketPair::new(*a, *b)),
                    _ => return Err(syntax(line, "expected `pair OPEN CLOSE`")),
                },
                "map" => match rest {
                    [sym, "->", img @ ..] if !img.is_empty() => {
                        let img = if img == ["eps"] { vec![] } else { img.iter().map(|s| s.to_string()).collect() };
                        g.images.push((sym.to_string(), img));
                    }
                    _ => return Err(syntax(line, "expected `map SYMBOL -> TOKENS` or `-> eps`")),
                },
                "action" => match rest {
                    [pos, when @ ("pre" | "post"), rules @ ..] => {
                        let rules = parse_rules(line, rules)?;
                        let act = g.actions.entry(pos.to_string()).or_default();
                        if *when == "pre" { act.pre.extend(rules) } else { act.post.extend(rules) }
                    }
                    _ => return Err(syntax(line, "expected `action POS pre|post RULES`")),
                },
                "hook" => match rest {
                    [area, "post", rules @ ..] => {
                        let rules = parse_rules(line, rules)?;
                        g.hooks.entry(area.to_string()).or_default().extend(rules);
                    }
                    _ => return Err(syntax(line, "expected `hook AREA post RULES`")),
                },
                "words" => match rest {
                    [pos, words @ ..] if !words.is_empty() => {
                        for w in words {
                            if g.words.iter().any(|(x, _)| x == w) {
                                return Err(syntax(line, format!("word `{w}` declared twice")));
                            }
                            g.words.push((w.to_string(), pos.to_string()));
                        }
                    }
                    _ => return Err(syntax(line, "expected `words POS WORD ...`")),
                },
                other => return Err(syntax(line, format!("unknown directive `{other}`"))),
            }
        }
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Grammar, GrammarError> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path).map_err(|e| GrammarError::Io(format!("{}: {e}", path.display())))?;
        let mut g = Grammar::parse(&src)?;
        if g.name.is_empty() {
            g.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        }
        Ok(g)
    }

    pub fn has_area(&self, name: &str) -> bool {
        name == self.lex || self.areas.iter().any(|(a, _)| a == name)
    }

    pub fn area_pos(&self, area: &str) -> Option<&str> {
        self.areas.iter().find(|(a, _)| a == area).and_then(|(_, p)| p.as_deref())
    }

    pub fn pos_of(&self, word: &str) -> Option<&str> {
        self.words.iter().find(|(w, _)| w == word).map(|(_, p)| p.as_str())
    }

    pub fn parts_of_speech(&self) -> BTreeSet<&str> {
        self.words.iter().map(|(_, p)| p.as_str()).collect()
    }

    /// Whether the grammar declares areas to run the neural parser on.
    pub fn is_neural(&self) -> bool {
        !self.areas.is_empty()
    }

    fn validate(&self) -> Result<(), GrammarError> {
        let invalid = |m: String| Err(GrammarError::Invalid(m));
        let mut seen = BTreeSet::from([self.lex.as_str()]);
        for (a, _) in &self.areas {
            if !seen.insert(a) {
                return invalid(format!("area `{a}` declared twice"));
            }
            if a.contains('^') {
                return invalid(format!("area `{a}`: `^` is reserved for circuit copies"));
            }
        }
        for f in &self.fibers {
            for end in [&f.from, &f.to] {
                if !self.has_area(end) {
                    return invalid(format!("fiber mentions undeclared area `{end}`"));
                }
            }
        }
        let lists = [("initial", &self.initial), ("start", &self.start), ("root", &self.root), ("accept", &self.accept)];
        for (what, list) in lists {
            if let Some(a) = list.iter().find(|a| !self.has_area(a)) {
                return invalid(format!("{what} mentions undeclared area `{a}`"));
            }
        }
        for c in &self.closures {
            for a in c.areas.iter().chain(&c.follower) {
                if !self.has_area(a) || *a == self.lex {
                    return invalid(format!("closure mentions undeclared area `{a}`"));
                }
            }
            if c.areas.iter().any(|a| self.area_pos(a).is_none()) {
                return invalid("closure areas need a part of speech".into());
            }
        }
        for a in self.hooks.keys() {
            if !self.has_area(a) {
                return invalid(format!("hook on undeclared area `{a}`"));
            }
        }
        if self.is_neural() {
            for pos in self.parts_of_speech() {
                if !self.actions.contains_key(pos) {
                    return invalid(format!("no action for part of speech `{pos}`"));
                }
            }
        }
        crate::automaton::dyck::validate_pairs(&self.pairs).map_err(|e| GrammarError::Invalid(e.to_string()))?;
        Ok(())
    }

    /// The pattern as a regex with duplicate variables renamed.
    pub fn pattern_regex(&self, mode: TokenMode) -> Result<Option<Regex>, GrammarError> {
        let Some(src) = &self.pattern else { return Ok(None) };
        let pos = self.parts_of_speech();
        let r = Regex::parse(src, |name| {
            if pos.contains(name) {
                match mode {
                    TokenMode::Pos => BTreeSet::from([name.to_string()]),
                    TokenMode::Words => self.words.iter().filter(|(_, p)| p == name).map(|(w, _)| w.clone()).collect(),
                }
            } else {
                BTreeSet::from([name.to_string()])
            }
        })?;
        Ok(Some(r.dedupe_variables()))
    }

    pub fn homomorphism(&self) -> Homomorphism {
        let mut h = Homomorphism::identity();
        for (s, img) in &self.images {
            h.set(s.clone(), img.clone());
        }
        h
    }

    /// Map a sentence to its part-of-speech tags.
    pub fn tag<S: AsRef<str>>(&self, sentence: &[S]) -> Result<Vec<String>, String> {
        sentence
            .iter()
            .map(|w| self.pos_of(w.as_ref()).map(String::from).ok_or_else(|| w.as_ref().to_string()))
            .collect()
    }
}


/// Grammars shipped with the crate, by name.
pub fn builtin(name: &str) -> Option<Grammar> {
    let src = match name {
        "svo" => include_str!("../grammars/svo.grammar"),
        "svo_literal" => include_str!("../grammars/svo_literal.grammar"),
        "noun_phrase" => include_str!("../grammars/noun_phrase.grammar"),
        "nested" => include_str!("../grammars/nested.grammar"),
        "brackets" => include_str!("../grammars/brackets.grammar"),
        _ => return None,
    };
    Some(Grammar::parse(src).expect("shipped grammar parses"))
}

pub const BUILTIN_GRAMMARS: &[&str] = &["svo", "svo_literal", "noun_phrase", "nested", "brackets"];

/// Example sentences shipped for a built-in grammar.
pub fn builtin_corpus(name: &str) -> Option<Vec<CorpusEntry>> {
    let src = match name {
        "svo" => include_str!("../corpus/svo.txt"),
        "noun_phrase" => include_str!("../corpus/noun_phrase.txt"),
        _ => return None,
    };
    Some(parse_corpus(src))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub sentence: Vec<String>,
    /// `false` for lines marked with a leading `!`.
    pub expect_accept: bool,
}

/// One sentence per line; `#` starts a comment, a leading `!` marks a
/// sentence that should be rejected.
pub fn parse_corpus(src: &str) -> Vec<CorpusEntry> {
    src.lines()
        .filter_map(|l| {
            let l = l.split('#').next().unwrap_or("").trim();
            if l.is_empty() {
                return None;
            }
            let (expect_accept, body) = match l.strip_prefix('!') {
                Some(rest) => (false, rest),
                None => (true, l),
            };
            Some(CorpusEntry { sentence: body.split_whitespace().map(String::from).collect(), expect_accept })
        })
        .collect()
}
