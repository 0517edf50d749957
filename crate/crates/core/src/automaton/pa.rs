//! Parser automata with state codes.
//!
//! A state code is a vector of digits. Every variable owns one binary digit
//! (0 until its word is read, then 1). Every Kleene star owns one counting
//! digit placed in front of its operand's digits; it records how many
//! complete iterations have been read. The automaton for a composite regex is
//! assembled from its parts by `concat_pa`, `union_pa` and `star_pa`, and each
//! part only ever reads or writes its own digits.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::regex::{Regex, Variable};
use super::AutomatonError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DigitKind {
    Variable,
    Counting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Digit {
    pub name: String,
    pub kind: DigitKind,
}

/// A state code `E_{d1 d2 …}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateCode(pub Vec<u32>);

impl StateCode {
    pub fn zero(width: usize) -> Self {
        StateCode(vec![0; width])
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for StateCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E_")?;
        for d in &self.0 {
            if *d < 10 {
                write!(f, "{d}")?;
            } else {
                write!(f, "({d})")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Var(Variable),
    Eps,
    Concat(Box<Node>, Box<Node>, usize),
    Union(Box<Node>, Box<Node>, usize),
    Star(Box<Node>),
}

fn zero(code: &[u32]) -> bool {
    code.iter().all(|d| *d == 0)
}

fn join(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

impl Node {
    fn width(&self) -> usize {
        match self {
            Node::Var(_) => 1,
            Node::Eps => 0,
            Node::Concat(a, b, _) | Node::Union(a, b, _) => a.width() + b.width(),
            Node::Star(a) => 1 + a.width(),
        }
    }

    /// Codes reachable by reading `token`; each result replaces this node's slice.
    fn read(&self, code: &[u32], token: &str, out: &mut Vec<Vec<u32>>) {
        match self {
            Node::Var(v) => {
                if code[0] == 0 && v.accepts(token) {
                    out.push(vec![1]);
                }
            }
            Node::Eps => {}
            Node::Concat(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                let mut tmp = Vec::new();
                if zero(cb) {
                    a.read(ca, token, &mut tmp);
                    out.extend(tmp.drain(..).map(|na| join(&na, cb)));
                }
                if a.is_final(ca) {
                    b.read(cb, token, &mut tmp);
                    out.extend(tmp.drain(..).map(|nb| join(ca, &nb)));
                }
            }
            Node::Union(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                let mut tmp = Vec::new();
                if zero(cb) {
                    a.read(ca, token, &mut tmp);
                    out.extend(tmp.drain(..).map(|na| join(&na, cb)));
                }
                if zero(ca) {
                    b.read(cb, token, &mut tmp);
                    out.extend(tmp.drain(..).map(|nb| join(ca, &nb)));
                }
            }
            Node::Star(a) => {
                let mut tmp = Vec::new();
                a.read(&code[1..], token, &mut tmp);
                out.extend(tmp.drain(..).map(|na| join(&code[..1], &na)));
            }
        }
    }

    /// Codes reachable by one internal ε-move (closing a star iteration).
    fn eps(&self, code: &[u32], out: &mut Vec<Vec<u32>>) {
        match self {
            Node::Var(_) | Node::Eps => {}
            Node::Concat(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                let mut tmp = Vec::new();
                if zero(cb) {
                    a.eps(ca, &mut tmp);
                    out.extend(tmp.drain(..).map(|na| join(&na, cb)));
                }
                if a.is_final(ca) {
                    b.eps(cb, &mut tmp);
                    out.extend(tmp.drain(..).map(|nb| join(ca, &nb)));
                }
            }
            Node::Union(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                let mut tmp = Vec::new();
                if zero(cb) {
                    a.eps(ca, &mut tmp);
                    out.extend(tmp.drain(..).map(|na| join(&na, cb)));
                }
                if zero(ca) {
                    b.eps(cb, &mut tmp);
                    out.extend(tmp.drain(..).map(|nb| join(ca, &nb)));
                }
            }
            Node::Star(a) => {
                let inner = &code[1..];
                let mut tmp = Vec::new();
                a.eps(inner, &mut tmp);
                out.extend(tmp.drain(..).map(|na| join(&code[..1], &na)));
                if !zero(inner) && a.is_final(inner) {
                    let mut next = vec![0; code.len()];
                    next[0] = code[0].saturating_add(1);
                    out.push(next);
                }
            }
        }
    }

    /// Whether reading ε here reaches the accepting state F.
    fn is_final(&self, code: &[u32]) -> bool {
        match self {
            Node::Var(_) => code[0] == 1,
            Node::Eps => true,
            Node::Concat(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                a.is_final(ca) && b.is_final(cb)
            }
            Node::Union(a, b, wa) => {
                let (ca, cb) = code.split_at(*wa);
                (zero(cb) && a.is_final(ca)) || (zero(ca) && b.is_final(cb))
            }
            Node::Star(_) => zero(&code[1..]),
        }
    }

    fn layout(&self, cd: &mut usize, out: &mut Vec<Digit>) {
        match self {
            Node::Var(v) => out.push(Digit { name: v.name.clone(), kind: DigitKind::Variable }),
            Node::Eps => {}
            Node::Concat(a, b, _) | Node::Union(a, b, _) => {
                a.layout(cd, out);
                b.layout(cd, out);
            }
            Node::Star(a) => {
                *cd += 1;
                out.push(Digit { name: format!("cd{cd}"), kind: DigitKind::Counting });
                a.layout(cd, out);
            }
        }
    }

    fn to_regex(&self) -> Regex {
        match self {
            Node::Var(v) => Regex::Var(v.clone()),
            Node::Eps => Regex::Eps,
            Node::Concat(a, b, _) => Regex::concat(a.to_regex(), b.to_regex()),
            Node::Union(a, b, _) => Regex::union(a.to_regex(), b.to_regex()),
            Node::Star(a) => Regex::star(a.to_regex()),
        }
    }
}

/// A parser automaton: start code all zeros, single accepting state F
/// reached by ε from any final code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParserAutomaton {
    root: Node,
}

pub fn compile_variable(v: Variable) -> ParserAutomaton {
    ParserAutomaton { root: Node::Var(v) }
}

pub fn epsilon_pa() -> ParserAutomaton {
    ParserAutomaton { root: Node::Eps }
}

pub fn concat_pa(a: ParserAutomaton, b: ParserAutomaton) -> ParserAutomaton {
    let wa = a.root.width();
    ParserAutomaton { root: Node::Concat(Box::new(a.root), Box::new(b.root), wa) }
}

pub fn union_pa(a: ParserAutomaton, b: ParserAutomaton) -> ParserAutomaton {
    let wa = a.root.width();
    ParserAutomaton { root: Node::Union(Box::new(a.root), Box::new(b.root), wa) }
}

pub fn star_pa(a: ParserAutomaton) -> ParserAutomaton {
    ParserAutomaton { root: Node::Star(Box::new(a.root)) }
}

/// One entry of an acceptance path: the token read (`None` for an ε-move)
/// and the code reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaStep {
    pub input: Option<String>,
    pub code: StateCode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaRun {
    pub accepted: bool,
    /// Codes visited, starting with the all-zero code. For a rejected input
    /// the path ends where the last surviving branch stopped.
    pub path: Vec<PaStep>,
    /// Number of tokens consumed before the run died (the input length if
    /// some branch survived to the end).
    pub consumed: usize,
}

impl ParserAutomaton {
    /// Compile a regex. Repeated variable names are an error; call
    /// [`Regex::dedupe_variables`] first.
    pub fn from_regex(r: &Regex) -> Result<Self, AutomatonError> {
        if r.has_duplicate_variables() {
            return Err(AutomatonError::DuplicateVariable(
                duplicate_name(r).unwrap_or_default(),
            ));
        }
        Ok(Self::build(r))
    }

    fn build(r: &Regex) -> Self {
        match r {
            Regex::Var(v) => compile_variable(v.clone()),
            Regex::Eps => epsilon_pa(),
            Regex::Concat(a, b) => concat_pa(Self::build(a), Self::build(b)),
            Regex::Union(a, b) => union_pa(Self::build(a), Self::build(b)),
            Regex::Star(a) => star_pa(Self::build(a)),
        }
    }

    pub fn width(&self) -> usize {
        self.root.width()
    }

    pub fn start(&self) -> StateCode {
        StateCode::zero(self.width())
    }

    /// Digit names in code order.
    pub fn layout(&self) -> Vec<Digit> {
        let mut out = Vec::new();
        self.root.layout(&mut 0, &mut out);
        out
    }

    pub fn regex(&self) -> Regex {
        self.root.to_regex()
    }

    /// Codes reached by reading `token` from `code`.
    pub fn read(&self, code: &StateCode, token: &str) -> Vec<StateCode> {
        let mut out = Vec::new();
        self.root.read(&code.0, token, &mut out);
        out.into_iter().map(StateCode).collect()
    }

    /// Codes reached by a single ε-move.
    pub fn eps_moves(&self, code: &StateCode) -> Vec<StateCode> {
        let mut out = Vec::new();
        self.root.eps(&code.0, &mut out);
        out.into_iter().map(StateCode).collect()
    }

    /// Whether `code` steps to F on ε.
    pub fn is_final(&self, code: &StateCode) -> bool {
        self.root.is_final(&code.0)
    }

    /// All codes reachable by ε-moves from `codes`, with the move that first
    /// reached each one.
    pub fn eps_closure(&self, codes: &[StateCode]) -> Vec<StateCode> {
        let mut seen: BTreeSet<StateCode> = codes.iter().cloned().collect();
        let mut queue: VecDeque<StateCode> = codes.iter().cloned().collect();
        let mut out = codes.to_vec();
        while let Some(c) = queue.pop_front() {
            for n in self.eps_moves(&c) {
                if seen.insert(n.clone()) {
                    out.push(n.clone());
                    queue.push_back(n);
                }
            }
        }
        out
    }

    pub fn accepts<S: AsRef<str>>(&self, input: &[S]) -> bool {
        let mut current = self.eps_closure(&[self.start()]);
        for tok in input {
            let mut next: BTreeSet<StateCode> = BTreeSet::new();
            for c in &current {
                next.extend(self.read(c, tok.as_ref()));
            }
            if next.is_empty() {
                return false;
            }
            current = self.eps_closure(&next.into_iter().collect::<Vec<_>>());
        }
        current.iter().any(|c| self.is_final(c))
    }
}

fn duplicate_name(r: &Regex) -> Option<String> {
    let mut seen = BTreeSet::new();
    r.variables().into_iter().find(|v| !seen.insert(v.name.as_str())).map(|v| v.name.clone())
}

/// Run `pa` on `input`, returning acceptance and one witness path of codes.
pub fn pa_accepts<S: AsRef<str>>(pa: &ParserAutomaton, input: &[S]) -> PaRun {
    // Arena of visited (layer, code) with back-pointers.
    struct Entry {
        code: StateCode,
        input: Option<String>,
        parent: Option<usize>,
    }
    let mut arena: Vec<Entry> = Vec::new();
    let close = |arena: &mut Vec<Entry>, seeds: Vec<usize>| -> Vec<usize> {
        let mut index: HashMap<StateCode, usize> = seeds.iter().map(|&i| (arena[i].code.clone(), i)).collect();
        let mut layer = seeds.clone();
        let mut queue: VecDeque<usize> = seeds.into();
        while let Some(i) = queue.pop_front() {
            let code = arena[i].code.clone();
            for n in pa.eps_moves(&code) {
                if index.contains_key(&n) {
                    continue;
                }
                arena.push(Entry { code: n.clone(), input: None, parent: Some(i) });
                let id = arena.len() - 1;
                index.insert(n, id);
                layer.push(id);
                queue.push_back(id);
            }
        }
        layer
    };

    arena.push(Entry { code: pa.start(), input: None, parent: None });
    let mut layer = close(&mut arena, vec![0]);
    let mut consumed = 0;
    for tok in input {
        let tok = tok.as_ref();
        let mut seeds = Vec::new();
        let mut seen: HashMap<StateCode, ()> = HashMap::new();
        for &i in &layer {
            let code = arena[i].code.clone();
            for n in pa.read(&code, tok) {
                if seen.insert(n.clone(), ()).is_none() {
                    arena.push(Entry { code: n, input: Some(tok.to_string()), parent: Some(i) });
                    seeds.push(arena.len() - 1);
                }
            }
        }
        if seeds.is_empty() {
            break;
        }
        consumed += 1;
        layer = close(&mut arena, seeds);
    }

    let accepted = consumed == input.len() && layer.iter().any(|&i| pa.is_final(&arena[i].code));
    // Prefer an accepting code, then the one reached by the fewest ε-moves.
    let end = if accepted {
        *layer.iter().rev().find(|&&i| pa.is_final(&arena[i].code)).expect("accepting code")
    } else {
        layer[0]
    };
    let mut path = Vec::new();
    let mut cur = Some(end);
    while let Some(i) = cur {
        path.push(PaStep { input: arena[i].input.clone(), code: arena[i].code.clone() });
        cur = arena[i].parent;
    }
    path.reverse();
    PaRun { accepted, path, consumed }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ident(s: &str) -> BTreeSet<String> {
        BTreeSet::from([s.to_string()])
    }

    fn pa(src: &str) -> ParserAutomaton {
        ParserAutomaton::from_regex(&Regex::parse(src, ident).unwrap().dedupe_variables()).unwrap()
    }

    fn toks(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn layout_places_counting_digit_before_operand() {
        let p = pa("S V (O | eps) (Prep I)*");
        let names: Vec<_> = p.layout().into_iter().map(|d| d.name).collect();
        assert_eq!(names, ["S", "V", "O", "cd1", "Prep", "I"]);
    }

    #[test]
    fn prepositional_example_codes() {
        let p = pa("S V (O | eps) (Prep I)*");
        let run = pa_accepts(&p, &toks("S V Prep I Prep I Prep I"));
        assert!(run.accepted);
        let codes: Vec<String> = run.path.iter().map(|s| s.code.to_string()).collect();
        assert_eq!(
            codes,
            [
                "E_000000", "E_100000", "E_110000", "E_110010", "E_110011", "E_110100", "E_110110", "E_110111",
                "E_110200", "E_110210", "E_110211", "E_110300"
            ]
        );
    }

    #[test]
    fn object_branch() {
        let p = pa("S V (O | eps) (Prep I)*");
        assert!(p.accepts(&toks("S V O")));
        assert!(p.accepts(&toks("S V O Prep I")));
        assert!(!p.accepts(&toks("S V O O")));
        assert!(!p.accepts(&toks("S V Prep")));
        assert!(!p.accepts(&toks("V S")));
        assert!(!p.accepts::<&str>(&[]));
    }

    #[test]
    fn nested_star_terminates() {
        let p = pa("((a)* b)*");
        assert!(p.accepts::<&str>(&[]));
        assert!(p.accepts(&toks("a a b b a b")));
        assert!(!p.accepts(&toks("a a")));
        let p = pa("((a | eps)*)*");
        assert!(p.accepts(&toks("a a a")));
    }

    #[test]
    fn duplicate_variables_rejected() {
        let r = Regex::parse("a a", ident).unwrap();
        assert!(matches!(ParserAutomaton::from_regex(&r), Err(AutomatonError::DuplicateVariable(_))));
    }

    #[test]
    fn rejected_run_reports_consumed() {
        let p = pa("a b c");
        let run = pa_accepts(&p, &toks("a b b"));
        assert!(!run.accepted);
        assert_eq!(run.consumed, 2);
        assert_eq!(run.path.last().unwrap().code, StateCode(vec![1, 1, 0]));
    }
}
