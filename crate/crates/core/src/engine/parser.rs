use std::fmt;

use serde::{Deserialize, Serialize};

use super::rules::{apply_rules, Action, Rule};
use super::trace::{ParseTrace, StepRecord};
use super::tree::{readout, ParseTree};
use super::{EngineError, Lexicon, ParserOptions};
use crate::circuits::{build_rc, rc_bank, RecurrentCircuit};
use crate::grammar::Grammar;
use crate::neural::{
    build_brain, build_projection_map, project_star, AreaId, AreaParams, AreaSpec, Brain, FiberSpec, InhibitionState,
};
use crate::scalar::Weight;

/// A grammar together with the circuits its closures need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledGrammar {
    pub grammar: Grammar,
    pub lexicon: Lexicon,
    pub circuits: Vec<RecurrentCircuit>,
}

impl CompiledGrammar {
    pub fn new(grammar: Grammar) -> Result<Self, EngineError> {
        let circuits = grammar
            .closures
            .iter()
            .map(|c| build_rc(&c.areas, c.follower.as_deref(), &grammar.lex))
            .collect::<Result<Vec<_>, _>>()?;
        let lexicon = Lexicon::new(grammar.words.clone(), grammar.actions.clone());
        Ok(CompiledGrammar { grammar, lexicon, circuits })
    }

    pub fn area_specs(&self, params: AreaParams) -> Vec<AreaSpec> {
        let mut out = vec![AreaSpec::lexicon(self.grammar.lex.clone(), self.lexicon.words(), params)];
        out.extend(self.grammar.areas.iter().map(|(a, _)| AreaSpec::normal(a.clone(), params)));
        for rc in &self.circuits {
            out.extend(rc.copies().into_iter().map(|c| AreaSpec::normal(c, params)));
        }
        out
    }

    pub fn fiber_specs(&self) -> Vec<FiberSpec> {
        let mut out = self.grammar.fibers.clone();
        for rc in &self.circuits {
            out.extend(rc.fibers());
        }
        out
    }

    /// A fresh brain with every area and fiber, after checking that all
    /// rules name something that exists.
    pub fn build_brain<T: Weight>(&self, params: AreaParams, seed: u64) -> Result<Brain<T>, EngineError> {
        params.validate()?;
        let brain = build_brain(&self.area_specs(params), &self.fiber_specs(), seed)?;
        let empty = InhibitionState::new();
        for a in self.grammar.actions.values() {
            apply_rules(&brain, &empty, &a.pre)?;
            apply_rules(&brain, &empty, &a.post)?;
        }
        for h in self.grammar.hooks.values() {
            apply_rules(&brain, &empty, h)?;
        }
        Ok(brain)
    }

    /// Base area for a circuit copy, the name itself otherwise.
    pub fn base_area<'a>(&'a self, area: &'a str) -> &'a str {
        for rc in &self.circuits {
            if let Some((slot, _)) = rc.base_of(area) {
                return &rc.base[slot];
            }
        }
        area
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    /// The word's assembly reached no area.
    NoTarget,
    /// The word's assembly reached several areas.
    Ambiguous(Vec<String>),
    /// The first word landed where a sentence cannot start.
    NotStart(String),
    /// The word's area received nothing from an earlier word.
    Unattached(String),
    /// The last word landed where a sentence cannot end.
    Incomplete(String),
    /// No word reached a root area.
    SilentRoot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFailure {
    pub word_index: Option<usize>,
    pub reason: FailureReason,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.word_index {
            write!(f, "word {i}: ")?;
        }
        match &self.reason {
            FailureReason::NoTarget => write!(f, "no disinhibited area to project into"),
            FailureReason::Ambiguous(a) => write!(f, "projects into several areas ({})", a.join(", ")),
            FailureReason::NotStart(a) => write!(f, "a sentence cannot start in {a}"),
            FailureReason::Unattached(a) => write!(f, "{a} is not reached from any earlier word"),
            FailureReason::Incomplete(a) => write!(f, "a sentence cannot end in {a}"),
            FailureReason::SilentRoot => write!(f, "no root area holds an assembly"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Accepted(ParseTree),
    Rejected(ParseFailure),
}

/// Result of one parse, including the brain it ran on.
#[derive(Debug, Clone)]
pub struct Parse<T> {
    pub verdict: Verdict,
    pub trace: ParseTrace,
    pub brain: Brain<T>,
}

impl<T> Parse<T> {
    pub fn accepted(&self) -> bool {
        matches!(self.verdict, Verdict::Accepted(_))
    }

    pub fn tree(&self) -> Option<&ParseTree> {
        match &self.verdict {
            Verdict::Accepted(t) => Some(t),
            Verdict::Rejected(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&ParseFailure> {
        match &self.verdict {
            Verdict::Accepted(_) => None,
            Verdict::Rejected(f) => Some(f),
        }
    }
}

/// Parse `sentence` on `brain`, which should be fresh or a snapshot.
pub fn parse_sentence<T: Weight, S: AsRef<str>>(
    brain: &mut Brain<T>,
    g: &CompiledGrammar,
    sentence: &[S],
    opts: &ParserOptions,
) -> Result<(Verdict, ParseTrace), EngineError> {
    let words: Vec<String> = sentence.iter().map(|w| w.as_ref().to_string()).collect();
    let mut tags = Vec::with_capacity(words.len());
    for w in &words {
        let pos = g.lexicon.pos(w).ok_or_else(|| EngineError::UnknownWord(w.clone()))?;
        tags.push(pos.to_string());
    }
    let lex = brain.area_id(&g.grammar.lex)?;
    let initial: Vec<Rule> = g.grammar.initial.iter().map(Rule::disinhibit_area).collect();
    let mut inh = apply_rules(brain, &InhibitionState::new(), &initial)?;
    let mut trace = ParseTrace { sentence: words.clone(), ..Default::default() };
    // Per circuit: (iteration, slot) of the last word it took.
    let mut cursors: Vec<Option<(usize, usize)>> = vec![None; g.circuits.len()];
    let mut failure = None;

    for (i, (w, pos)) in words.iter().zip(&tags).enumerate() {
        let routed = if opts.circuits { route(g, &cursors, pos) } else { None };
        let action: Action = match routed {
            Some((c, m, s)) => {
                let rc = &g.circuits[c];
                rc.copy_action(s, rc_bank(m).expect("routed iterations use a bank"), m == 2 && s == 0)
            }
            None => g.lexicon.action(pos).cloned().ok_or_else(|| EngineError::MissingAction(pos.clone()))?,
        };

        brain.activate_word(lex, w)?;
        inh = apply_rules(brain, &inh, &action.pre)?;
        let map = build_projection_map(brain, &inh);
        let out = project_star(brain, &map, &inh, &opts.projection)?;
        let lex_targets: Vec<AreaId> = map.entries().filter(|(f, _)| *f == lex).flat_map(|(_, t)| t.iter().copied()).collect();
        let landing = (lex_targets.len() == 1).then(|| lex_targets[0]);
        let landing_name = landing.map(|l| brain.area_name(l).to_string());

        let mut post = action.post.clone();
        if let Some(name) = &landing_name {
            if routed.is_none() {
                if let Some(h) = g.grammar.hooks.get(name) {
                    post.extend(h.iter().cloned());
                }
            }
            if opts.circuits {
                for rc in g.circuits.iter().filter(|rc| rc.base.last() == Some(name)) {
                    post.extend(rc.arming_rules());
                }
            }
        }
        inh = apply_rules(brain, &inh, &post)?;

        trace.steps.push(StepRecord {
            index: i,
            word: w.clone(),
            pos: pos.clone(),
            routed: routed.map(|(c, m, s)| g.circuits[c].route(m, s)),
            pre: action.pre.iter().map(Rule::to_string).collect(),
            map: map.named(brain),
            rounds: out.rounds,
            landing: landing_name.clone(),
            winners: out.winners.iter().map(|(a, asm)| (brain.area_name(*a).to_string(), asm.clone())).collect(),
            post: post.iter().map(Rule::to_string).collect(),
        });

        let reason = match (lex_targets.len(), landing) {
            (0, _) => Some(FailureReason::NoTarget),
            (1, Some(l)) => {
                let name = brain.area_name(l).to_string();
                if i == 0 && !g.grammar.start.iter().any(|s| s == g.base_area(&name)) {
                    Some(FailureReason::NotStart(name))
                } else if i > 0 && !map.sources_of(l).iter().any(|s| *s != lex) {
                    Some(FailureReason::Unattached(name))
                } else {
                    None
                }
            }
            _ => Some(FailureReason::Ambiguous(lex_targets.iter().map(|a| brain.area_name(*a).to_string()).collect())),
        };
        if let Some(reason) = reason {
            failure = Some(ParseFailure { word_index: Some(i), reason });
            break;
        }

        let name = landing_name.expect("checked above");
        for (c, rc) in g.circuits.iter().enumerate() {
            cursors[c] = match routed {
                Some((rc_ix, m, s)) if rc_ix == c => Some((m, s)),
                _ => rc.base.iter().position(|b| *b == name).map(|s| (1, s)),
            };
        }
    }

    trace.final_areas = inh.disinhibited_areas().map(|a| brain.area_name(a).to_string()).collect();
    trace.final_fibers = inh
        .disinhibited_fibers()
        .map(|f| {
            let fb = brain.fiber(f);
            (brain.area_name(fb.from).to_string(), brain.area_name(fb.to).to_string())
        })
        .collect();

    if failure.is_none() {
        if let Some(last) = trace.steps.last().and_then(|s| s.landing.clone()) {
            if !g.grammar.accept.iter().any(|a| a == g.base_area(&last)) {
                failure = Some(ParseFailure { word_index: Some(words.len() - 1), reason: FailureReason::Incomplete(last) });
            }
        }
    }
    if let Some(f) = failure {
        return Ok((Verdict::Rejected(f), trace));
    }
    let tree = readout(brain, g, &trace, opts)?;
    if !words.is_empty() && tree.root.is_none() {
        return Ok((Verdict::Rejected(ParseFailure { word_index: None, reason: FailureReason::SilentRoot }), trace));
    }
    Ok((Verdict::Accepted(tree), trace))
}

/// Circuit, iteration and slot for the next word if it continues a closure
/// past its first iteration.
fn route(g: &CompiledGrammar, cursors: &[Option<(usize, usize)>], pos: &str) -> Option<(usize, usize, usize)> {
    for (c, rc) in g.circuits.iter().enumerate() {
        let Some((m, s)) = cursors[c] else { continue };
        let (m, s) = if s + 1 < rc.k() { (m, s + 1) } else { (m + 1, 0) };
        if m >= 2 && g.grammar.area_pos(&rc.base[s]) == Some(pos) {
            return Some((c, m, s));
        }
    }
    None
}

/// A compiled grammar plus an untouched brain; every parse runs on a copy.
#[derive(Debug, Clone)]
pub struct Parser<T> {
    compiled: CompiledGrammar,
    template: Brain<T>,
    options: ParserOptions,
}

impl<T: Weight> Parser<T> {
    pub fn new(grammar: Grammar, options: ParserOptions, seed: u64) -> Result<Self, EngineError> {
        let compiled = CompiledGrammar::new(grammar)?;
        let template = compiled.build_brain(options.params, seed)?;
        Ok(Parser { compiled, template, options })
    }

    pub fn compiled(&self) -> &CompiledGrammar {
        &self.compiled
    }

    pub fn options(&self) -> &ParserOptions {
        &self.options
    }

    pub fn template(&self) -> &Brain<T> {
        &self.template
    }

    pub fn parse<S: AsRef<str>>(&self, sentence: &[S]) -> Result<Parse<T>, EngineError> {
        self.parse_on(self.template.clone(), sentence)
    }

    /// Parse on a given brain, e.g. one restored from a snapshot.
    pub fn parse_on<S: AsRef<str>>(&self, mut brain: Brain<T>, sentence: &[S]) -> Result<Parse<T>, EngineError> {
        let (verdict, trace) = parse_sentence(&mut brain, &self.compiled, sentence, &self.options)?;
        Ok(Parse { verdict, trace, brain })
    }
}
