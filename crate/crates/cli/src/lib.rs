//! Command-line front end for `bnlp`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};

use bnlp::automaton::{cs_compose, dyck_accepts, pa_accepts, CsConfig, ParserAutomaton};
use bnlp::circuits::run_sc_neural;
use bnlp::engine::{Parse, Parser as NeuralParser, ParserOptions};
use bnlp::grammar::{builtin, builtin_corpus, parse_corpus, CorpusEntry, Grammar, TokenMode, BUILTIN_GRAMMARS};
use bnlp::neural::{AreaParams, ProjectionConfig};
use bnlp::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Parse a sentence on the simulated brain.
    NeuralParse,
    /// Run the grammar's parser automaton.
    PaAccept,
    /// Check bracket balance with per-pair digit counters.
    Dyck,
    /// Parser automaton intersected with the bracket language.
    CsCompose,
    /// Compare neural verdicts with the parser automaton on a corpus.
    Xcheck,
    /// Time neural parsing per word.
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F32,
    F64,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "bnlp", version, about = "Assembly-calculus parser and its automata")]
pub struct Args {
    /// Grammar file, or the name of a built-in grammar.
    #[arg(long, default_value = "svo")]
    pub grammar: String,
    #[arg(long, value_enum, default_value = "neural-parse")]
    pub mode: Mode,
    /// Words separated by whitespace.
    #[arg(long)]
    pub sentence: Option<String>,
    /// Symbol string; split on whitespace if it has any, else per character.
    #[arg(long)]
    pub string: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeds for xcheck and bench, starting at `--seed`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Rounds per projection.
    #[arg(long)]
    pub rounds: Option<usize>,
    /// Disable recurrent circuits for closures.
    #[arg(long)]
    pub no_circuits: bool,
    #[arg(long, value_enum, default_value = "f32")]
    pub precision: Precision,
    /// Output directory; each run writes into `<out>/<mode>-seed<N>/`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub emit_dot: bool,
    #[arg(long)]
    pub emit_trace: bool,
    /// Stack depth and search depth limit.
    #[arg(long, default_value_t = 64)]
    pub max_depth: usize,
    /// Also drive a neural stack circuit (dyck mode, single pair).
    #[arg(long)]
    pub neural: bool,
    /// Corpus file for xcheck and bench (defaults to the grammar's own).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

/// What a run printed and whether its input was accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub accepted: bool,
    pub report: String,
}

pub fn load_grammar(spec: &str) -> Result<Grammar> {
    let path = Path::new(spec);
    if path.exists() {
        return Grammar::load(path).with_context(|| format!("loading {spec}"));
    }
    builtin(spec).ok_or_else(|| anyhow!("no grammar file `{spec}` and no built-in of that name ({})", BUILTIN_GRAMMARS.join(", ")))
}

pub fn split_symbols(s: &str) -> Vec<String> {
    if s.split_whitespace().count() > 1 {
        s.split_whitespace().map(String::from).collect()
    } else {
        s.trim().chars().map(String::from).collect()
    }
}

impl Args {
    fn params(&self) -> Result<AreaParams> {
        let d = AreaParams::FAST;
        Ok(AreaParams::new(
            self.n.unwrap_or(d.n),
            self.k.unwrap_or(d.k),
            self.p.unwrap_or(d.p),
            self.beta.unwrap_or(d.beta),
        )?)
    }

    fn options(&self) -> Result<ParserOptions> {
        let d = ParserOptions::default();
        let projection = ProjectionConfig { rounds: self.rounds.unwrap_or(d.projection.rounds), ..d.projection };
        Ok(ParserOptions { params: self.params()?, projection, circuits: !self.no_circuits, ..d })
    }

    fn words(&self) -> Result<Vec<String>> {
        match (&self.sentence, &self.string) {
            (Some(s), _) => Ok(s.split_whitespace().map(String::from).collect()),
            (None, Some(s)) => Ok(split_symbols(s)),
            (None, None) => bail!("--sentence or --string is required for this mode"),
        }
    }

    fn symbols(&self) -> Result<Vec<String>> {
        match (&self.string, &self.sentence) {
            (Some(s), _) => Ok(split_symbols(s)),
            (None, Some(s)) => Ok(s.split_whitespace().map(String::from).collect()),
            (None, None) => bail!("--string or --sentence is required for this mode"),
        }
    }

    fn run_dir(&self, seed: u64) -> Result<Option<PathBuf>> {
        let Some(out) = &self.out else { return Ok(None) };
        let name = format!("{}-seed{seed}", self.mode.to_possible_value().unwrap().get_name());
        let dir = out.join(name);
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Some(dir))
    }

    fn corpus(&self, g: &Grammar) -> Result<Vec<CorpusEntry>> {
        if let Some(path) = &self.corpus {
            let src = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(parse_corpus(&src));
        }
        if self.sentence.is_some() || self.string.is_some() {
            return Ok(vec![CorpusEntry { sentence: self.words()?, expect_accept: true }]);
        }
        builtin_corpus(&g.name).ok_or_else(|| anyhow!("grammar `{}` has no built-in corpus; pass --corpus", g.name))
    }
}

pub fn run(args: &Args) -> Result<Outcome> {
    let g = load_grammar(&args.grammar)?;
    match (args.mode, args.precision) {
        (Mode::NeuralParse, Precision::F32) => neural_parse::<f32>(args, g),
        (Mode::NeuralParse, Precision::F64) => neural_parse::<f64>(args, g),
        (Mode::Xcheck, Precision::F32) => xcheck::<f32>(args, g),
        (Mode::Xcheck, Precision::F64) => xcheck::<f64>(args, g),
        (Mode::Bench, Precision::F32) => bench::<f32>(args, g),
        (Mode::Bench, Precision::F64) => bench::<f64>(args, g),
        (Mode::PaAccept, _) => pa_accept(args, g),
        (Mode::Dyck, _) => dyck(args, g),
        (Mode::CsCompose, _) => cs(args, g),
    }
}

fn token_mode(g: &Grammar) -> TokenMode {
    if g.is_neural() {
        TokenMode::Pos
    } else {
        TokenMode::Words
    }
}

fn automaton(g: &Grammar) -> Result<ParserAutomaton> {
    let re = g.pattern_regex(token_mode(g))?.ok_or_else(|| anyhow!("grammar `{}` has no pattern", g.name))?;
    Ok(ParserAutomaton::from_regex(&re)?)
}

fn verdict(accepted: bool) -> &'static str {
    if accepted {
        "accepted"
    } else {
        "rejected"
    }
}

fn describe<T: Weight>(parse: &Parse<T>) -> String {
    let mut s = String::new();
    for step in &parse.trace.steps {
        let _ = writeln!(
            s,
            "{:>3} {:<10} {:<6} -> {:<8} map {}",
            step.index,
            step.word,
            step.pos,
            step.landing.as_deref().unwrap_or("-"),
            step.map_string()
        );
    }
    match (parse.tree(), parse.failure()) {
        (Some(tree), _) => {
            let root = tree.root.map(|r| tree.nodes[r].word.as_str()).unwrap_or("-");
            let _ = writeln!(s, "accepted: root {root}, {} edges, {:.0}% confirmed", tree.edges.len(), 100.0 * tree.confirmed_fraction());
            for e in &tree.edges {
                let _ = writeln!(
                    s,
                    "  {} -> {} ({} -> {}, overlap {:.2}{})",
                    tree.nodes[e.parent].word,
                    tree.nodes[e.child].word,
                    e.source_area,
                    e.target_area,
                    e.overlap,
                    if e.confirmed { "" } else { ", unconfirmed" }
                );
            }
        }
        (None, Some(f)) => {
            let _ = writeln!(s, "rejected: {f}");
        }
        (None, None) => {}
    }
    s
}

fn neural_parse<T: Weight>(args: &Args, g: Grammar) -> Result<Outcome> {
    let words = args.words()?;
    let parser = NeuralParser::<T>::new(g, args.options()?, args.seed)?;
    let t0 = Instant::now();
    let parse = parser.parse(&words)?;
    let secs = t0.elapsed().as_secs_f64();
    let report = describe(&parse);
    if let Some(dir) = args.run_dir(args.seed)? {
        if args.emit_dot {
            if let Some(tree) = parse.tree() {
                fs::write(dir.join("tree.dot"), tree.to_dot())?;
            }
        }
        if args.emit_trace {
            fs::write(dir.join("trace.jsonl"), parse.trace.to_jsonl())?;
        }
        fs::write(dir.join("timing.txt"), timing(secs, words.len()))?;
    }
    Ok(Outcome { accepted: parse.accepted(), report })
}

fn timing(secs: f64, words: usize) -> String {
    format!("seconds {secs:.6}\nwords {words}\nseconds_per_word {:.6}\n", secs / words.max(1) as f64)
}

fn pa_accept(args: &Args, g: Grammar) -> Result<Outcome> {
    let pa = automaton(&g)?;
    let tokens = if g.is_neural() { g.tag(&args.words()?).map_err(|w| anyhow!("word `{w}` is not in the lexicon"))? } else { args.symbols()? };
    let run = pa_accepts(&pa, &tokens);
    let mut report = format!("{} -> {}\n", tokens.join(" "), verdict(run.accepted));
    for step in &run.path {
        let _ = writeln!(report, "  {:<8} {}", step.input.as_deref().unwrap_or("ε"), step.code);
    }
    if !run.accepted {
        let _ = writeln!(report, "consumed {} of {} tokens", run.consumed, tokens.len());
    }
    Ok(Outcome { accepted: run.accepted, report })
}

fn dyck(args: &Args, g: Grammar) -> Result<Outcome> {
    if g.pairs.is_empty() {
        bail!("grammar `{}` declares no bracket pairs", g.name);
    }
    let input = args.symbols()?;
    let run = dyck_accepts(&g.pairs, &input)?;
    let mut report = String::new();
    for (i, d) in run.trace.iter().enumerate().skip(1) {
        let digits: Vec<String> = d.iter().map(u32::to_string).collect();
        let _ = writeln!(report, "{:>3} {:<4} [{}]", i - 1, input[i - 1], digits.join(" "));
    }
    if let Some(i) = run.underflow_at {
        let _ = writeln!(report, "closer at {i} has no opener");
    }
    let _ = writeln!(report, "{} (max depth {})", verdict(run.accepted), run.max_depth);
    if args.neural {
        let [pair] = g.pairs.as_slice() else { bail!("--neural needs a grammar with exactly one pair") };
        let opts = args.options()?;
        let (sc, _) = run_sc_neural::<f32, _>(pair, &input, opts.params, &opts.projection, args.seed, args.max_depth)?;
        let areas: Vec<String> = sc.steps.iter().filter_map(|s| s.area.clone()).collect();
        let _ = writeln!(report, "stack circuit: {} (openers into {})", verdict(sc.accepted), areas.join(" "));
    }
    Ok(Outcome { accepted: run.accepted, report })
}

fn cs(args: &Args, g: Grammar) -> Result<Outcome> {
    let pa = automaton(&g)?;
    let input = args.symbols()?;
    let cfg = CsConfig { max_depth: args.max_depth as u32, ..CsConfig::default() };
    let run = cs_compose(&pa, &g.pairs, &g.homomorphism(), &input, &cfg)?;
    let mut report = format!("{} -> {} ({} configurations)\n", input.join(" "), verdict(run.accepted), run.explored);
    if let Some(pre) = &run.preimage {
        let _ = writeln!(report, "preimage {}", pre.join(" "));
    }
    Ok(Outcome { accepted: run.accepted, report })
}

fn xcheck<T: Weight>(args: &Args, g: Grammar) -> Result<Outcome> {
    let pa = automaton(&g)?;
    let corpus = args.corpus(&g)?;
    let opts = args.options()?;
    let mut report = String::new();
    let mut ok = true;
    for seed in args.seed..args.seed + args.seeds.max(1) {
        let parser = NeuralParser::<T>::new(g.clone(), opts, seed)?;
        for e in &corpus {
            let neural = parser.parse(&e.sentence)?.accepted();
            let tags = g.tag(&e.sentence).map_err(|w| anyhow!("word `{w}` is not in the lexicon"))?;
            let formal = pa.accepts(&tags);
            let agree = neural == formal && formal == e.expect_accept;
            ok &= agree;
            let _ = writeln!(
                report,
                "{} seed {seed}: neural {}, automaton {}, expected {}: {}",
                if agree { "ok  " } else { "DIFF" },
                verdict(neural),
                verdict(formal),
                verdict(e.expect_accept),
                e.sentence.join(" ")
            );
        }
    }
    Ok(Outcome { accepted: ok, report })
}

fn bench<T: Weight>(args: &Args, g: Grammar) -> Result<Outcome> {
    let corpus = args.corpus(&g)?;
    let opts = args.options()?;
    let mut report = String::new();
    let (mut secs, mut words) = (0.0, 0);
    for seed in args.seed..args.seed + args.seeds.max(1) {
        let t0 = Instant::now();
        let parser = NeuralParser::<T>::new(g.clone(), opts, seed)?;
        let build = t0.elapsed().as_secs_f64();
        let (mut s, mut w) = (0.0, 0);
        for e in &corpus {
            let t0 = Instant::now();
            parser.parse(&e.sentence)?;
            s += t0.elapsed().as_secs_f64();
            w += e.sentence.len();
        }
        let _ = writeln!(report, "seed {seed}: build {build:.3}s, {w} words in {s:.3}s, {:.4} s/word", s / w.max(1) as f64);
        if let Some(dir) = args.run_dir(seed)? {
            fs::write(dir.join("timing.txt"), timing(s, w))?;
        }
        secs += s;
        words += w;
    }
    let _ = writeln!(report, "n={} k={}: mean {:.4} s/word", opts.params.n, opts.params.k, secs / words.max(1) as f64);
    Ok(Outcome { accepted: true, report })
}
