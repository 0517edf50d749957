//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bnlp::automaton::{
    cs_compose, dyck_accepts, pa_accepts, BracketPair, CsConfig, Dfa, Homomorphism, ParserAutomaton, Regex, Variable,
};
use bnlp::engine::{ParserOptions, StepRecord};
use bnlp::grammar::{builtin, builtin_corpus, TokenMode};
use bnlp::neural::AreaParams;
use bnlp::oracles::{counter_balanced, cyk_accepts, CnfGrammar, Nfa};
use bnlp::ParserF32;

// Pinned tolerances.
const REGEX_CASES: usize = 200;
const DFA_CASES: usize = 100;
const MAX_FORMAL_LEN: usize = 6;
const FORMAL_BUDGET: Duration = Duration::from_secs(60);
const DYCK_LEN: usize = 12;
const DYCK_TWO_PAIR_SAMPLES: usize = 100_000;
const CS_LEN: usize = 10;
const SEEDS: u64 = 10;
const DISTINCT_MAX: f64 = 0.25;
const CONFIRM_MIN: f64 = 0.75;
const RC_SEEDS_REQUIRED: usize = 9;
const CONFUSION_MIN: f64 = 0.25;
const CONFUSION_SEEDS_REQUIRED: usize = 8;
const MAX_SECONDS_PER_WORD: f64 = 1.0;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, detail: String) {
        if !ok {
            self.failed += 1;
        }
        println!("[{}] criterion {id}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn strings(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut layer: Vec<Vec<String>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for a in alphabet {
                let mut t = s.clone();
                t.push(a.to_string());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

const SYMBOLS: [&str; 3] = ["a", "b", "c"];

fn random_variable(rng: &mut ChaCha8Rng, id: usize) -> Variable {
    loop {
        let set: BTreeSet<String> = SYMBOLS.iter().filter(|_| rng.gen_bool(0.5)).map(|s| s.to_string()).collect();
        if !set.is_empty() {
            // Reuse a small pool of names so duplicates get renamed.
            return Variable { name: format!("v{}", id % 3), accepts: set };
        }
    }
}

fn random_regex(rng: &mut ChaCha8Rng, depth: usize, vars: &mut usize) -> Regex {
    let leaf = depth == 0 || *vars >= 4 || rng.gen_bool(0.25);
    if leaf {
        if *vars >= 4 || rng.gen_bool(0.15) {
            return Regex::Eps;
        }
        *vars += 1;
        return Regex::Var(random_variable(rng, *vars));
    }
    match rng.gen_range(0..3) {
        0 => {
            let a = random_regex(rng, depth - 1, vars);
            Regex::concat(a, random_regex(rng, depth - 1, vars))
        }
        1 => {
            let a = random_regex(rng, depth - 1, vars);
            Regex::union(a, random_regex(rng, depth - 1, vars))
        }
        _ => Regex::star(random_regex(rng, depth - 1, vars)),
    }
}

fn random_dfa(rng: &mut ChaCha8Rng) -> Dfa {
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=3);
    let alphabet: Vec<String> = SYMBOLS[..k].iter().map(|s| s.to_string()).collect();
    let delta = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..n)).collect()).collect();
    let accepting = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Dfa::new(alphabet, delta, rng.gen_range(0..n), accepting).unwrap()
}

fn criterion_1(r: &mut Report) {
    let t0 = Instant::now();
    let inputs = strings(&SYMBOLS, MAX_FORMAL_LEN);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checked, mut bad) = (0usize, 0usize);
    let mut max_vars = 0;
    let mut max_depth = 0;
    for _ in 0..REGEX_CASES {
        let mut vars = 0;
        let re = random_regex(&mut rng, 3, &mut vars).dedupe_variables();
        max_vars = max_vars.max(re.variables().len());
        max_depth = max_depth.max(re.depth());
        let pa = ParserAutomaton::from_regex(&re).unwrap();
        let nfa = Nfa::from_regex(&re);
        for s in &inputs {
            checked += 1;
            if pa.accepts(s) != nfa.accepts(s) {
                bad += 1;
            }
        }
    }
    let mut dfa_checked = 0usize;
    for _ in 0..DFA_CASES {
        let dfa = random_dfa(&mut rng);
        let syms: Vec<&str> = dfa.alphabet.iter().map(String::as_str).collect();
        let pa = dfa.to_regex().map(|re| ParserAutomaton::from_regex(&re.dedupe_variables()).unwrap());
        for s in strings(&syms, MAX_FORMAL_LEN) {
            dfa_checked += 1;
            let got = pa.as_ref().is_some_and(|pa| pa.accepts(&s));
            if got != dfa.accepts(&s) {
                bad += 1;
            }
        }
    }
    let elapsed = t0.elapsed();
    r.line(
        "1",
        bad == 0 && elapsed < FORMAL_BUDGET && max_vars <= 4 && max_depth <= 3,
        format!(
            "{REGEX_CASES} regexes ({checked} strings) + {DFA_CASES} DFAs ({dfa_checked} strings), len<={MAX_FORMAL_LEN}: \
             {bad} discrepancies, {:.1}s (limit {}s)",
            elapsed.as_secs_f64(),
            FORMAL_BUDGET.as_secs()
        ),
    );
}

fn criterion_2(r: &mut Report) {
    let one = [BracketPair::new("(", ")")];
    let two = [BracketPair::new("(", ")"), BracketPair::new("[", "]")];
    let mut bad = 0;
    let mut n1 = 0;
    for s in strings(&["(", ")"], DYCK_LEN) {
        n1 += 1;
        if dyck_accepts(&one, &s).unwrap().accepted != counter_balanced(&one, &s) {
            bad += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let syms = ["(", ")", "[", "]"];
    for _ in 0..DYCK_TWO_PAIR_SAMPLES {
        let len = rng.gen_range(0..=DYCK_LEN);
        let s: Vec<&str> = (0..len).map(|_| *syms.choose(&mut rng).unwrap()).collect();
        if dyck_accepts(&two, &s).unwrap().accepted != counter_balanced(&two, &s) {
            bad += 1;
        }
    }
    let chars = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
    let a = dyck_accepts(&one, &chars("((()")).unwrap();
    let b = dyck_accepts(&one, &chars("()(())")).unwrap();
    let anchors = !a.accepted && a.trace.last() == Some(&vec![2]) && b.accepted;
    r.line(
        "2",
        bad == 0 && anchors,
        format!(
            "{n1} one-pair strings + {DYCK_TWO_PAIR_SAMPLES} two-pair samples, len<={DYCK_LEN}: {bad} discrepancies; \
             \"((()\" ends at d={} ({}), \"()(())\" {}",
            a.trace.last().unwrap()[0],
            if a.accepted { "accepted" } else { "rejected" },
            if b.accepted { "accepted" } else { "rejected" }
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let ident = |s: &str| BTreeSet::from([s.to_string()]);
    let pairs = [BracketPair::new("a", "b")];
    let cfg = CsConfig::default();
    let inputs = strings(&["a", "b", "r"], CS_LEN);
    // S -> aSb | r, and the same with S -> SS.
    let nested = Regex::parse("a* r b*", ident).unwrap().dedupe_variables();
    let no_ab = Regex::parse("(b | r | a a* r)* ((b | r | a a* r) | a a*)", ident).unwrap().dedupe_variables();
    let cases = [(nested, CnfGrammar::nested("a", "b", "r")), (no_ab, CnfGrammar::nested_with_concat("a", "b", "r"))];
    let mut bad = 0;
    let mut errors = 0;
    let mut accepted = [0usize; 2];
    for (i, (re, g)) in cases.iter().enumerate() {
        let pa = ParserAutomaton::from_regex(re).unwrap();
        for s in &inputs {
            match cs_compose(&pa, &pairs, &Homomorphism::identity(), s, &cfg) {
                Ok(run) => {
                    accepted[i] += run.accepted as usize;
                    if run.accepted != cyk_accepts(g, s) {
                        bad += 1;
                    }
                }
                Err(_) => errors += 1,
            }
        }
    }
    r.line(
        "3",
        bad == 0 && errors == 0,
        format!(
            "{} strings len<={CS_LEN} per grammar (S->aSb|r: {} in language; with S->SS: {}): {bad} discrepancies, {errors} search errors",
            inputs.len(),
            accepted[0],
            accepted[1]
        ),
    );
}

fn criterion_4(r: &mut Report) {
    let g = builtin("svo").unwrap();
    let re = g.pattern_regex(TokenMode::Pos).unwrap().unwrap();
    let pa = ParserAutomaton::from_regex(&re).unwrap();
    let tags = g.tag(&"I go to school by bus on Monday".split(' ').collect::<Vec<_>>()).unwrap();
    let run = pa_accepts(&pa, &tags);
    let codes: Vec<String> = run.path.iter().map(|s| s.code.to_string()).collect();
    let after_second = run.path.iter().filter(|s| s.input.is_some()).nth(1).map(|s| s.code.to_string());
    let expected = [
        "E_000000", "E_100000", "E_110000", "E_110010", "E_110011", "E_110100", "E_110110", "E_110111", "E_110200",
        "E_110210", "E_110211", "E_110300",
    ];
    let last = run.path.last().unwrap().code.clone();
    let closed = pa.is_final(&last) && last.digits()[4..].iter().all(|d| *d == 0);
    r.line(
        "4",
        run.accepted && after_second.as_deref() == Some("E_110000") && codes == expected && closed,
        format!(
            "{} -> {}; after word 2: {}; path {}",
            tags.join(" "),
            if run.accepted { "accepted" } else { "rejected" },
            after_second.unwrap_or_default(),
            codes.join(" ")
        ),
    );
}

fn landing_assembly(s: &StepRecord) -> &bnlp::neural::Assembly {
    &s.winners[s.landing.as_ref().unwrap()]
}

fn criterion_5(r: &mut Report) {
    let sentence: Vec<&str> = "a big fat bad orange cat".split(' ').collect();
    let k = AreaParams::FAST.k;
    let (mut parsed, mut routed, mut distinct, mut confirmed) = (0, 0, 0, 0);
    let mut worst_overlap: f64 = 0.0;
    let mut min_confirm: f64 = 1.0;
    for seed in 0..SEEDS {
        let p = ParserF32::new(builtin("noun_phrase").unwrap(), ParserOptions::default(), seed).unwrap();
        let parse = p.parse(&sentence).unwrap();
        let Some(tree) = parse.tree() else { continue };
        parsed += 1;
        let areas: Vec<&str> = parse.trace.steps[1..5].iter().map(|s| s.landing.as_deref().unwrap()).collect();
        routed += (areas == ["Adj", "Adj^1", "Adj^2", "Adj^1"]) as usize;
        let ov = landing_assembly(&parse.trace.steps[2]).overlap_fraction(landing_assembly(&parse.trace.steps[4]), k);
        worst_overlap = worst_overlap.max(ov);
        distinct += (ov < DISTINCT_MAX) as usize;
        let chain: Vec<_> = tree.edges.iter().filter(|e| e.target_area != "Adj" || e.source_area != "Det").collect();
        let m = chain.iter().map(|e| e.overlap).fold(1.0, f64::min);
        min_confirm = min_confirm.min(m);
        confirmed += (m >= CONFIRM_MIN) as usize;
    }
    let n = SEEDS as usize;
    r.line(
        "5",
        parsed == n && routed == n && distinct == n && confirmed >= RC_SEEDS_REQUIRED,
        format!(
            "{parsed}/{n} parsed, ring routing {routed}/{n}, Adj^1 reuse overlap max {worst_overlap:.2} (<{DISTINCT_MAX}), \
             chain confirmed {confirmed}/{n} (need {RC_SEEDS_REQUIRED}, min overlap {min_confirm:.2})"
        ),
    );
}

fn criterion_6(r: &mut Report) {
    let opts = ParserOptions { circuits: false, ..ParserOptions::default() };
    let k = opts.params.k;
    let mut confused = 0;
    let mut overlaps = Vec::new();
    for seed in 0..SEEDS {
        let p = ParserF32::new(builtin("noun_phrase").unwrap(), opts, seed).unwrap();
        let parse = p.parse(&["big", "fat", "cat"]).unwrap();
        let s = &parse.trace.steps;
        let both_in_adj = s.len() >= 2 && s[0].landing.as_deref() == Some("Adj") && s[1].landing.as_deref() == Some("Adj");
        if !both_in_adj {
            continue;
        }
        let ov = landing_assembly(&s[0]).overlap_fraction(landing_assembly(&s[1]), k);
        overlaps.push(ov);
        confused += (ov >= CONFUSION_MIN) as usize;
    }
    let min = overlaps.iter().copied().fold(1.0, f64::min);
    r.line(
        "6",
        confused >= CONFUSION_SEEDS_REQUIRED,
        format!(
            "circuits off, \"big fat\" both in Adj: overlap >= {CONFUSION_MIN} on {confused}/{SEEDS} seeds \
             (need {CONFUSION_SEEDS_REQUIRED}, min {min:.2})"
        ),
    );
}

fn criterion_7_and_8(r: &mut Report) {
    let (mut runs, mut disagree, mut unexpected, mut sentences) = (0, 0, 0, 0);
    let mut words = 0usize;
    let mut time = Duration::ZERO;
    for name in ["svo", "noun_phrase"] {
        let g = builtin(name).unwrap();
        let pa = ParserAutomaton::from_regex(&g.pattern_regex(TokenMode::Pos).unwrap().unwrap()).unwrap();
        let corpus = builtin_corpus(name).unwrap();
        sentences += corpus.len();
        for seed in 0..SEEDS {
            let p = ParserF32::new(g.clone(), ParserOptions::default(), seed).unwrap();
            for e in &corpus {
                let t0 = Instant::now();
                let neural = p.parse(&e.sentence).unwrap().accepted();
                time += t0.elapsed();
                words += e.sentence.len();
                let formal = pa.accepts(&g.tag(&e.sentence).unwrap());
                runs += 1;
                disagree += (neural != formal) as usize;
                unexpected += (formal != e.expect_accept) as usize;
            }
        }
    }
    r.line(
        "7",
        disagree == 0 && unexpected == 0 && sentences >= 20,
        format!("{sentences} corpus sentences x {SEEDS} seeds: {disagree}/{runs} neural/formal disagreements, {unexpected} unexpected verdicts"),
    );
    let per_word = time.as_secs_f64() / words as f64;
    let big = large_run();
    r.line(
        "8",
        per_word < MAX_SECONDS_PER_WORD,
        format!(
            "{per_word:.4} s/word at n=10^4 (limit {MAX_SECONDS_PER_WORD}); n=10^6, k=10^3: {big:.2} s/word (not gated)"
        ),
    );
}

fn large_run() -> f64 {
    let params = AreaParams::new(1_000_000, 1_000, 0.001, 0.2).unwrap();
    let opts = ParserOptions { params, ..ParserOptions::default() };
    let p = ParserF32::new(builtin("svo").unwrap(), opts, 0).unwrap();
    let t0 = Instant::now();
    p.parse(&["cats", "chase", "mice"]).unwrap();
    t0.elapsed().as_secs_f64() / 3.0
}

fn main() {
    let mut r = Report { failed: 0 };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7_and_8(&mut r);
    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
