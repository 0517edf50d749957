use std::process::{Command, Output};

fn bnlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnlp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn neural_parse_writes_run_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bnlp(&["--sentence", "cats chase mice", "--seed", "3", "--out", out, "--emit-dot", "--emit-trace"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("root chase"));
    let run = dir.path().join("neural-parse-seed3");
    let dot = std::fs::read_to_string(run.join("tree.dot")).unwrap();
    assert!(dot.starts_with("digraph parse"));
    let trace = std::fs::read_to_string(run.join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 4);
    assert!(std::fs::read_to_string(run.join("timing.txt")).unwrap().contains("seconds_per_word"));
}

#[test]
fn rejection_exits_one() {
    let o = bnlp(&["--sentence", "cats cats"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(bnlp(&["--grammar", "no-such-grammar"]).status.code(), Some(2));
    assert_eq!(bnlp(&["--sentence", "cats purr"]).status.code(), Some(2));
    assert_eq!(bnlp(&["--mode", "dyck", "--grammar", "svo", "--string", "()"]).status.code(), Some(2));
}

#[test]
fn pa_accept_prints_codes() {
    let o = bnlp(&["--mode", "pa-accept", "--sentence", "I go to school by bus on Monday"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("E_110000") && s.trim_end().ends_with("E_110300"), "{s}");
}

#[test]
fn dyck_and_stack_circuit() {
    let o = bnlp(&["--mode", "dyck", "--grammar", "nested", "--string", "aab", "--neural", "--n", "1000", "--k", "20", "--p", "0.05"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("stack circuit: rejected"));
    let o = bnlp(&["--mode", "dyck", "--grammar", "brackets", "--string", "( [ ] )"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn cs_compose_matches_language() {
    assert_eq!(bnlp(&["--mode", "cs-compose", "--grammar", "nested", "--string", "aarbb"]).status.code(), Some(0));
    assert_eq!(bnlp(&["--mode", "cs-compose", "--grammar", "nested", "--string", "aarb"]).status.code(), Some(1));
}

#[test]
fn xcheck_on_corpus_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.txt");
    std::fs::write(&path, "the cat\na big fat cat\n! cat big\n").unwrap();
    let o = bnlp(&["--mode", "xcheck", "--grammar", "noun_phrase", "--corpus", path.to_str().unwrap(), "--seeds", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("ok")).count(), 6);
}

#[test]
fn split_symbols_by_char_or_space() {
    assert_eq!(bnlp_cli::split_symbols("(()"), ["(", "(", ")"]);
    assert_eq!(bnlp_cli::split_symbols("ab cd"), ["ab", "cd"]);
}
