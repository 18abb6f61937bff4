use std::io::Write;
use std::process::{Command, Output, Stdio};

fn quosyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quosyn")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn prop_eval_worked_example() {
    let out = quosyn(&["prop", "eval", "p & true"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "p");
}

#[test]
fn prop_eval_with_assignment() {
    let out = quosyn(&["prop", "eval", "p & (q | r)", "--assign", "p=T,q=F"]);
    assert_eq!(stdout(&out).trim(), "r");
}

#[test]
fn check_passes_with_exit_zero() {
    let out = quosyn(&["check", "prop", "--trials", "100", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("quotation_axiom"));
}

#[test]
fn check_json_is_a_report() {
    let out = quosyn(&["check", "ring", "--trials", "50", "--seed", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["instance"], "ring");
    let props = v["properties"].as_array().unwrap();
    assert!(props.iter().all(|p| p["trials"].as_u64() == p["passes"].as_u64()));
}

#[test]
fn check_output_is_deterministic() {
    let args = ["check", "goedel", "--trials", "50", "--seed", "9", "--json"];
    assert_eq!(quosyn(&args).stdout, quosyn(&args).stdout);
}

#[test]
fn mutated_check_fails_with_exit_one() {
    let out = quosyn(&["check", "prop", "--trials", "100", "--mutate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = quosyn(&["bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_input_is_exit_two() {
    assert_eq!(quosyn(&["check", "nosuch"]).status.code(), Some(2));
    assert_eq!(quosyn(&["prop", "eval", "p &"]).status.code(), Some(2));
    assert_eq!(quosyn(&["check", "prop", "--trials", "x"]).status.code(), Some(2));
    assert_eq!(quosyn(&["goedel", "decode", "-4"]).status.code(), Some(2));
}

#[test]
fn string_quotation() {
    let out = quosyn(&["str", "quote", "~p"]);
    assert_eq!(stdout(&out).trim(), "cons('~', cons('p', nil))");
    let out = quosyn(&["str", "eval", "cons('~', cons('p', nil))"]);
    assert_eq!(stdout(&out).trim(), "~p");
    let out = quosyn(&["str", "eval", "cons('~', nil)"]);
    assert_eq!(stdout(&out).trim(), "undefined");
}

#[test]
fn goedel_codes() {
    assert_eq!(stdout(&quosyn(&["goedel", "encode", "0 = x0"])).trim(), "863");
    assert_eq!(stdout(&quosyn(&["goedel", "decode", "23"])).trim(), "S(0)");
    assert_eq!(stdout(&quosyn(&["goedel", "decode", "2"])).trim(), "undefined");
    assert_eq!(stdout(&quosyn(&["goedel", "table"])).lines().count(), 11);
}

#[test]
fn lambda_commands() {
    assert_eq!(stdout(&quosyn(&["lambda", "nf", "(\\x y. x) y"])).trim(), "\\y1. y");
    assert_eq!(stdout(&quosyn(&["lambda", "rep", "x"])).trim(), "\\a b c. a x");
    assert_eq!(stdout(&quosyn(&["lambda", "selfinterp", "(\\x. x) (\\y. y)"])).trim(), "\\v. v");
    assert_eq!(stdout(&quosyn(&["lambda", "nf", "(\\x. x x) (\\x. x x)", "--fuel", "100"])).trim(), "⊥");
}

#[test]
fn ring_normalize() {
    assert_eq!(stdout(&quosyn(&["ring", "normalize", "(x0 + 1) * (x0 - 1)"])).trim(), "x0^2 - 1");
}

#[test]
fn qq_expands_and_evaluates() {
    let text = stdout(&quosyn(&["qq", "`(+ 2 ,(+ 3 1))"]));
    assert!(text.contains("spliced:   (+ 2 4)"), "{text}");
    assert!(text.contains("value:     (+ 2 4)"), "{text}");
}

#[test]
fn repl_reads_lines() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quosyn"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"(+ 1 2)\n(car '())\n`(a ,(* 2 3))\n(eval '(cons 1 '(2)))\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out), "3\n⊥\n(a 6)\n(1 2)\n");
}
