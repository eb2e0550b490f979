use std::path::PathBuf;
use std::process::Command;

use qpedge::cli::{run_args, Outcome, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_UNSUPPORTED, EXIT_VERIFY};
use qpedge::format::{parse_qp, print_qp};
use qpedge::suites::{EXAMPLE31_CONTRACTED_QP, EXAMPLE31_QP};

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("qpedge").chain(args.iter().copied()))
}

const A2: &str = "quiver a2\nvertices: i, j\narrows: a: i -> j\npotential: 0\n\
element f: gamma: i=1; poly: x[i,1]\nelement g: gamma: j=1; poly: 1\n\
element big: gamma: i=2; poly: 1\n";

#[test]
fn contract_prints_the_published_example() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "ex.qp", EXAMPLE31_QP);
    let out = run(&["contract", "--arrow", "a0", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout, print_qp(&parse_qp(EXAMPLE31_CONTRACTED_QP).unwrap()));
    // byte-stable across runs
    assert_eq!(run(&["contract", "--arrow", "a0", p.to_str().unwrap()]), out);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = file(&dir, "bad.qp", "quiver b\nvertices: i\narrows: a: i -> q\n");
    let out = Command::new(env!("CARGO_BIN_EXE_qpedge")).args(["contract", "--arrow", "a"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("3:17: error: unknown vertex `q`"), "{err}");
}

#[test]
fn verify_fermion_passes() {
    let out = run(&["verify", "fermion"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(out.stdout.ends_with("fermion: ok\n"));
}

#[test]
fn unknown_suite_is_out_of_scope() {
    assert_eq!(run(&["verify", "nope"]).code, EXIT_UNSUPPORTED);
}

#[test]
fn mutation_at_a_looped_vertex_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "ex.qp", EXAMPLE31_QP);
    let out = run(&["mutate", "--vertex", "i-", p.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_PRECONDITION);
    assert!(out.stderr.contains("loop"));
}

#[test]
fn pairing_above_rank_one_is_out_of_scope() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "a2.qp", A2);
    assert_eq!(run(&["pair", p.to_str().unwrap(), "big", "big"]).code, EXIT_UNSUPPORTED);
}

#[test]
fn shuffle_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "a2.qp", A2);
    let p = p.to_str().unwrap();
    let out = run(&["shuffle-mul", p, "f", "g"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out.stdout.starts_with("gamma: i=1,j=1; poly: "));
    let inline = run(&["shuffle-mul", p, "gamma: i=1; poly: x[i,1]", "g"]);
    assert_eq!(inline.stdout, out.stdout);
    let c = run(&["contract-shuffle", "--arrow", "a", p, "gamma: i=1,j=1; poly: x[i,1]+x[j,1]"]);
    assert_eq!(c.stdout, "gamma: i=1; poly: 2*x[i,1]\n");
    let s = run(&["spherical-span", p, "--gamma", "i=1,j=1", "--degree", "1", "--member", "gamma: i=1,j=1; poly: 1"]);
    assert_eq!(s.code, EXIT_OK, "{}", s.stderr);
    assert!(s.stdout.ends_with("membership: member\n"));
    assert_eq!(run(&["shuffle-mul", p, "f", "nothing"]).code, EXIT_PRECONDITION);
    assert_eq!(run(&["shuffle-mul", p, "f", "gamma: i=1; poly: x[k,1]"]).code, EXIT_PARSE);
}

#[test]
fn walls_and_eta() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = file(&dir, "a2.qp", A2);
    let out = run(&["walls", a2.to_str().unwrap(), "--primes", "2"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("(1,1); (1,1); (1,-1); true"));
    assert!(out.stdout.contains("(1,1); (1,1); (-1,1); false"));
    let q = file(&dir, "s.qp", "quiver s\nvertices: p, m, j\narrows: a0: p -> m; b: m -> j\npotential: 0\n");
    let eta = run(&["eta-check", "--arrow", "a0", q.to_str().unwrap(), "--primes", "2"]);
    assert_eq!(eta.code, EXIT_OK, "{}", eta.stdout);
    // needs a negative parameter on this quiver
    let q = file(&dir, "t.qp", "quiver t\nvertices: p, m, j\narrows: a0: p -> m; b: j -> m\npotential: 0\n");
    let q = q.to_str().unwrap();
    assert_eq!(run(&["eta-check", "--arrow", "a0", q, "--primes", "2"]).code, EXIT_VERIFY);
    let wide = run(&["eta-check", "--arrow", "a0", q, "--primes", "2", "--kparams", "1/2,1,2,-2,-1/2"]);
    assert_eq!(wide.code, EXIT_OK, "{}", wide.stdout);
}

#[test]
fn usage_errors_are_parse_errors() {
    assert_eq!(run(&["contract"]).code, EXIT_PARSE);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
}

#[test]
fn mutation_output_feeds_back_in() {
    let dir = tempfile::tempdir().unwrap();
    let p = file(&dir, "ex.qp", EXAMPLE31_QP);
    let m = run(&["mutate", "--vertex", "1", p.to_str().unwrap()]);
    assert_eq!(m.code, EXIT_OK, "{}", m.stderr);
    assert!(m.stdout.contains("[c*b]"));
    let mp = file(&dir, "mu.qp", &m.stdout);
    let c = run(&["contract", "--arrow", "a0", mp.to_str().unwrap()]);
    assert_eq!(c.code, EXIT_OK, "{}", c.stderr);
    assert!(c.stdout.starts_with("quiver example31/mu-1/a0\n"));
}
