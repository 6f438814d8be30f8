use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sortsweep::cnf::{evaluate, Assignment};
use sortsweep::dimacs::parse_dimacs;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sortsweep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Reads the v-line back into a total assignment.
fn model_from(out: &str, n: u32) -> Assignment {
    let line = out.lines().find(|l| l.starts_with("v ")).expect("v-line");
    let mut values = vec![false; n as usize];
    for tok in line[2..].split_whitespace() {
        let x: i64 = tok.parse().unwrap();
        if x > 0 {
            values[x as usize - 1] = true;
        }
    }
    Assignment::total(values)
}

fn assert_model_verifies(path: &str, out: &str) {
    let f = parse_dimacs(&fs::read_to_string(Path::new(path)).unwrap())
        .unwrap()
        .formula;
    assert!(evaluate(&f, &model_from(out, f.num_vars())).unwrap());
}

#[test]
fn solve_complete_signs_is_unsat_by_reduction() {
    let dir = TempDir::new().unwrap();
    let gen = run(&["gen", "--complete-signs", "3"]);
    assert_eq!(code(&gen), 0);
    let path = write(&dir, "cs.cnf", &stdout(&gen));
    let o = run(&["solve", &path]);
    assert_eq!(code(&o), 20);
    let out = stdout(&o);
    assert!(out.contains("s UNSATISFIABLE\n"));
    assert!(out.contains("c reason: reduction\n"));
}

#[test]
fn solve_single_clause() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "one.cnf", "p cnf 3 1\n1 2 3 0\n");
    let o = run(&["solve", &path]);
    assert_eq!(code(&o), 10);
    let out = stdout(&o);
    assert!(out.contains("s SATISFIABLE\n"));
    assert_model_verifies(&path, &out);

    let quiet = run(&["solve", "--no-model", &path]);
    assert_eq!(code(&quiet), 10);
    assert!(!stdout(&quiet).contains("\nv "));
}

#[test]
fn solve_rejects_four_literal_clause() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "wide.cnf", "p cnf 4 1\n1 2 3 4 0\n");
    let o = run(&["solve", &path]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(stdout(&o).is_empty());
}

#[test]
fn unsat_by_exhaustion() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "cyc.cnf",
        "p cnf 5 6\n-1 2 0\n-2 3 0\n-1 -3 0\n1 4 0\n-4 5 0\n1 -5 0\n",
    );
    let o = run(&["solve", &path]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).contains("c reason: exhaustion\n"));
    let e = run(&["enumerate", &path]);
    assert_eq!(code(&e), 20);
    assert!(stdout(&e).contains("c branches: 0\n"));
}

#[test]
fn budget_gives_unknown() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "cyc.cnf",
        "p cnf 5 6\n-1 2 0\n-2 3 0\n-1 -3 0\n1 4 0\n-4 5 0\n1 -5 0\n",
    );
    let o = run(&["solve", "--budget", "1", &path]);
    assert_eq!(code(&o), 30);
    assert!(stdout(&o).contains("s UNKNOWN\n"));
}

#[test]
fn enumerate_expansion_example() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "ex.cnf",
        &stdout(&run(&["gen", "--expansion-example"])),
    );
    let o = run(&["enumerate", "--limit", "20", &path]);
    assert_eq!(code(&o), 10);
    let out = stdout(&o);
    let picks: Vec<&str> = out
        .lines()
        .filter_map(|l| l.strip_prefix("c branch "))
        .map(|l| l.split_once(": ").unwrap().1)
        .collect();
    assert_eq!(
        picks,
        ["7 10", "7 11", "7 12", "8 10", "8 11", "8 12", "9 10", "9 11", "9 12"]
    );
    assert_eq!(out.lines().filter(|l| l.starts_with("v ")).count(), 9);

    let one = run(&["enumerate", "--limit", "1", &path]);
    assert_eq!(code(&one), 10);
    assert!(stdout(&one).contains("c branches: 1\n"));
}

#[test]
fn enumerate_unsat_has_no_branches() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let o = run(&["enumerate", &path]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).contains("c branches: 0\n"));
    assert!(!stdout(&o).contains("\nv "));
}

#[test]
fn gen_is_stable() {
    let a = run(&["gen", "--n", "5", "--m", "10", "--seed", "42"]);
    let b = run(&["gen", "--n", "5", "--m", "10", "--seed", "42"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let f = parse_dimacs(&stdout(&a)).unwrap().formula;
    assert_eq!((f.num_vars(), f.len()), (5, 10));
}

#[test]
fn reduce_trace_has_one_merge() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "r1.cnf", "p cnf 3 2\n1 2 3 0\n1 2 -3 0\n");
    let trace = dir.path().join("t.log");
    let o = run(&["reduce", "--trace", trace.to_str().unwrap(), &path]);
    assert_eq!(code(&o), 0);
    let log = fs::read_to_string(&trace).unwrap();
    assert_eq!(log, "1 r1-merge 1 2 => 3: 1 2\n");
    assert!(stdout(&o).ends_with("p cnf 3 1\n1 2 0\n"));
}

#[test]
fn oracle_command() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "x.cnf", "p cnf 3 2\n1 2 3 0\n-1 0\n");
    let o = run(&["oracle", &path]);
    assert_eq!(code(&o), 10);
    assert!(stdout(&o).contains("c models: 3\n"));
    assert_model_verifies(&path, &stdout(&o));
    let u = write(&dir, "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    assert_eq!(code(&run(&["oracle", &u])), 20);
}

#[test]
fn verify_appendix() {
    let o = run(&["verify-appendix"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("exactly_one_models=3"));
    assert!(out.contains("odd_parity_models=4"));
    assert!(out.contains("needs_r4=pair/B=W"));
    assert!(out.contains("unit_rule_equivalent=false"));

    let r4 = stdout(&run(&["verify-appendix", "--enable-r4"]));
    assert!(r4.contains("discrepancies=\"\""));
}

#[test]
fn harness_output_independent_of_workers() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let args = |out: &Path, w: &str| {
        run(&[
            "harness",
            "--count",
            "60",
            "--seed",
            "5",
            "--n-max",
            "10",
            "--workers",
            w,
            "--out",
            out.to_str().unwrap(),
        ])
    };
    assert_eq!(code(&args(&a, "1")), 0);
    assert_eq!(code(&args(&b, "4")), 0);
    let ra = fs::read_to_string(a.join("report.txt")).unwrap();
    assert_eq!(ra, fs::read_to_string(b.join("report.txt")).unwrap());
    assert!(ra.contains("solver_bug=0"));
}

#[test]
fn bench_within_bound() {
    let o = run(&["bench", "--n", "20", "--m", "60"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o).lines().next().unwrap().to_string();
    let rec = sortsweep::report::Record::parse(&line).unwrap();
    let cmp: f64 = rec.get("comparisons").unwrap().parse().unwrap();
    let bound: f64 = rec.get("comparison_bound").unwrap().parse().unwrap();
    assert_eq!(rec.get("records"), Some("360"));
    assert!(cmp <= bound);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["solve"])), 1);
    assert_eq!(code(&run(&["solve", "--backend", "quantum", "x.cnf"])), 1);
    assert_eq!(code(&run(&["solve", "/nonexistent/file.cnf"])), 1);
    assert_eq!(code(&run(&["gen", "--n", "2", "--m", "1"])), 1);
    assert_eq!(code(&run(&["gen", "--complete-signs", "4"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}
