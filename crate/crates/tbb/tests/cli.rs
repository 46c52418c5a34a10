use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tbb")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

#[test]
fn rosenbrock_solve_converges_near_twenty_iterations() {
    let out = tbb(&["solve", "--problem", "ext_rosenbrock", "--n", "10000", "--rule", "tbb2p", "--tol-mode", "abs", "--tol", "1e-4"]);
    assert_eq!(code(&out), 0);
    let line = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields.len(), 5, "{line}");
    assert_eq!(fields[0], "Converged");
    let iters: usize = fields[1].parse().unwrap();
    assert!((10..=40).contains(&iters), "{iters}");
}

#[test]
fn exit_codes() {
    let odd = tbb(&["solve", "--problem", "ext_rosenbrock", "--n", "10001", "--rule", "tbb2p"]);
    assert_eq!(code(&odd), 2);
    assert!(String::from_utf8_lossy(&odd.stderr).contains("10001"));
    assert_eq!(code(&tbb(&["solve", "--problem", "nope", "--n", "10"])), 2);
    assert_eq!(code(&tbb(&["solve", "--problem", "raydan1", "--n", "10", "--frobnicate"])), 2);
    assert_eq!(code(&tbb(&["solve", "--problem", "raydan1", "--n", "10", "--rule", "bb3"])), 2);
    assert_eq!(code(&tbb(&["solve", "--problem", "raydan1", "--n", "10", "--mu1", "0.5"])), 2);
    assert_eq!(code(&tbb(&["profile", "--in", "missing.csv", "--out", "p.csv"])), 3);
    let capped = tbb(&["solve", "--problem", "ext_block_chain", "--n", "20", "--max-iters", "1"]);
    assert_eq!(code(&capped), 1);
    assert!(String::from_utf8_lossy(&capped.stdout).starts_with("MaxIters 1 "));
}

#[test]
fn help_shows_reference_defaults() {
    let help = String::from_utf8(tbb(&["solve", "--help"]).stdout).unwrap();
    for flag in [
        ("--mu1", "0.32"),
        ("--mu2", "0.32"),
        ("--omega", "0.76"),
        ("--alpha-min", "0.006"),
        ("--alpha-max", "100"),
        ("--sigma1", "0.52"),
        ("--sigma2", "1.2"),
        ("--relax", "1"),
    ] {
        let block = help.split(flag.0).nth(1).unwrap();
        let default = block.split("[default: ").nth(1).unwrap();
        assert!(default.starts_with(&format!("{}]", flag.1)), "{} -> {default:.20}", flag.0);
    }
}

#[test]
fn list_problems_prints_collection() {
    let out = String::from_utf8(tbb(&["list-problems"]).stdout).unwrap();
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("name,dim_constraint"));
    assert_eq!(lines.next(), Some("ext_rosenbrock,even"));
    assert!(out.contains("ext_block_chain,multiple_of_10\n"));
    assert_eq!(out.lines().count(), 1 + tbb_core::problems::catalog().len());
}

#[test]
fn check_grad_reports_error() {
    let out = tbb(&["check-grad", "--problem", "ext_powell", "--n", "16"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let err: f64 = text.split_whitespace().last().unwrap().parse().unwrap();
    assert!(err <= 1e-5);
}

#[test]
fn trace_and_diagnostics_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    for p in [&a, &b] {
        let out = tbb(&["solve", "--problem", "ext_rosenbrock", "--n", "2", "--rule", "tbb2p", "--trace", p, "--diagnose"]);
        assert_eq!(code(&out), 0);
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("k,f,gnorm,alpha_bar,lambda,p\n"));
    let block = text.split("# diagnostics\n").nth(1).expect("diagnostics block");
    assert!(block.starts_with("root_rate,"));
    assert!(block.contains("\nmonotone,true\n"));
}

#[test]
fn bench_then_profile() {
    let dir = tempfile::tempdir().unwrap();
    let (rec, prof, ratios) = (path(dir.path(), "r.csv"), path(dir.path(), "p.csv"), path(dir.path(), "q.csv"));
    let out = tbb(&["bench", "--problems", "ext_rosenbrock,raydan2", "--n", "20", "--rules", "bb1,tbb2p", "--out", &rec]);
    assert_eq!(code(&out), 0);
    let records = fs::read_to_string(&rec).unwrap();
    assert_eq!(records.lines().count(), 5);
    let rows: Vec<Vec<&str>> = records.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let cells: Vec<(&str, &str)> = rows.iter().map(|r| (r[0], r[2])).collect();
    assert_eq!(
        cells,
        [("ext_rosenbrock", "bb1"), ("ext_rosenbrock", "tbb2p"), ("raydan2", "bb1"), ("raydan2", "tbb2p")]
    );

    let out = tbb(&["profile", "--in", &rec, "--metric", "f_evals", "--out", &prof, "--ratios", &ratios]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let profile = fs::read_to_string(&prof).unwrap();
    assert_eq!(profile.lines().next(), Some("tau,bb1,tbb2p"));
    assert_eq!(profile.lines().count(), 51);
    assert!(fs::read_to_string(&ratios).unwrap().starts_with("problem,n,bb1,tbb2p\n"));
    assert_eq!(code(&tbb(&["profile", "--in", &rec, "--metric", "walltime", "--out", &prof])), 2);
}
