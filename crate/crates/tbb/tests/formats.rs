use std::fs;

use tbb::csvio::{read_records, write_profile, write_records};
use tbb::run_suite;
use tbb_core::bench::{default_tau_grid, perf_profile, BenchRecord, Metric};
use tbb_core::problems;
use tbb_core::solver::{SolverConfig, Status};
use tbb_core::StepSizeRule;

fn without_time(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f[7] = "";
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn suite_order_and_bytes_are_deterministic() {
    let set = vec![problems::make_example_81(100).unwrap(), problems::make_example_82(100).unwrap()];
    let rules = [StepSizeRule::Bb1, StepSizeRule::Tbb2Prime];
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..3 {
        let recs = run_suite(&set, &rules, &SolverConfig::default()).unwrap();
        let names: Vec<(&str, &str)> = recs.iter().map(|r| (r.problem.as_str(), r.rule.as_str())).collect();
        assert_eq!(
            names,
            [("ext_rosenbrock", "bb1"), ("ext_rosenbrock", "tbb2p"), ("ext_block_chain", "bb1"), ("ext_block_chain", "tbb2p")]
        );
        let path = dir.path().join(format!("r{i}.csv"));
        write_records(&path, &recs).unwrap();
        texts.push(fs::read_to_string(&path).unwrap());
    }
    assert_eq!(texts[0].lines().count(), 5);
    // only the wall-clock column may differ between runs
    assert_eq!(without_time(&texts[0]), without_time(&texts[1]));
    assert_eq!(without_time(&texts[0]), without_time(&texts[2]));
}

#[test]
fn failures_are_captured_not_raised() {
    let set = vec![problems::make_example_82(20).unwrap()];
    let cfg = SolverConfig { max_iters: 1, ..Default::default() };
    let recs = run_suite(&set, &StepSizeRule::ALL, &cfg).unwrap();
    assert_eq!(recs.len(), 6);
    assert!(recs.iter().all(|r| r.status == Status::MaxIters && r.iters == 1));
}

#[test]
fn records_round_trip() {
    let recs = vec![
        BenchRecord {
            problem: "ext_penalty".into(),
            n: 10,
            rule: "bb1".into(),
            status: Status::LineSearchFail,
            iters: 3,
            f_evals: 70,
            g_evals: 4,
            time_seconds: 0.1,
            f_gap: None,
        },
        BenchRecord {
            problem: "raydan1".into(),
            n: 10,
            rule: "bb1".into(),
            status: Status::Converged,
            iters: 9,
            f_evals: 12,
            g_evals: 10,
            time_seconds: 1.0 / 3.0,
            f_gap: Some(2.5e-13),
        },
    ];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    write_records(&path, &recs).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",NA"));
    assert_eq!(read_records(&path).unwrap(), recs);

    write_records(&path, &[]).unwrap();
    assert_eq!(fs::read_to_string(&path).unwrap(), "problem,n,rule,status,iters,f_evals,g_evals,time_s,f_gap\n");
    assert!(read_records(&path).unwrap().is_empty());
}

#[test]
fn malformed_records_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "problem,n,rule,status,iters,f_evals,g_evals,time_s,f_gap\nx,1,bb1,Bogus,1,1,1,0,NA\n").unwrap();
    let msg = read_records(&path).unwrap_err().to_string();
    assert!(msg.contains("line 2") && msg.contains("Bogus"), "{msg}");
}

#[test]
fn six_solver_profile_has_fifty_one_rows() {
    let set = vec![problems::make_example_81(20).unwrap(), problems::by_name("raydan2", 20).unwrap()];
    let recs = run_suite(&set, &StepSizeRule::ALL, &SolverConfig::default()).unwrap();
    let prof = perf_profile(&recs, Metric::Iters, &default_tau_grid()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.csv");
    write_profile(&path, &prof).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 51);
    assert!(text.lines().all(|l| l.split(',').count() == 7));
    assert_eq!(text.lines().next(), Some("tau,bb1,bb2,tbb1,tbb2,tbb1p,tbb2p"));
}
