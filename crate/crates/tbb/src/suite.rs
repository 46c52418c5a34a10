use std::time::Instant;

use rayon::prelude::*;

use tbb_core::solver::{self, Clock, SolverConfig, SolverResult};
use tbb_core::{BenchRecord, ConfigError, Problem, StepSizeRule};

/// Seconds since construction.
#[derive(Debug, Clone, Copy)]
pub struct StdClock(Instant);

impl StdClock {
    pub fn start() -> Self {
        StdClock(Instant::now())
    }
}

impl Clock for StdClock {
    fn elapsed_seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

/// `minimize` timed by the wall clock, started just before the first
/// evaluation.
pub fn solve(problem: &Problem, cfg: &SolverConfig) -> Result<SolverResult, ConfigError> {
    solver::minimize_with_clock(problem, cfg, &StdClock::start())
}

/// One record per `(problem, rule)` cell, problem-major. Cells run in
/// parallel but the output order never depends on scheduling.
pub fn run_suite(
    problems: &[Problem],
    rules: &[StepSizeRule],
    base_cfg: &SolverConfig,
) -> Result<Vec<BenchRecord>, ConfigError> {
    base_cfg.validate()?;
    let cells: Vec<(&Problem, StepSizeRule)> = problems
        .iter()
        .flat_map(|p| rules.iter().map(move |&r| (p, r)))
        .collect();
    cells
        .into_par_iter()
        .map(|(p, rule)| {
            let cfg = base_cfg.with_rule(rule);
            let result = solve(p, &cfg)?;
            Ok(BenchRecord::from_result(p, rule, &result))
        })
        .collect()
}
