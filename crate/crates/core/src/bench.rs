//! Benchmark records and Dolan–Moré performance profiles.
//!
//! For problem `p` and solver `s` with cost `m_{p,s}`, the ratio is
//! `r_{p,s} = m_{p,s} / min_{s'} m_{p,s'}` over successful runs, and the
//! profile is `P_s(τ) = |{p : r_{p,s} ≤ τ}| / #problems`. Failed runs get an
//! infinite ratio, and problems nobody solved still count in the denominator.
//!
//! Costs are clamped below by one unit of the metric (one iteration or
//! evaluation, one microsecond) so that a zero cost never divides.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::problems::Problem;
use crate::solver::{SolverResult, Status};
use crate::stepsize::StepSizeRule;

/// One solve of one problem by one solver.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub problem: String,
    pub n: usize,
    pub rule: String,
    pub status: Status,
    pub iters: usize,
    pub f_evals: usize,
    pub g_evals: usize,
    pub time_seconds: f64,
    /// `|f_final − f*|`, present iff the problem's optimum value is known.
    pub f_gap: Option<f64>,
}

impl BenchRecord {
    pub fn from_result(problem: &Problem, rule: StepSizeRule, result: &SolverResult) -> Self {
        BenchRecord {
            problem: problem.name().into(),
            n: problem.dim(),
            rule: rule.as_str().into(),
            status: result.status,
            iters: result.iters(),
            f_evals: result.n_f_evals,
            g_evals: result.n_g_evals,
            time_seconds: result.wall_time_seconds,
            f_gap: result.f_gap(problem),
        }
    }

    pub fn solved(&self) -> bool {
        self.status == Status::Converged
    }

    pub fn metric(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Iters => self.iters as f64,
            Metric::FEvals => self.f_evals as f64,
            Metric::GEvals => self.g_evals as f64,
            Metric::Time => self.time_seconds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Iters,
    FEvals,
    GEvals,
    Time,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Iters, Metric::FEvals, Metric::GEvals, Metric::Time];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Iters => "iters",
            Metric::FEvals => "f_evals",
            Metric::GEvals => "g_evals",
            Metric::Time => "time",
        }
    }

    /// Smallest cost a successful run is credited with.
    pub fn unit(&self) -> f64 {
        match self {
            Metric::Time => 1e-6,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown metric `{0}` (expected iters, f_evals, g_evals or time)")]
pub struct UnknownMetric(pub String);

impl FromStr for Metric {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMetric(s.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("no record for problem `{problem}` (n = {n}) and solver `{solver}`")]
    MissingCell {
        problem: String,
        n: usize,
        solver: String,
    },
    #[error("two records for problem `{problem}` (n = {n}) and solver `{solver}`")]
    DuplicateCell {
        problem: String,
        n: usize,
        solver: String,
    },
    #[error("tau grid must be non-empty, strictly increasing and start at 1")]
    InvalidTauGrid,
    #[error("no records")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerformanceProfile {
    pub metric: Metric,
    pub solver_names: Vec<String>,
    /// `(name, n)` per row, in first-seen order.
    pub problems: Vec<(String, usize)>,
    /// `ratios[p][s]`; `f64::INFINITY` marks a failed run.
    pub ratios: Vec<Vec<f64>>,
    pub tau: Vec<f64>,
    /// `p_values[s][t] = P_s(tau[t])`.
    pub p_values: Vec<Vec<f64>>,
}

impl PerformanceProfile {
    /// `(τ, P_s(τ))` points for solver `s`.
    pub fn curve(&self, s: usize) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.tau.iter().copied().zip(self.p_values[s].iter().copied())
    }
}

/// 50 logarithmically spaced points from 1 to 16.
pub fn default_tau_grid() -> Vec<f64> {
    log_tau_grid(16.0, 50)
}

pub fn log_tau_grid(tau_max: f64, points: usize) -> Vec<f64> {
    debug_assert!(points >= 2 && tau_max > 1.0);
    let last = points - 1;
    (0..points)
        .map(|i| match i {
            0 => 1.0,
            i if i == last => tau_max,
            i => libm::pow(tau_max, i as f64 / last as f64),
        })
        .collect()
}

fn index_of<K: Ord + Clone>(map: &mut BTreeMap<K, usize>, order: &mut Vec<K>, key: &K) -> usize {
    if let Some(&i) = map.get(key) {
        return i;
    }
    let i = order.len();
    map.insert(key.clone(), i);
    order.push(key.clone());
    i
}

pub fn perf_profile(
    records: &[BenchRecord],
    metric: Metric,
    tau_grid: &[f64],
) -> Result<PerformanceProfile, ProfileError> {
    if records.is_empty() {
        return Err(ProfileError::Empty);
    }
    if tau_grid.first() != Some(&1.0) || tau_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(ProfileError::InvalidTauGrid);
    }

    let mut problem_idx = BTreeMap::new();
    let mut problems: Vec<(String, usize)> = Vec::new();
    let mut solver_idx = BTreeMap::new();
    let mut solvers: Vec<String> = Vec::new();
    for r in records {
        index_of(&mut problem_idx, &mut problems, &(r.problem.clone(), r.n));
        index_of(&mut solver_idx, &mut solvers, &r.rule);
    }

    // None = no record yet; Some(None) = failed; Some(Some(m)) = cost
    let mut cells: Vec<Vec<Option<Option<f64>>>> = vec![vec![None; solvers.len()]; problems.len()];
    for r in records {
        let p = problem_idx[&(r.problem.clone(), r.n)];
        let s = solver_idx[&r.rule];
        if cells[p][s].is_some() {
            return Err(ProfileError::DuplicateCell {
                problem: r.problem.clone(),
                n: r.n,
                solver: r.rule.clone(),
            });
        }
        let cost = r.metric(metric);
        cells[p][s] = Some((r.solved() && cost.is_finite()).then(|| cost.max(metric.unit())));
    }

    let mut ratios = Vec::with_capacity(problems.len());
    for (p, row) in cells.iter().enumerate() {
        let mut costs = Vec::with_capacity(solvers.len());
        for (s, cell) in row.iter().enumerate() {
            match cell {
                Some(c) => costs.push(*c),
                None => {
                    return Err(ProfileError::MissingCell {
                        problem: problems[p].0.clone(),
                        n: problems[p].1,
                        solver: solvers[s].clone(),
                    })
                }
            }
        }
        let best = costs.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        ratios.push(
            costs
                .iter()
                .map(|c| c.map_or(f64::INFINITY, |m| m / best))
                .collect::<Vec<f64>>(),
        );
    }

    let n_problems = problems.len() as f64;
    let p_values = (0..solvers.len())
        .map(|s| {
            tau_grid
                .iter()
                .map(|&tau| ratios.iter().filter(|row| row[s] <= tau).count() as f64 / n_problems)
                .collect()
        })
        .collect();

    Ok(PerformanceProfile {
        metric,
        solver_names: solvers,
        problems,
        ratios,
        tau: tau_grid.to_vec(),
        p_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn rec(problem: &str, rule: &str, iters: usize, status: Status) -> BenchRecord {
        BenchRecord {
            problem: problem.to_string(),
            n: 10,
            rule: rule.to_string(),
            status,
            iters,
            f_evals: iters + 1,
            g_evals: iters + 1,
            time_seconds: 0.0,
            f_gap: None,
        }
    }

    #[test]
    fn two_by_two_hand_example() {
        let recs = [
            rec("p1", "A", 1, Status::Converged),
            rec("p1", "B", 2, Status::Converged),
            rec("p2", "A", 2, Status::Converged),
            rec("p2", "B", 1, Status::Converged),
        ];
        let prof = perf_profile(&recs, Metric::Iters, &[1.0, 2.0]).unwrap();
        assert_eq!(prof.ratios, vec![vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert_eq!(prof.p_values, vec![vec![0.5, 1.0], vec![0.5, 1.0]]);
    }

    #[test]
    fn single_solver_is_always_best() {
        let recs = [rec("p1", "A", 7, Status::Converged), rec("p2", "A", 3, Status::Converged)];
        let prof = perf_profile(&recs, Metric::Iters, &default_tau_grid()).unwrap();
        assert!(prof.curve(0).all(|(_, p)| p == 1.0));
    }

    #[test]
    fn failing_solver_scores_zero() {
        let recs = [
            rec("p1", "A", 7, Status::MaxIters),
            rec("p1", "B", 7, Status::Converged),
            rec("p2", "A", 3, Status::LineSearchFail),
            rec("p2", "B", 9, Status::Converged),
        ];
        let prof = perf_profile(&recs, Metric::Iters, &default_tau_grid()).unwrap();
        assert!(prof.p_values[0].iter().all(|&p| p == 0.0));
        assert!(prof.ratios.iter().all(|row| row[0].is_infinite()));
    }

    #[test]
    fn unsolved_problem_stays_in_denominator() {
        let recs = [
            rec("p1", "A", 7, Status::MaxIters),
            rec("p1", "B", 7, Status::MaxIters),
            rec("p2", "A", 3, Status::Converged),
            rec("p2", "B", 6, Status::Converged),
        ];
        let prof = perf_profile(&recs, Metric::Iters, &[1.0, 2.0]).unwrap();
        assert_eq!(prof.p_values, vec![vec![0.5, 0.5], vec![0.0, 0.5]]);
    }

    #[test]
    fn zero_costs_are_clamped() {
        let recs = [rec("p1", "A", 0, Status::Converged), rec("p1", "B", 2, Status::Converged)];
        let prof = perf_profile(&recs, Metric::Iters, &[1.0]).unwrap();
        assert_eq!(prof.ratios, vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn grid_and_completeness_errors() {
        let recs = [
            rec("p1", "A", 1, Status::Converged),
            rec("p1", "B", 1, Status::Converged),
            rec("p2", "A", 1, Status::Converged),
        ];
        assert!(matches!(
            perf_profile(&recs, Metric::Iters, &[1.0]),
            Err(ProfileError::MissingCell { ref solver, .. }) if solver == "B"
        ));
        assert_eq!(
            perf_profile(&recs[..2], Metric::Iters, &[2.0, 3.0]),
            Err(ProfileError::InvalidTauGrid)
        );
        assert_eq!(
            perf_profile(&recs[..2], Metric::Iters, &[1.0, 1.0]),
            Err(ProfileError::InvalidTauGrid)
        );
        let dup = [rec("p1", "A", 1, Status::Converged), rec("p1", "A", 2, Status::Converged)];
        assert!(matches!(
            perf_profile(&dup, Metric::Iters, &[1.0]),
            Err(ProfileError::DuplicateCell { .. })
        ));
        assert_eq!(perf_profile(&[], Metric::Iters, &[1.0]), Err(ProfileError::Empty));
    }

    #[test]
    fn default_grid_shape() {
        let g = default_tau_grid();
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 1.0);
        assert_eq!(g[49], 16.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn metric_names() {
        for m in Metric::ALL {
            assert_eq!(m.as_str().parse::<Metric>(), Ok(m));
        }
        assert!("walltime".parse::<Metric>().is_err());
    }
}
