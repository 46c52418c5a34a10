//! The spectral gradient loop.
//!
//! Each iteration takes `d_k = −ᾱ_k g_k`, backtracks along it with the
//! relaxed generalized Armijo test, shifts the three-point history, and
//! computes the next safeguarded step `ᾱ_{k+1}` from the selected rule.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{require, ConfigError};
use crate::linesearch::{self, LineSearchConfig, LineSearchError};
use crate::problems::Problem;
use crate::stepsize::{self, IterateHistory, SafeguardConfig, StepSizeRule};
use crate::vecops::{all_finite, dot, norm};

/// Source of elapsed wall-clock time for the time budget.
pub trait Clock {
    fn elapsed_seconds(&self) -> f64;
}

/// A clock that never advances; the time budget is then never hit.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_seconds(&self) -> f64 {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolMode {
    /// Stop when `‖g_k‖ < tol · ‖g_0‖`.
    Relative,
    /// Stop when `‖g_k‖ ≤ tol`.
    Absolute,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub rule: StepSizeRule,
    pub safeguard: SafeguardConfig,
    pub linesearch: LineSearchConfig,
    pub tol: f64,
    pub tol_mode: TolMode,
    pub max_iters: usize,
    pub max_time_seconds: f64,
    /// Step used at iteration 0.
    pub alpha0: f64,
    /// Keep every iterate `x_0, x_1, …` in the result (for diagnostics).
    pub keep_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rule: StepSizeRule::Tbb1Prime,
            safeguard: SafeguardConfig::default(),
            linesearch: LineSearchConfig::default(),
            tol: 1e-6,
            tol_mode: TolMode::Relative,
            max_iters: 10_000,
            max_time_seconds: 600.0,
            alpha0: 1.0,
            keep_iterates: false,
        }
    }
}

impl SolverConfig {
    pub fn with_rule(mut self, rule: StepSizeRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.safeguard.validate()?;
        self.linesearch.validate()?;
        require(self.tol > 0.0, "tol", self.tol, "tol > 0")?;
        require(
            self.max_iters > 0,
            "max_iters",
            self.max_iters as f64,
            "max_iters >= 1",
        )?;
        require(
            self.max_time_seconds > 0.0,
            "max_time_seconds",
            self.max_time_seconds,
            "max_time_seconds > 0",
        )?;
        require(
            self.alpha0 >= self.safeguard.alpha_min && self.alpha0 <= self.safeguard.alpha_max,
            "alpha0",
            self.alpha0,
            "alpha_min <= alpha0 <= alpha_max",
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIters,
    Timeout,
    LineSearchFail,
    NonFiniteValue,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIters => "MaxIters",
            Status::Timeout => "Timeout",
            Status::LineSearchFail => "LineSearchFail",
            Status::NonFiniteValue => "NonFiniteValue",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        [
            Status::Converged,
            Status::MaxIters,
            Status::Timeout,
            Status::LineSearchFail,
            Status::NonFiniteValue,
        ]
        .into_iter()
        .find(|st| st.as_str() == s)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One accepted iteration. `f`, `gnorm` are taken at `x_k`, before the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    pub f: f64,
    pub gnorm: f64,
    pub alpha_bar: f64,
    pub lambda: f64,
    pub p: u32,
    /// `‖d_k‖`
    pub dnorm: f64,
    /// `g_kᵀd_k`
    pub gtd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub status: Status,
    pub x_final: Vec<f64>,
    pub f_final: f64,
    pub gnorm_final: f64,
    pub trace: Vec<IterationRecord>,
    pub n_f_evals: usize,
    pub n_g_evals: usize,
    pub wall_time_seconds: f64,
    /// `x_0, …, x_final` when [`SolverConfig::keep_iterates`] is set.
    pub iterates: Option<Vec<Vec<f64>>>,
}

impl SolverResult {
    pub fn iters(&self) -> usize {
        self.trace.len()
    }

    /// `|f_final − f*|` when the optimum value is known.
    pub fn f_gap(&self, problem: &Problem) -> Option<f64> {
        problem.known_opt_value().map(|fs| (self.f_final - fs).abs())
    }
}

/// `d = −ᾱ g`.
pub fn direction(alpha_bar: f64, g: &[f64]) -> Vec<f64> {
    g.iter().map(|gi| -alpha_bar * gi).collect()
}

pub fn check_stop(gnorm_k: f64, gnorm_0: f64, cfg: &SolverConfig) -> bool {
    match cfg.tol_mode {
        TolMode::Relative => gnorm_0 == 0.0 || gnorm_k < cfg.tol * gnorm_0,
        TolMode::Absolute => gnorm_k <= cfg.tol,
    }
}

/// Runs the solver without a wall-clock budget.
pub fn minimize(problem: &Problem, cfg: &SolverConfig) -> Result<SolverResult, ConfigError> {
    minimize_with_clock(problem, cfg, &NoClock)
}

pub fn minimize_with_clock<C: Clock + ?Sized>(
    problem: &Problem,
    cfg: &SolverConfig,
    clock: &C,
) -> Result<SolverResult, ConfigError> {
    cfg.validate()?;
    let n = problem.dim();
    let x0 = problem.start_point();

    let mut n_f = 1usize;
    let mut n_g = 1usize;
    let mut f = problem.value_at(x0);
    let g0 = problem.gradient_at(x0);
    let mut iterates = cfg.keep_iterates.then(|| vec![x0.to_vec()]);

    let finish = |status: Status,
                  x: &[f64],
                  f: f64,
                  gnorm: f64,
                  trace: Vec<IterationRecord>,
                  n_f: usize,
                  n_g: usize,
                  iterates: Option<Vec<Vec<f64>>>| SolverResult {
        status,
        x_final: x.to_vec(),
        f_final: f,
        gnorm_final: gnorm,
        trace,
        n_f_evals: n_f,
        n_g_evals: n_g,
        wall_time_seconds: clock.elapsed_seconds(),
        iterates,
    };

    if !f.is_finite() || !all_finite(&g0) {
        return Ok(finish(Status::NonFiniteValue, x0, f, norm(&g0), Vec::new(), n_f, n_g, iterates));
    }
    let mut gnorm = norm(&g0);
    let gnorm0 = gnorm;
    let mut hist = IterateHistory::seed(x0, &g0).expect("start point and gradient are finite");

    let mut trace = Vec::new();
    let mut d = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut g_new = vec![0.0; n];
    let mut alpha_bar = cfg.alpha0;

    let status = loop {
        if check_stop(gnorm, gnorm0, cfg) {
            break Status::Converged;
        }
        if trace.len() >= cfg.max_iters {
            break Status::MaxIters;
        }
        if clock.elapsed_seconds() > cfg.max_time_seconds {
            break Status::Timeout;
        }

        for (di, gi) in d.iter_mut().zip(hist.g_curr()) {
            *di = -alpha_bar * gi;
        }
        let gtd = dot(hist.g_curr(), &d);
        let dnorm = norm(&d);

        let searched = linesearch::search(
            |z| {
                n_f += 1;
                problem.value_at(z)
            },
            hist.x_curr(),
            f,
            hist.g_curr(),
            &d,
            alpha_bar,
            &cfg.linesearch,
            &mut trial,
        );
        let ls = match searched {
            Ok(ls) => ls,
            Err(LineSearchError::Exhausted { .. }) | Err(LineSearchError::NotDescent(_)) => {
                break Status::LineSearchFail;
            }
        };

        // `trial` holds the accepted point.
        problem.gradient_into(&trial, &mut g_new);
        n_g += 1;
        trace.push(IterationRecord {
            k: trace.len(),
            f,
            gnorm,
            alpha_bar,
            lambda: ls.lambda,
            p: ls.p,
            dnorm,
            gtd,
        });
        if let Some(it) = iterates.as_mut() {
            it.push(trial.clone());
        }
        if !all_finite(&g_new) {
            let result = finish(Status::NonFiniteValue, &trial, ls.f_new, f64::NAN, trace, n_f, n_g, iterates);
            return Ok(result);
        }

        hist.push(&trial, &g_new);
        f = ls.f_new;
        gnorm = norm(hist.g_curr());

        let pairs = hist.pairs();
        let raw = stepsize::raw_step_from(cfg.rule, &pairs);
        let beta = stepsize::beta_from(&pairs);
        alpha_bar = stepsize::safeguard(raw, beta, &cfg.safeguard);
    };

    Ok(finish(status, hist.x_curr(), f, gnorm, trace, n_f, n_g, iterates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    fn half_norm_sq(x0: Vec<f64>) -> Problem {
        Problem::from_fns(
            "half_norm_sq",
            x0,
            |x| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
            |x, g| g.copy_from_slice(x),
        )
        .unwrap()
    }

    #[test]
    fn direction_examples() {
        assert_eq!(direction(2.0, &[1.0, -1.0]), vec![-2.0, 2.0]);
        assert_eq!(direction(2.0, &[0.0, 0.0]), vec![0.0, 0.0]);
        let d = direction(0.5, &[4.0, 0.0]);
        assert_eq!(norm(&d), 2.0);
        assert_eq!(dot(&[4.0, 0.0], &d), -8.0);
    }

    #[test]
    fn stop_test() {
        let rel = SolverConfig::default();
        assert!(check_stop(1e-7, 1.0, &rel));
        assert!(!check_stop(1e-6, 1.0, &rel));
        assert!(check_stop(0.0, 0.0, &rel));
        let abs = SolverConfig {
            tol: 1e-4,
            tol_mode: TolMode::Absolute,
            ..Default::default()
        };
        assert!(check_stop(5e-5, 123.0, &abs));
        assert!(check_stop(1e-4, 123.0, &abs));
        assert!(!check_stop(2e-4, 123.0, &abs));
    }

    #[test]
    fn one_exact_step_on_isotropic_quadratic() {
        for rule in StepSizeRule::ALL {
            let p = half_norm_sq(vec![5.0, 5.0]);
            let r = minimize(&p, &SolverConfig::default().with_rule(rule)).unwrap();
            assert_eq!(r.status, Status::Converged);
            assert_eq!(r.iters(), 1);
            assert_eq!(r.x_final, vec![0.0, 0.0]);
            assert_eq!(r.gnorm_final, 0.0);
            assert_eq!(r.trace[0].alpha_bar, 1.0);
            assert_eq!(r.trace[0].lambda, 1.0);
            assert_eq!(r.n_f_evals, 2);
            assert_eq!(r.n_g_evals, 2);
        }
    }

    #[test]
    fn stationary_start_returns_empty_trace() {
        let p = half_norm_sq(vec![0.0, 0.0]);
        let r = minimize(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::Converged);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn iteration_budget() {
        let p = problems::make_example_81(10).unwrap();
        let cfg = SolverConfig {
            max_iters: 1,
            ..Default::default()
        };
        let r = minimize(&p, &cfg).unwrap();
        assert_eq!(r.status, Status::MaxIters);
        assert_eq!(r.iters(), 1);
    }

    struct Frozen(f64);

    impl Clock for Frozen {
        fn elapsed_seconds(&self) -> f64 {
            self.0
        }
    }

    #[test]
    fn time_budget() {
        let p = problems::make_example_81(10).unwrap();
        let cfg = SolverConfig {
            max_time_seconds: 1.0,
            ..Default::default()
        };
        let r = minimize_with_clock(&p, &cfg, &Frozen(2.0)).unwrap();
        assert_eq!(r.status, Status::Timeout);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn line_search_failure_keeps_partial_trace() {
        // the objective turns NaN everywhere except the start point
        let p = Problem::from_fns(
            "spike",
            vec![1.0],
            |x| if x[0] == 1.0 { 1.0 } else { f64::NAN },
            |_, g| g[0] = 1.0,
        )
        .unwrap();
        let r = minimize(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::LineSearchFail);
        assert!(r.trace.is_empty());
        assert_eq!(r.n_f_evals, 1 + 61);
    }

    #[test]
    fn non_finite_gradient_is_reported() {
        let p = Problem::from_fns(
            "cliff",
            vec![1.0],
            |x| 0.5 * x[0] * x[0],
            |x, g| g[0] = if x[0] == 1.0 { 1.0 } else { f64::INFINITY },
        )
        .unwrap();
        let r = minimize(&p, &SolverConfig::default()).unwrap();
        assert_eq!(r.status, Status::NonFiniteValue);
        assert_eq!(r.iters(), 1);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let p = half_norm_sq(vec![1.0]);
        let cfg = SolverConfig {
            alpha0: 1000.0,
            ..Default::default()
        };
        assert_eq!(minimize(&p, &cfg).unwrap_err().field, "alpha0");
    }

    #[test]
    fn iterates_are_kept_on_request() {
        let p = half_norm_sq(vec![5.0, 5.0]);
        let cfg = SolverConfig {
            keep_iterates: true,
            ..Default::default()
        };
        let r = minimize(&p, &cfg).unwrap();
        assert_eq!(r.iterates, Some(vec![vec![5.0, 5.0], vec![0.0, 0.0]]));
    }
}
