//! Post-hoc convergence-rate diagnostics for a solver run with a known
//! minimizer `x*`.
//!
//! * the empirical root rate `(e_K / e_0)^{1/K}` with `e_k = ‖x_k − x*‖`
//!   (below one for R-linear convergence),
//! * the successive ratios `e_{k+1} / e_k` (tending to zero for superlinear
//!   convergence),
//! * the secant residual `‖(1/(λ_k ᾱ_k)) s_k − G(x*) s_k‖ / ‖s_k‖` with
//!   `s_k = x_{k+1} − x_k`, which tends to zero exactly when convergence is
//!   superlinear. `G(x*) s` comes from central differences of the gradient.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::problems::Problem;
use crate::solver::{IterationRecord, SolverConfig, SolverResult};
use crate::vecops::{all_finite, norm, norm_inf, sub_into};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DiagnosticsError {
    #[error("non-finite gradient at Hessian probe x {0} h*v")]
    NonFiniteGradient(char),
    #[error("probe direction has zero length")]
    ZeroDirection,
    #[error("run did not keep its iterates")]
    MissingIterates,
    #[error("problem has no known minimizer")]
    MissingOptimum,
    #[error("{iterates} iterates do not match {steps} trace records")]
    TraceMismatch { iterates: usize, steps: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// `None` when every error beyond the first is at rounding level.
    pub root_rate: Option<f64>,
    pub superlinear_ratios: Vec<f64>,
    /// One entry per step, `None` where the step had zero length.
    pub secant_residuals: Option<Vec<Option<f64>>>,
    pub monotone: bool,
}

/// `(e_K / e_0)^{1/K}` for the last `K ≥ 1` with `e_K > 10·ε·e_0`.
pub fn root_rate(errors: &[f64]) -> Option<f64> {
    let e0 = *errors.first()?;
    if !(e0 > 0.0) {
        return None;
    }
    let floor = 10.0 * f64::EPSILON * e0;
    let k = (1..errors.len()).rev().find(|&k| errors[k] > floor)?;
    Some(libm::pow(errors[k] / e0, 1.0 / k as f64))
}

/// `e_{k+1} / e_k` for consecutive entries.
pub fn superlinear_ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[1] / w[0]).collect()
}

pub fn monotone_descent(f_values: &[f64]) -> bool {
    f_values.windows(2).all(|w| w[1] <= w[0])
}

/// Largest power of two not above `ε^{1/3} · (1 + ‖x‖_∞)`; a power-of-two
/// step keeps `h·v` exact.
pub fn hessian_fd_step(x: &[f64]) -> f64 {
    let h = libm::cbrt(f64::EPSILON) * (1.0 + norm_inf(x));
    libm::exp2(libm::floor(libm::log2(h)))
}

/// `(∇f(x + h v) − ∇f(x − h v)) / (2h) ≈ G(x) v`.
pub fn fd_hessian_vec(
    problem: &Problem,
    x: &[f64],
    v: &[f64],
    h: f64,
) -> Result<Vec<f64>, DiagnosticsError> {
    if norm(v) == 0.0 {
        return Err(DiagnosticsError::ZeroDirection);
    }
    let shifted = |t: f64| -> Vec<f64> { x.iter().zip(v).map(|(a, b)| a + t * b).collect() };
    let gp = problem.gradient_at(&shifted(h));
    if !all_finite(&gp) {
        return Err(DiagnosticsError::NonFiniteGradient('+'));
    }
    let gm = problem.gradient_at(&shifted(-h));
    if !all_finite(&gm) {
        return Err(DiagnosticsError::NonFiniteGradient('-'));
    }
    Ok(gp.iter().zip(&gm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
}

/// Secant residuals along a run, one per step `x_k → x_{k+1}`.
///
/// `steps[k]` is `(λ_k, ᾱ_k)`; `iterates` has one more entry than `steps`.
pub fn secant_residual(
    iterates: &[Vec<f64>],
    steps: &[(f64, f64)],
    x_star: &[f64],
    problem: &Problem,
) -> Result<Vec<Option<f64>>, DiagnosticsError> {
    if iterates.len() != steps.len() + 1 {
        return Err(DiagnosticsError::TraceMismatch {
            iterates: iterates.len(),
            steps: steps.len(),
        });
    }
    let h = hessian_fd_step(x_star);
    let mut s = vec![0.0; x_star.len()];
    let mut out = Vec::with_capacity(steps.len());
    for (w, &(lambda, alpha_bar)) in iterates.windows(2).zip(steps) {
        sub_into(&w[1], &w[0], &mut s);
        let len = norm(&s);
        if len == 0.0 {
            out.push(None);
            continue;
        }
        let u: Vec<f64> = s.iter().map(|v| v / len).collect();
        let gu = fd_hessian_vec(problem, x_star, &u, h)?;
        let inv = 1.0 / (lambda * alpha_bar);
        let r: f64 = u
            .iter()
            .zip(&gu)
            .map(|(ui, gi)| {
                let t = inv * ui - gi;
                t * t
            })
            .sum();
        out.push(Some(libm::sqrt(r)));
    }
    Ok(out)
}

/// `‖x_k − x*‖` along the run, cut at the first exact hit of `x*`.
pub fn error_sequence(iterates: &[Vec<f64>], x_star: &[f64]) -> Vec<f64> {
    let mut diff = vec![0.0; x_star.len()];
    let mut out = Vec::with_capacity(iterates.len());
    for x in iterates {
        sub_into(x, x_star, &mut diff);
        let e = norm(&diff);
        if e == 0.0 {
            break;
        }
        out.push(e);
    }
    out
}

/// An accepted iteration that breaks the descent or step-bound guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum StepViolation {
    #[error("iteration {k}: f rose from {f_before} to {f_after}")]
    Ascent { k: usize, f_before: f64, f_after: f64 },
    #[error("iteration {k}: decrease short of mu1*lambda*g'd/2")]
    InsufficientDecrease { k: usize },
    #[error("iteration {k}: alpha_bar = {alpha_bar} outside [alpha_min, alpha_max]")]
    StepOutOfBounds { k: usize, alpha_bar: f64 },
    #[error("iteration {k}: direction not gradient-related")]
    NotGradientRelated { k: usize },
}

/// Re-checks every accepted iteration of a run:
///
/// * `f_{k+1} ≤ f_k` and `f_{k+1} ≤ f_k + ½μ₁λ_k g_kᵀd_k`,
/// * `α_min ≤ ᾱ_k ≤ α_max`,
/// * `‖d_k‖ ≤ α_max‖g_k‖` and `g_kᵀd_k ≤ −α_min‖g_k‖²`.
///
/// Bounds are compared with a relative slack of `1e-12`.
pub fn check_accepted_steps(result: &SolverResult, cfg: &SolverConfig) -> Result<(), StepViolation> {
    const SLACK: f64 = 1e-12;
    let sg = &cfg.safeguard;
    let mu1 = cfg.linesearch.mu1;
    for (i, r) in result.trace.iter().enumerate() {
        let k = r.k;
        // the last recorded step of a non-finite run has no trustworthy f
        let f_after = match result.trace.get(i + 1) {
            Some(next) => next.f,
            None if result.f_final.is_finite() => result.f_final,
            None => continue,
        };
        if !(f_after <= r.f) {
            return Err(StepViolation::Ascent { k, f_before: r.f, f_after });
        }
        let bound = r.f + 0.5 * mu1 * r.lambda * r.gtd;
        if f_after > bound + SLACK * r.f.abs() {
            return Err(StepViolation::InsufficientDecrease { k });
        }
        if !(r.alpha_bar >= sg.alpha_min && r.alpha_bar <= sg.alpha_max) {
            return Err(StepViolation::StepOutOfBounds { k, alpha_bar: r.alpha_bar });
        }
        let g2 = r.gnorm * r.gnorm;
        if r.dnorm > sg.alpha_max * r.gnorm * (1.0 + SLACK) || r.gtd > -sg.alpha_min * g2 * (1.0 - SLACK) {
            return Err(StepViolation::NotGradientRelated { k });
        }
    }
    Ok(())
}

impl RateReport {
    /// Full report for a run made with `keep_iterates` on a problem with a
    /// known minimizer.
    pub fn from_run(problem: &Problem, result: &SolverResult) -> Result<Self, DiagnosticsError> {
        let iterates = result.iterates.as_ref().ok_or(DiagnosticsError::MissingIterates)?;
        let x_star = problem.known_opt_point().ok_or(DiagnosticsError::MissingOptimum)?;
        let errors = error_sequence(iterates, x_star);
        let steps: Vec<(f64, f64)> = result
            .trace
            .iter()
            .map(|r: &IterationRecord| (r.lambda, r.alpha_bar))
            .collect();
        let mut f_values: Vec<f64> = result.trace.iter().map(|r| r.f).collect();
        f_values.push(result.f_final);
        Ok(RateReport {
            root_rate: root_rate(&errors),
            superlinear_ratios: superlinear_ratios(&errors),
            secant_residuals: Some(secant_residual(iterates, &steps, x_star, problem)?),
            monotone: monotone_descent(&f_values),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    fn diag_quadratic(d: Vec<f64>) -> Problem {
        let n = d.len();
        let d2 = d.clone();
        Problem::from_fns(
            "diag",
            vec![1.0; n],
            move |x| 0.5 * x.iter().zip(&d).map(|(a, b)| b * a * a).sum::<f64>(),
            move |x, g| {
                for ((gi, xi), di) in g.iter_mut().zip(x).zip(&d2) {
                    *gi = di * xi;
                }
            },
        )
        .unwrap()
        .with_known_optimum(0.0, Some(vec![0.0; n]))
        .unwrap()
    }

    #[test]
    fn root_rate_of_geometric_sequences() {
        assert!((root_rate(&[1.0, 0.5, 0.25, 0.125]).unwrap() - 0.5).abs() < 1e-15);
        assert!((root_rate(&[1.0, 0.1, 0.01]).unwrap() - 0.1).abs() < 1e-15);
        assert!((root_rate(&[4.0, 2.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn root_rate_needs_signal_above_rounding() {
        assert_eq!(root_rate(&[7.0, 0.0]), None);
        assert_eq!(root_rate(&[1.0, 1e-17, 1e-18]), None);
        assert_eq!(root_rate(&[]), None);
    }

    #[test]
    fn ratio_examples() {
        let r = superlinear_ratios(&[1.0, 0.1, 0.001]);
        assert!((r[0] - 0.1).abs() < 1e-15 && (r[1] - 0.01).abs() < 1e-15);
        assert_eq!(superlinear_ratios(&[3.0, 3.0, 3.0]), vec![1.0, 1.0]);
        assert_eq!(superlinear_ratios(&[1.0, 0.5, 0.25]), vec![0.5, 0.5]);
    }

    #[test]
    fn monotone_examples() {
        assert!(monotone_descent(&[3.0, 2.0, 2.0, 1.0]));
        assert!(!monotone_descent(&[1.0, 2.0]));
        assert!(monotone_descent(&[5.0]));
    }

    #[test]
    fn hessian_vec_on_quadratics() {
        let id = diag_quadratic(vec![1.0, 1.0]);
        let x = [0.3, -0.7];
        let h = hessian_fd_step(&x);
        let gv = fd_hessian_vec(&id, &x, &[1.0, 0.0], h).unwrap();
        assert!((gv[0] - 1.0).abs() < 1e-10 && gv[1].abs() < 1e-10);
        let d = diag_quadratic(vec![1.0, 4.0]);
        let gv = fd_hessian_vec(&d, &x, &[0.0, 1.0], h).unwrap();
        assert!(gv[0].abs() < 1e-10 && (gv[1] - 4.0).abs() < 1e-9);
        assert_eq!(
            fd_hessian_vec(&d, &x, &[0.0, 0.0], h),
            Err(DiagnosticsError::ZeroDirection)
        );
    }

    #[test]
    fn hessian_vec_on_example_81_at_minimizer() {
        // f = (b − a²)² + (1 − a)²: f_aa = 12a² − 4b + 2, f_ab = −4a, so the
        // first Hessian column at (1, 1) is (10, −4).
        let p = problems::make_example_81(2).unwrap();
        let x = [1.0, 1.0];
        let gv = fd_hessian_vec(&p, &x, &[1.0, 0.0], hessian_fd_step(&x)).unwrap();
        assert!((gv[0] - 10.0).abs() < 1e-4, "{gv:?}");
        assert!((gv[1] + 4.0).abs() < 1e-4, "{gv:?}");
    }

    #[test]
    fn step_size_is_power_of_two() {
        let h = hessian_fd_step(&[0.0]);
        assert_eq!(libm::exp2(libm::log2(h)), h);
        assert!(h <= libm::cbrt(f64::EPSILON));
        assert!(2.0 * h > libm::cbrt(f64::EPSILON));
    }

    #[test]
    fn residual_on_identity_hessian() {
        let p = diag_quadratic(vec![1.0; 3]);
        let pts = vec![vec![1.0, 2.0, 3.0], vec![0.5, 1.0, -1.0], vec![0.1, 0.0, 0.2]];
        let unit = secant_residual(&pts, &[(1.0, 1.0), (0.5, 2.0)], &[0.0; 3], &p).unwrap();
        assert_eq!(unit, vec![Some(0.0), Some(0.0)]);
        let half = secant_residual(&pts, &[(0.5, 1.0), (1.0, 0.5)], &[0.0; 3], &p).unwrap();
        for r in half {
            assert!((r.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_skips_zero_steps() {
        let p = diag_quadratic(vec![1.0; 2]);
        let pts = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(secant_residual(&pts, &[(1.0, 1.0)], &[0.0; 2], &p).unwrap(), vec![None]);
        assert!(matches!(
            secant_residual(&pts, &[], &[0.0; 2], &p),
            Err(DiagnosticsError::TraceMismatch { .. })
        ));
    }
}
