use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tbb_core::problems::gradient_error;
use tbb_core::{Problem, ProblemError};

/// Pass threshold on [`GradCheck::max_rel_err`].
pub const GRAD_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheck {
    /// Relative error at `x_0`, then at each random point.
    pub errors: Vec<f64>,
    pub max_rel_err: f64,
}

impl GradCheck {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= GRAD_TOL
    }
}

/// Compares the analytic gradient with central differences at `x_0` and at
/// `points` uniform draws from `[−2, 2]ⁿ`.
pub fn check_gradient(problem: &Problem, points: usize, seed: u64) -> Result<GradCheck, ProblemError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = problem.start_point();
    let mut errors = vec![gradient_error(problem, x0)?];
    for _ in 0..points {
        let x: Vec<f64> = (0..x0.len()).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        errors.push(gradient_error(problem, &x)?);
    }
    let max_rel_err = errors.iter().copied().fold(0.0, f64::max);
    Ok(GradCheck { errors, max_rel_err })
}
