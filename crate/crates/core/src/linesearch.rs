//! Relaxed generalized Armijo backtracking.
//!
//! Trial steps `λ ∈ {1, ω, ω², …}` are tested against
//!
//! ```text
//! f(x + λd) ≤ f(x) + μ₁·λ·[gᵀd + λ·L·‖d‖² / (2ᾱ)],   0 ≤ L ≤ ᾱ(−gᵀd)/‖d‖²
//! ```
//!
//! and the first (largest) one that passes is accepted. `L = θ·ᾱ(−gᵀd)/‖d‖²`
//! with the relaxation factor `θ ∈ [0, 1]`; `θ = 0` recovers the plain
//! generalized Armijo test. Because `λL‖d‖²/(2ᾱ) ≤ −gᵀd/2`, every accepted
//! step satisfies `f(x + λd) ≤ f(x) + μ₁λgᵀd/2 < f(x)`.
//!
//! Backtracking from `λ = 1` realizes the generalized Armijo side conditions
//! with `γ₁ = 1` and `γ₂ = ω`: either `p = 0`, or the rejected trial `λ/ω`
//! violates the test with `μ₁`, hence also with `μ₂ ≥ μ₁`.

use thiserror::Error;

use crate::error::{require, ConfigError};
use crate::vecops::{dot, norm_sq, step_into};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchConfig {
    pub mu1: f64,
    pub mu2: f64,
    /// Backtracking factor `ω`.
    pub omega: f64,
    /// `θ`: fraction of the admissible upper bound used for `L`.
    pub relax_factor: f64,
    pub max_backtracks: u32,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        LineSearchConfig {
            mu1: 0.32,
            mu2: 0.32,
            omega: 0.76,
            relax_factor: 1.0,
            max_backtracks: 60,
            gamma1: 1.0,
            gamma2: 0.76,
        }
    }
}

impl LineSearchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        require(self.mu1 > 0.0 && self.mu1 < 1.0, "mu1", self.mu1, "0 < mu1 < 1")?;
        require(
            self.mu2 >= self.mu1 && self.mu2 < 1.0,
            "mu2",
            self.mu2,
            "mu1 <= mu2 < 1",
        )?;
        require(
            self.omega > 0.0 && self.omega < 1.0,
            "omega",
            self.omega,
            "0 < omega < 1",
        )?;
        require(
            (0.0..=1.0).contains(&self.relax_factor),
            "relax_factor",
            self.relax_factor,
            "0 <= relax_factor <= 1",
        )?;
        require(
            self.max_backtracks > 0,
            "max_backtracks",
            self.max_backtracks as f64,
            "max_backtracks >= 1",
        )?;
        require(self.gamma1 > 0.0, "gamma1", self.gamma1, "gamma1 > 0")?;
        require(self.gamma2 > 0.0, "gamma2", self.gamma2, "gamma2 > 0")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchOutcome {
    /// Accepted step `λ = ω^p`.
    pub lambda: f64,
    /// Backtrack count `p`.
    pub p: u32,
    pub f_new: f64,
    /// Objective evaluations consumed, always `p + 1`.
    pub n_evals: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LineSearchError {
    #[error("not a descent direction: g'd = {0}")]
    NotDescent(f64),
    #[error("no acceptable step after {n_evals} trials (last lambda = {last_lambda}, f = {last_f})")]
    Exhausted {
        last_lambda: f64,
        last_f: f64,
        n_evals: u32,
    },
}

/// `L = θ · ᾱ · (−gᵀd) / ‖d‖²`.
pub fn relax_bound(alpha_bar: f64, g: &[f64], d: &[f64], theta: f64) -> Result<f64, LineSearchError> {
    let gd = dot(g, d);
    if !(gd < 0.0) {
        return Err(LineSearchError::NotDescent(gd));
    }
    Ok(theta * alpha_bar * (-gd) / norm_sq(d))
}

/// Precomputed right-hand side of the acceptance test for one search.
#[derive(Debug, Clone, Copy)]
pub struct AcceptanceTest {
    f_x: f64,
    mu1: f64,
    gd: f64,
    /// `L‖d‖² / (2ᾱ)`
    relax: f64,
}

impl AcceptanceTest {
    pub fn new(
        f_x: f64,
        g: &[f64],
        d: &[f64],
        alpha_bar: f64,
        cfg: &LineSearchConfig,
    ) -> Result<Self, LineSearchError> {
        let l = relax_bound(alpha_bar, g, d, cfg.relax_factor)?;
        Ok(AcceptanceTest {
            f_x,
            mu1: cfg.mu1,
            gd: dot(g, d),
            relax: l * norm_sq(d) / (2.0 * alpha_bar),
        })
    }

    pub fn rhs(&self, lambda: f64) -> f64 {
        self.f_x + self.mu1 * lambda * (self.gd + lambda * self.relax)
    }

    /// Non-finite trial values never pass.
    pub fn accepts(&self, lambda: f64, f_trial: f64) -> bool {
        f_trial.is_finite() && f_trial <= self.rhs(lambda)
    }
}

/// Backtracks from `λ = 1` along `d` until the acceptance test holds.
///
/// `f_x` must equal `f(x)`; `scratch` receives the last trial point.
#[allow(clippy::too_many_arguments)]
pub fn search<F>(
    mut f_eval: F,
    x: &[f64],
    f_x: f64,
    g: &[f64],
    d: &[f64],
    alpha_bar: f64,
    cfg: &LineSearchConfig,
    scratch: &mut [f64],
) -> Result<LineSearchOutcome, LineSearchError>
where
    F: FnMut(&[f64]) -> f64,
{
    let test = AcceptanceTest::new(f_x, g, d, alpha_bar, cfg)?;
    let mut lambda = 1.0;
    let mut last_f = f64::NAN;
    for p in 0..=cfg.max_backtracks {
        step_into(x, lambda, d, scratch);
        let f_trial = f_eval(scratch);
        if test.accepts(lambda, f_trial) {
            return Ok(LineSearchOutcome {
                lambda,
                p,
                f_new: f_trial,
                n_evals: p + 1,
            });
        }
        last_f = f_trial;
        if p < cfg.max_backtracks {
            lambda *= cfg.omega;
        }
    }
    Err(LineSearchError::Exhausted {
        last_lambda: lambda,
        last_f,
        n_evals: cfg.max_backtracks + 1,
    })
}
