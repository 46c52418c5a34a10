//! Spectral step sizes built from the last two secant pairs, and the
//! safeguard that projects a raw step into a curvature-dependent interval.
//!
//! With `s1 = x_k − x_{k−1}`, `s2 = x_k − x_{k−2}`, `y1 = g_k − g_{k−1}` and
//! `y2 = g_k − g_{k−2}`:
//!
//! * `BB1 = ‖s1‖² / s1ᵀy1`, `BB2 = s1ᵀy1 / ‖y1‖²`
//! * `TBB1 = (‖s1‖² + ‖s2‖²) / (s1ᵀy1 + s2ᵀy2)`
//! * `TBB2 = (s1ᵀy1 + s2ᵀy2) / (‖y1‖² + ‖y2‖²)`
//! * `TBB1' = λ·BB1 + (1 − λ)·BB2` with `λ` fitted to the second pair, and
//!   likewise `TBB2'`.
//!
//! A raw step of `None` marks a degenerate denominator.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{require, ConfigError};
use crate::vecops::{all_finite, dot};

/// Relative threshold below which a curvature denominator counts as zero.
pub const DEN_REL_TOL: f64 = 1e-12;
/// Relative gap below which `BB1` and `BB2` are treated as coincident.
pub const LAMBDA_REL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepSizeRule {
    Bb1,
    Bb2,
    Tbb1,
    Tbb2,
    Tbb1Prime,
    Tbb2Prime,
}

impl StepSizeRule {
    pub const ALL: [StepSizeRule; 6] = [
        StepSizeRule::Bb1,
        StepSizeRule::Bb2,
        StepSizeRule::Tbb1,
        StepSizeRule::Tbb2,
        StepSizeRule::Tbb1Prime,
        StepSizeRule::Tbb2Prime,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StepSizeRule::Bb1 => "bb1",
            StepSizeRule::Bb2 => "bb2",
            StepSizeRule::Tbb1 => "tbb1",
            StepSizeRule::Tbb2 => "tbb2",
            StepSizeRule::Tbb1Prime => "tbb1p",
            StepSizeRule::Tbb2Prime => "tbb2p",
        }
    }
}

impl fmt::Display for StepSizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown step-size rule (expected one of bb1, bb2, tbb1, tbb2, tbb1p, tbb2p)")]
pub struct UnknownRule;

impl FromStr for StepSizeRule {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StepSizeRule::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or(UnknownRule)
    }
}

/// Which secant equation pins the mixing weight of the primed rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixVariant {
    /// Fit `(1/α) s2 ≈ y2`.
    One,
    /// Fit `α y2 ≈ s2`.
    Two,
}

/// The three most recent iterates and gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateHistory {
    // index 0 = current, 1 = previous, 2 = the one before
    x: [Vec<f64>; 3],
    g: [Vec<f64>; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum HistoryError {
    #[error("history vectors must share one non-zero length")]
    Shape,
    #[error("history vectors must be finite")]
    NonFinite,
}

impl IterateHistory {
    /// Starts a history at `x_0` with `x_{−1} = x_0` (and likewise for the
    /// gradient), so the first update yields `s2 = s1` and `y2 = y1`.
    pub fn seed(x0: &[f64], g0: &[f64]) -> Result<Self, HistoryError> {
        Self::from_parts(
            [x0.into(), x0.into(), x0.into()],
            [g0.into(), g0.into(), g0.into()],
        )
    }

    /// `x = [x_k, x_{k−1}, x_{k−2}]`, `g = [g_k, g_{k−1}, g_{k−2}]`.
    pub fn from_parts(x: [Vec<f64>; 3], g: [Vec<f64>; 3]) -> Result<Self, HistoryError> {
        let n = x[0].len();
        if n == 0 || x.iter().chain(g.iter()).any(|v| v.len() != n) {
            return Err(HistoryError::Shape);
        }
        if !x.iter().chain(g.iter()).all(|v| all_finite(v)) {
            return Err(HistoryError::NonFinite);
        }
        Ok(IterateHistory { x, g })
    }

    /// Builds a history whose differences are exactly `s1, s2, y1, y2`, with
    /// the current point and gradient at the origin.
    pub fn from_differences(
        s1: &[f64],
        s2: &[f64],
        y1: &[f64],
        y2: &[f64],
    ) -> Result<Self, HistoryError> {
        let n = s1.len();
        let neg = |v: &[f64]| v.iter().map(|a| -a).collect::<Vec<f64>>();
        let zero = alloc::vec![0.0; n];
        Self::from_parts([zero.clone(), neg(s1), neg(s2)], [zero, neg(y1), neg(y2)])
    }

    /// Shifts `(x_{k−2}, x_{k−1}, x_k) ← (x_{k−1}, x_k, x_new)`; same for the
    /// gradients. Reuses the oldest buffers.
    pub fn push(&mut self, x_new: &[f64], g_new: &[f64]) {
        debug_assert_eq!(x_new.len(), self.dim());
        debug_assert_eq!(g_new.len(), self.dim());
        self.x.rotate_right(1);
        self.g.rotate_right(1);
        self.x[0].copy_from_slice(x_new);
        self.g[0].copy_from_slice(g_new);
    }

    pub fn dim(&self) -> usize {
        self.x[0].len()
    }

    pub fn x_curr(&self) -> &[f64] {
        &self.x[0]
    }

    pub fn x_prev(&self) -> &[f64] {
        &self.x[1]
    }

    pub fn x_prev2(&self) -> &[f64] {
        &self.x[2]
    }

    pub fn g_curr(&self) -> &[f64] {
        &self.g[0]
    }

    pub fn g_prev(&self) -> &[f64] {
        &self.g[1]
    }

    pub fn g_prev2(&self) -> &[f64] {
        &self.g[2]
    }

    fn diff(&self, v: &[Vec<f64>; 3], back: usize) -> Vec<f64> {
        v[0].iter().zip(&v[back]).map(|(a, b)| a - b).collect()
    }

    /// `s_{k−1} = x_k − x_{k−1}`
    pub fn s1(&self) -> Vec<f64> {
        self.diff(&self.x, 1)
    }

    /// `s_{k−2} = x_k − x_{k−2}`
    pub fn s2(&self) -> Vec<f64> {
        self.diff(&self.x, 2)
    }

    /// `y_{k−1} = g_k − g_{k−1}`
    pub fn y1(&self) -> Vec<f64> {
        self.diff(&self.g, 1)
    }

    /// `y_{k−2} = g_k − g_{k−2}`
    pub fn y2(&self) -> Vec<f64> {
        self.diff(&self.g, 2)
    }

    /// The six inner products every rule is built from, in one pass.
    pub fn pairs(&self) -> SecantPairs {
        let mut p = SecantPairs::default();
        let (x0, x1, x2) = (&self.x[0], &self.x[1], &self.x[2]);
        let (g0, g1, g2) = (&self.g[0], &self.g[1], &self.g[2]);
        for i in 0..x0.len() {
            let s1 = x0[i] - x1[i];
            let s2 = x0[i] - x2[i];
            let y1 = g0[i] - g1[i];
            let y2 = g0[i] - g2[i];
            p.ss1 += s1 * s1;
            p.sy1 += s1 * y1;
            p.yy1 += y1 * y1;
            p.ss2 += s2 * s2;
            p.sy2 += s2 * y2;
            p.yy2 += y2 * y2;
        }
        p
    }
}

/// Inner products of the two secant pairs: `ss = ‖s‖²`, `sy = sᵀy`,
/// `yy = ‖y‖²`, suffix 1 for `(s1, y1)` and 2 for `(s2, y2)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SecantPairs {
    pub ss1: f64,
    pub sy1: f64,
    pub yy1: f64,
    pub ss2: f64,
    pub sy2: f64,
    pub yy2: f64,
}

impl SecantPairs {
    pub fn from_vectors(s1: &[f64], s2: &[f64], y1: &[f64], y2: &[f64]) -> Self {
        SecantPairs {
            ss1: dot(s1, s1),
            sy1: dot(s1, y1),
            yy1: dot(y1, y1),
            ss2: dot(s2, s2),
            sy2: dot(s2, y2),
            yy2: dot(y2, y2),
        }
    }

    fn scale1(&self) -> f64 {
        libm::sqrt(self.ss1 * self.yy1)
    }

    fn scale2(&self) -> f64 {
        libm::sqrt(self.ss2 * self.yy2)
    }
}

/// `num / den` unless `|den| ≤ DEN_REL_TOL · scale`, where `scale` bounds
/// `|den|`-type quantities from Cauchy–Schwarz (so the test is invariant
/// under joint scaling of `s` and `y`).
fn guarded_ratio(num: f64, den: f64, scale: f64) -> Option<f64> {
    if !(den.abs() > DEN_REL_TOL * scale) {
        return None;
    }
    let r = num / den;
    r.is_finite().then_some(r)
}

pub fn bb1_from(p: &SecantPairs) -> Option<f64> {
    guarded_ratio(p.ss1, p.sy1, p.scale1())
}

pub fn bb2_from(p: &SecantPairs) -> Option<f64> {
    guarded_ratio(p.sy1, p.yy1, p.scale1())
}

pub fn tbb1_from(p: &SecantPairs) -> Option<f64> {
    guarded_ratio(p.ss1 + p.ss2, p.sy1 + p.sy2, p.scale1() + p.scale2())
}

pub fn tbb2_from(p: &SecantPairs) -> Option<f64> {
    guarded_ratio(p.sy1 + p.sy2, p.yy1 + p.yy2, p.scale1() + p.scale2())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MixFailure {
    /// A BB value or the variant's own denominator is degenerate.
    Denominator,
    /// `BB1 ≈ BB2`, so any weight gives (nearly) the same step.
    Coincident,
}

fn mix_weight_detail(p: &SecantPairs, variant: MixVariant) -> Result<f64, MixFailure> {
    let bb1 = bb1_from(p).ok_or(MixFailure::Denominator)?;
    let bb2 = bb2_from(p).ok_or(MixFailure::Denominator)?;
    let gap = bb1 - bb2;
    if gap.abs() <= LAMBDA_REL_TOL * bb1.abs().max(bb2.abs()) {
        return Err(MixFailure::Coincident);
    }
    let inner = match variant {
        MixVariant::One => guarded_ratio(p.ss2, p.sy2, p.scale2()),
        MixVariant::Two => guarded_ratio(p.sy2, p.yy2, p.scale2()),
    }
    .ok_or(MixFailure::Denominator)?;
    let lambda = (inner - bb2) / gap;
    if lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(MixFailure::Denominator)
    }
}

/// Mixing weight `λ` of the primed rules. Not clamped to `[0, 1]`.
pub fn mix_weight_from(p: &SecantPairs, variant: MixVariant) -> Option<f64> {
    mix_weight_detail(p, variant).ok()
}

/// `λ·BB1 + (1 − λ)·BB2`. Falls back to `BB1` when the two BB values
/// coincide.
pub fn tbb_prime_from(p: &SecantPairs, variant: MixVariant) -> Option<f64> {
    let bb1 = bb1_from(p)?;
    let bb2 = bb2_from(p)?;
    match mix_weight_detail(p, variant) {
        Ok(lambda) => Some(lambda * bb1 + (1.0 - lambda) * bb2),
        Err(MixFailure::Coincident) => Some(bb1),
        Err(MixFailure::Denominator) => None,
    }
}

/// Curvature estimate `β = s1ᵀy1 / ‖y1‖²` that centres the safeguard.
pub fn beta_from(p: &SecantPairs) -> Option<f64> {
    bb2_from(p)
}

pub fn raw_step_from(rule: StepSizeRule, p: &SecantPairs) -> Option<f64> {
    match rule {
        StepSizeRule::Bb1 => bb1_from(p),
        StepSizeRule::Bb2 => bb2_from(p),
        StepSizeRule::Tbb1 => tbb1_from(p),
        StepSizeRule::Tbb2 => tbb2_from(p),
        StepSizeRule::Tbb1Prime => tbb_prime_from(p, MixVariant::One),
        StepSizeRule::Tbb2Prime => tbb_prime_from(p, MixVariant::Two),
    }
}

pub fn bb1(h: &IterateHistory) -> Option<f64> {
    bb1_from(&h.pairs())
}

pub fn bb2(h: &IterateHistory) -> Option<f64> {
    bb2_from(&h.pairs())
}

pub fn tbb1(h: &IterateHistory) -> Option<f64> {
    tbb1_from(&h.pairs())
}

pub fn tbb2(h: &IterateHistory) -> Option<f64> {
    tbb2_from(&h.pairs())
}

pub fn mix_weight(h: &IterateHistory, variant: MixVariant) -> Option<f64> {
    mix_weight_from(&h.pairs(), variant)
}

pub fn tbb_prime(h: &IterateHistory, variant: MixVariant) -> Option<f64> {
    tbb_prime_from(&h.pairs(), variant)
}

pub fn beta(h: &IterateHistory) -> Option<f64> {
    beta_from(&h.pairs())
}

pub fn raw_step(rule: StepSizeRule, h: &IterateHistory) -> Option<f64> {
    raw_step_from(rule, &h.pairs())
}

/// Bounds for the safeguarded step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeguardConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl Default for SafeguardConfig {
    fn default() -> Self {
        SafeguardConfig {
            alpha_min: 0.006,
            alpha_max: 100.0,
            sigma1: 0.52,
            sigma2: 1.2,
        }
    }
}

impl SafeguardConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        require(
            self.alpha_min > 0.0 && self.alpha_min.is_finite(),
            "alpha_min",
            self.alpha_min,
            "alpha_min > 0",
        )?;
        require(
            self.alpha_max > self.alpha_min && self.alpha_max.is_finite(),
            "alpha_max",
            self.alpha_max,
            "alpha_min < alpha_max < inf",
        )?;
        require(
            self.sigma1 > 0.0 && self.sigma1 < 1.0,
            "sigma1",
            self.sigma1,
            "0 < sigma1 < 1",
        )?;
        require(
            self.sigma2 > 1.0 && self.sigma2 < 2.0,
            "sigma2",
            self.sigma2,
            "1 < sigma2 < 2",
        )
    }

    /// Interval the raw step is projected into: `[max(α_min, σ1|β|),
    /// min(α_max, σ2|β|)]`, or `[α_min, α_max]` when that is empty or `β`
    /// is degenerate.
    pub fn active_interval(&self, beta: Option<f64>) -> (f64, f64) {
        if let Some(b) = beta.filter(|b| b.is_finite()) {
            let lo = self.alpha_min.max(self.sigma1 * b.abs());
            let hi = self.alpha_max.min(self.sigma2 * b.abs());
            if lo <= hi {
                return (lo, hi);
            }
        }
        (self.alpha_min, self.alpha_max)
    }
}

/// Projects `alpha_raw` into the active interval; a degenerate raw step
/// takes the upper end.
pub fn safeguard(alpha_raw: Option<f64>, beta: Option<f64>, cfg: &SafeguardConfig) -> f64 {
    let (lo, hi) = cfg.active_interval(beta);
    match alpha_raw.filter(|a| a.is_finite()) {
        Some(a) => a.clamp(lo, hi),
        None => hi,
    }
}
