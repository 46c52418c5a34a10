//! Objective-function contract, a central-difference gradient oracle, and the
//! built-in collection of smooth test problems.
//!
//! Every member of the collection carries an analytic gradient. The formulas,
//! with 1-based indices and `n` the dimension:
//!
//! | name | `f(x)` | `x_0` | `x*` |
//! |------|--------|-------|------|
//! | `ext_rosenbrock` | `Σ_{i≤n/2} (x_{2i} − x_{2i−1}²)² + (1 − x_{2i−1})²` | `(−1.2, 1, …)` | ones |
//! | `ext_block_chain` | `Σ_{i≤n/10} (1 − x_{10i−9})² + (1 − x_{10i})² + Σ_{j=10i−9}^{10i−1} (x_j² − x_{j+1})²` | `(−2, …)` | ones |
//! | `ext_white_holst` | `Σ 100(x_{2i} − x_{2i−1}³)² + (1 − x_{2i−1})²` | `(−1.2, 1, …)` | ones |
//! | `ext_beale` | `Σ (1.5 − a(1−b))² + (2.25 − a(1−b²))² + (2.625 − a(1−b³))²`, `(a, b) = (x_{2i−1}, x_{2i})` | `(1, 0.8, …)` | `(3, 0.5, …)` |
//! | `ext_himmelblau` | `Σ (a² + b − 11)² + (a + b² − 7)²` | ones | `(3, 2, …)` |
//! | `ext_powell` | `Σ_{i≤n/4} (x₁ + 10x₂)² + 5(x₃ − x₄)² + (x₂ − 2x₃)⁴ + 10(x₁ − x₄)⁴` per block | `(3, −1, 0, 1, …)` | zeros |
//! | `ext_wood` | `Σ 100(x₁² − x₂)² + (x₁ − 1)² + 90(x₃² − x₄)² + (x₃ − 1)² + 10.1((x₂ − 1)² + (x₄ − 1)²) + 19.8(x₂ − 1)(x₄ − 1)` per block | `(−3, −1, −3, −1, …)` | ones |
//! | `diagonal4` | `½ Σ x_{2i−1}² + 100 x_{2i}²` | ones | zeros |
//! | `raydan1` | `Σ (i/10)(exp(x_i) − x_i)` | ones | zeros |
//! | `raydan2` | `Σ exp(x_i) − x_i` | ones | zeros |
//! | `dixon3dq` | `(x_1 − 1)² + Σ_{j=2}^{n−1} (x_j − x_{j+1})² + (x_n − 1)²` | `(−1, …)` | ones |
//! | `quadratic_qf1` | `½ Σ i·x_i² − x_n` | ones | `e_n / n` |
//! | `ext_penalty` | `Σ_{i<n} (x_i − 1)² + (Σ x_j² − 0.25)²` | `(1, 2, …, n)` | unknown |

use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::vecops::{norm_inf, sub_into};

/// Errors raised while building or probing a [`Problem`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("invalid dimension {n} for `{name}`: {rule}")]
    InvalidDimension {
        name: String,
        n: usize,
        rule: DimRule,
    },
    #[error("vector length {got} does not match problem dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite objective value at probe x {sign} h*e_{index}")]
    NonFiniteEvaluation { index: usize, sign: char },
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

/// Deterministic, thread-safe objective with an analytic gradient.
pub trait Objective: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Writes `∇f(x)` into `out` (same length as `x`).
    fn gradient(&self, x: &[f64], out: &mut [f64]);
}

/// Closure-backed [`Objective`].
pub struct FnObjective<F, G> {
    value: F,
    gradient: G,
}

impl<F, G> Objective for FnObjective<F, G>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64], &mut [f64]) + Send + Sync,
{
    fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        (self.gradient)(x, out)
    }
}

/// Admissible dimensions for a collection member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimRule {
    /// `n ≥ min`.
    AtLeast(usize),
    /// `n` a positive multiple of the block size.
    MultipleOf(usize),
}

impl DimRule {
    pub fn admits(&self, n: usize) -> bool {
        match *self {
            DimRule::AtLeast(min) => n >= min,
            DimRule::MultipleOf(block) => n >= block && n.is_multiple_of(block),
        }
    }

    pub fn min_dim(&self) -> usize {
        match *self {
            DimRule::AtLeast(min) => min,
            DimRule::MultipleOf(block) => block,
        }
    }
}

impl fmt::Display for DimRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DimRule::AtLeast(1) => f.write_str("any"),
            DimRule::AtLeast(min) => write!(f, "at_least_{min}"),
            DimRule::MultipleOf(2) => f.write_str("even"),
            DimRule::MultipleOf(block) => write!(f, "multiple_of_{block}"),
        }
    }
}

/// A named smooth objective together with its start point and, when known,
/// its minimizer.
#[derive(Clone)]
pub struct Problem {
    name: String,
    dim: usize,
    objective: Arc<dyn Objective>,
    start_point: Vec<f64>,
    known_opt_value: Option<f64>,
    known_opt_point: Option<Vec<f64>>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("known_opt_value", &self.known_opt_value)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        start_point: Vec<f64>,
        objective: impl Objective + 'static,
    ) -> Result<Self, ProblemError> {
        let name = name.into();
        let dim = start_point.len();
        if dim == 0 {
            return Err(ProblemError::InvalidDimension {
                name,
                n: 0,
                rule: DimRule::AtLeast(1),
            });
        }
        Ok(Problem {
            name,
            dim,
            objective: Arc::new(objective),
            start_point,
            known_opt_value: None,
            known_opt_point: None,
        })
    }

    /// Builds a problem from a value closure and a gradient closure.
    pub fn from_fns<F, G>(
        name: impl Into<String>,
        start_point: Vec<f64>,
        value: F,
        gradient: G,
    ) -> Result<Self, ProblemError>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        Self::new(name, start_point, FnObjective { value, gradient })
    }

    pub fn with_known_optimum(
        mut self,
        value: f64,
        point: Option<Vec<f64>>,
    ) -> Result<Self, ProblemError> {
        if let Some(p) = &point {
            if p.len() != self.dim {
                return Err(ProblemError::LengthMismatch {
                    expected: self.dim,
                    got: p.len(),
                });
            }
        }
        self.known_opt_value = Some(value);
        self.known_opt_point = point;
        Ok(self)
    }

    pub fn with_start_point(mut self, start_point: Vec<f64>) -> Result<Self, ProblemError> {
        if start_point.len() != self.dim {
            return Err(ProblemError::LengthMismatch {
                expected: self.dim,
                got: start_point.len(),
            });
        }
        self.start_point = start_point;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn start_point(&self) -> &[f64] {
        &self.start_point
    }

    pub fn known_opt_value(&self) -> Option<f64> {
        self.known_opt_value
    }

    pub fn known_opt_point(&self) -> Option<&[f64]> {
        self.known_opt_point.as_deref()
    }

    pub fn value_at(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.objective.value(x)
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        self.objective.gradient(x, out)
    }

    pub fn gradient_at(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        self.gradient_into(x, &mut g);
        g
    }

    fn check_len(&self, x: &[f64]) -> Result<(), ProblemError> {
        if x.len() != self.dim {
            return Err(ProblemError::LengthMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Default central-difference step `1e-6 · (1 + ‖x‖_∞)`.
pub fn default_fd_step(x: &[f64]) -> f64 {
    1e-6 * (1.0 + norm_inf(x))
}

/// Central-difference gradient `(f(x + h e_i) − f(x − h e_i)) / (2h)`.
pub fn fd_gradient(problem: &Problem, x: &[f64], h: f64) -> Result<Vec<f64>, ProblemError> {
    problem.check_len(x)?;
    debug_assert!(h > 0.0);
    let mut probe = x.to_owned();
    let mut out = vec![0.0; x.len()];
    for i in 0..x.len() {
        let xi = x[i];
        probe[i] = xi + h;
        let fp = problem.value_at(&probe);
        if !fp.is_finite() {
            return Err(ProblemError::NonFiniteEvaluation { index: i, sign: '+' });
        }
        probe[i] = xi - h;
        let fm = problem.value_at(&probe);
        if !fm.is_finite() {
            return Err(ProblemError::NonFiniteEvaluation { index: i, sign: '-' });
        }
        probe[i] = xi;
        out[i] = (fp - fm) / (2.0 * h);
    }
    Ok(out)
}

/// Discrepancy between the analytic gradient and [`fd_gradient`] at `x`, as
/// `‖g − g_fd‖_∞ / max(1, ‖g‖_∞)`, using [`default_fd_step`].
pub fn gradient_error(problem: &Problem, x: &[f64]) -> Result<f64, ProblemError> {
    let fd = fd_gradient(problem, x, default_fd_step(x))?;
    let g = problem.gradient_at(x);
    let mut diff = vec![0.0; g.len()];
    sub_into(&g, &fd, &mut diff);
    let scale = norm_inf(&g).max(1.0);
    Ok(norm_inf(&diff) / scale)
}

/// One entry of the built-in collection.
pub struct CatalogEntry {
    pub name: &'static str,
    pub rule: DimRule,
    build: fn(usize) -> Problem,
}

impl CatalogEntry {
    pub fn build(&self, n: usize) -> Result<Problem, ProblemError> {
        if !self.rule.admits(n) {
            return Err(ProblemError::InvalidDimension {
                name: self.name.into(),
                n,
                rule: self.rule,
            });
        }
        Ok((self.build)(n))
    }
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.name, self.rule)
    }
}

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "ext_rosenbrock",
        rule: DimRule::MultipleOf(2),
        build: build_ext_rosenbrock,
    },
    CatalogEntry {
        name: "ext_block_chain",
        rule: DimRule::MultipleOf(10),
        build: build_ext_block_chain,
    },
    CatalogEntry {
        name: "ext_white_holst",
        rule: DimRule::MultipleOf(2),
        build: build_ext_white_holst,
    },
    CatalogEntry {
        name: "ext_beale",
        rule: DimRule::MultipleOf(2),
        build: build_ext_beale,
    },
    CatalogEntry {
        name: "ext_himmelblau",
        rule: DimRule::MultipleOf(2),
        build: build_ext_himmelblau,
    },
    CatalogEntry {
        name: "ext_powell",
        rule: DimRule::MultipleOf(4),
        build: build_ext_powell,
    },
    CatalogEntry {
        name: "ext_wood",
        rule: DimRule::MultipleOf(4),
        build: build_ext_wood,
    },
    CatalogEntry {
        name: "diagonal4",
        rule: DimRule::MultipleOf(2),
        build: build_diagonal4,
    },
    CatalogEntry {
        name: "raydan1",
        rule: DimRule::AtLeast(1),
        build: build_raydan1,
    },
    CatalogEntry {
        name: "raydan2",
        rule: DimRule::AtLeast(1),
        build: build_raydan2,
    },
    CatalogEntry {
        name: "dixon3dq",
        rule: DimRule::AtLeast(2),
        build: build_dixon3dq,
    },
    CatalogEntry {
        name: "quadratic_qf1",
        rule: DimRule::AtLeast(1),
        build: build_quadratic_qf1,
    },
    CatalogEntry {
        name: "ext_penalty",
        rule: DimRule::AtLeast(2),
        build: build_ext_penalty,
    },
];

/// All collection members in a fixed order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// Looks a collection member up by (case-insensitive) name and builds it at
/// dimension `n`.
pub fn by_name(name: &str, n: usize) -> Result<Problem, ProblemError> {
    CATALOG
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| ProblemError::UnknownProblem(name.into()))?
        .build(n)
}

/// Every collection member admitting dimension `n`. Members whose dimension
/// rule rejects `n` are skipped with a warning.
pub fn standard_collection(n: usize) -> Result<Vec<Problem>, ProblemError> {
    let smallest = CATALOG.iter().map(|e| e.rule.min_dim()).min().unwrap_or(1);
    if n < smallest {
        return Err(ProblemError::InvalidDimension {
            name: "standard_collection".into(),
            n,
            rule: DimRule::AtLeast(smallest),
        });
    }
    let mut out = Vec::with_capacity(CATALOG.len());
    for entry in CATALOG {
        if entry.rule.admits(n) {
            out.push((entry.build)(n));
        } else {
            log::warn!("skipping {}: n = {} violates {}", entry.name, n, entry.rule);
        }
    }
    Ok(out)
}

/// Extended Rosenbrock without the usual factor 100 on the coupling term.
pub fn make_example_81(n: usize) -> Result<Problem, ProblemError> {
    CATALOG[0].build(n)
}

/// Chained blocks of ten variables with unit end anchors.
pub fn make_example_82(n: usize) -> Result<Problem, ProblemError> {
    CATALOG[1].build(n)
}

fn finish(name: &str, x0: Vec<f64>, obj: impl Objective + 'static, f_star: Option<f64>, x_star: Option<Vec<f64>>) -> Problem {
    let p = Problem::new(name, x0, obj).expect("catalog dimensions are validated");
    match f_star {
        Some(v) => p.with_known_optimum(v, x_star).expect("optimum has problem dimension"),
        None => p,
    }
}

fn repeat_pattern(pattern: &[f64], n: usize) -> Vec<f64> {
    pattern.iter().copied().cycle().take(n).collect()
}

struct ExtRosenbrock;

impl Objective for ExtRosenbrock {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(2)
            .map(|p| {
                let t = p[1] - p[0] * p[0];
                let u = 1.0 - p[0];
                t * t + u * u
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (p, g) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            let t = p[1] - p[0] * p[0];
            g[0] = -4.0 * p[0] * t - 2.0 * (1.0 - p[0]);
            g[1] = 2.0 * t;
        }
    }
}

fn build_ext_rosenbrock(n: usize) -> Problem {
    let x0 = repeat_pattern(&[-1.2, 1.0], n);
    finish("ext_rosenbrock", x0, ExtRosenbrock, Some(0.0), Some(vec![1.0; n]))
}

struct ExtBlockChain;

impl Objective for ExtBlockChain {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(10)
            .map(|b| {
                let head = 1.0 - b[0];
                let tail = 1.0 - b[9];
                let chain: f64 = b
                    .windows(2)
                    .map(|w| {
                        let t = w[0] * w[0] - w[1];
                        t * t
                    })
                    .sum();
                head * head + tail * tail + chain
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (b, g) in x.chunks_exact(10).zip(out.chunks_exact_mut(10)) {
            g.fill(0.0);
            g[0] = -2.0 * (1.0 - b[0]);
            g[9] = -2.0 * (1.0 - b[9]);
            for j in 0..9 {
                let t = b[j] * b[j] - b[j + 1];
                g[j] += 4.0 * b[j] * t;
                g[j + 1] -= 2.0 * t;
            }
        }
    }
}

fn build_ext_block_chain(n: usize) -> Problem {
    finish("ext_block_chain", vec![-2.0; n], ExtBlockChain, Some(0.0), Some(vec![1.0; n]))
}

struct ExtWhiteHolst;

impl Objective for ExtWhiteHolst {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(2)
            .map(|p| {
                let t = p[1] - p[0] * p[0] * p[0];
                let u = 1.0 - p[0];
                100.0 * t * t + u * u
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (p, g) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            let t = p[1] - p[0] * p[0] * p[0];
            g[0] = -600.0 * p[0] * p[0] * t - 2.0 * (1.0 - p[0]);
            g[1] = 200.0 * t;
        }
    }
}

fn build_ext_white_holst(n: usize) -> Problem {
    let x0 = repeat_pattern(&[-1.2, 1.0], n);
    finish("ext_white_holst", x0, ExtWhiteHolst, Some(0.0), Some(vec![1.0; n]))
}

struct ExtBeale;

impl ExtBeale {
    fn residuals(a: f64, b: f64) -> [f64; 3] {
        [
            1.5 - a * (1.0 - b),
            2.25 - a * (1.0 - b * b),
            2.625 - a * (1.0 - b * b * b),
        ]
    }
}

impl Objective for ExtBeale {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(2)
            .map(|p| {
                let [t1, t2, t3] = Self::residuals(p[0], p[1]);
                t1 * t1 + t2 * t2 + t3 * t3
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (p, g) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            let (a, b) = (p[0], p[1]);
            let [t1, t2, t3] = Self::residuals(a, b);
            g[0] = -2.0 * (t1 * (1.0 - b) + t2 * (1.0 - b * b) + t3 * (1.0 - b * b * b));
            g[1] = 2.0 * a * (t1 + 2.0 * b * t2 + 3.0 * b * b * t3);
        }
    }
}

fn build_ext_beale(n: usize) -> Problem {
    let x0 = repeat_pattern(&[1.0, 0.8], n);
    finish("ext_beale", x0, ExtBeale, Some(0.0), Some(repeat_pattern(&[3.0, 0.5], n)))
}

struct ExtHimmelblau;

impl Objective for ExtHimmelblau {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(2)
            .map(|p| {
                let t = p[0] * p[0] + p[1] - 11.0;
                let u = p[0] + p[1] * p[1] - 7.0;
                t * t + u * u
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (p, g) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            let t = p[0] * p[0] + p[1] - 11.0;
            let u = p[0] + p[1] * p[1] - 7.0;
            g[0] = 4.0 * p[0] * t + 2.0 * u;
            g[1] = 2.0 * t + 4.0 * p[1] * u;
        }
    }
}

fn build_ext_himmelblau(n: usize) -> Problem {
    finish(
        "ext_himmelblau",
        vec![1.0; n],
        ExtHimmelblau,
        Some(0.0),
        Some(repeat_pattern(&[3.0, 2.0], n)),
    )
}

struct ExtPowell;

impl Objective for ExtPowell {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(4)
            .map(|q| {
                let a = q[0] + 10.0 * q[1];
                let b = q[2] - q[3];
                let c = q[1] - 2.0 * q[2];
                let d = q[0] - q[3];
                a * a + 5.0 * b * b + c * c * c * c + 10.0 * d * d * d * d
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (q, g) in x.chunks_exact(4).zip(out.chunks_exact_mut(4)) {
            let a = q[0] + 10.0 * q[1];
            let b = q[2] - q[3];
            let c3 = cube(q[1] - 2.0 * q[2]);
            let d3 = cube(q[0] - q[3]);
            g[0] = 2.0 * a + 40.0 * d3;
            g[1] = 20.0 * a + 4.0 * c3;
            g[2] = 10.0 * b - 8.0 * c3;
            g[3] = -10.0 * b - 40.0 * d3;
        }
    }
}

#[inline]
fn cube(v: f64) -> f64 {
    v * v * v
}

fn build_ext_powell(n: usize) -> Problem {
    let x0 = repeat_pattern(&[3.0, -1.0, 0.0, 1.0], n);
    finish("ext_powell", x0, ExtPowell, Some(0.0), Some(vec![0.0; n]))
}

struct ExtWood;

impl Objective for ExtWood {
    fn value(&self, x: &[f64]) -> f64 {
        x.chunks_exact(4)
            .map(|q| {
                let a = q[0] * q[0] - q[1];
                let b = q[2] * q[2] - q[3];
                let (e1, e2, e3, e4) = (q[0] - 1.0, q[1] - 1.0, q[2] - 1.0, q[3] - 1.0);
                100.0 * a * a
                    + e1 * e1
                    + 90.0 * b * b
                    + e3 * e3
                    + 10.1 * (e2 * e2 + e4 * e4)
                    + 19.8 * e2 * e4
            })
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (q, g) in x.chunks_exact(4).zip(out.chunks_exact_mut(4)) {
            let a = q[0] * q[0] - q[1];
            let b = q[2] * q[2] - q[3];
            let (e1, e2, e3, e4) = (q[0] - 1.0, q[1] - 1.0, q[2] - 1.0, q[3] - 1.0);
            g[0] = 400.0 * q[0] * a + 2.0 * e1;
            g[1] = -200.0 * a + 20.2 * e2 + 19.8 * e4;
            g[2] = 360.0 * q[2] * b + 2.0 * e3;
            g[3] = -180.0 * b + 20.2 * e4 + 19.8 * e2;
        }
    }
}

fn build_ext_wood(n: usize) -> Problem {
    let x0 = repeat_pattern(&[-3.0, -1.0, -3.0, -1.0], n);
    finish("ext_wood", x0, ExtWood, Some(0.0), Some(vec![1.0; n]))
}

struct Diagonal4;

impl Objective for Diagonal4 {
    fn value(&self, x: &[f64]) -> f64 {
        0.5 * x
            .chunks_exact(2)
            .map(|p| p[0] * p[0] + 100.0 * p[1] * p[1])
            .sum::<f64>()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (p, g) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            g[0] = p[0];
            g[1] = 100.0 * p[1];
        }
    }
}

fn build_diagonal4(n: usize) -> Problem {
    finish("diagonal4", vec![1.0; n], Diagonal4, Some(0.0), Some(vec![0.0; n]))
}

struct Raydan1;

impl Objective for Raydan1 {
    fn value(&self, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(i, &xi)| ((i + 1) as f64 / 10.0) * (libm::exp(xi) - xi))
            .sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (i, (&xi, g)) in x.iter().zip(out.iter_mut()).enumerate() {
            *g = ((i + 1) as f64 / 10.0) * (libm::exp(xi) - 1.0);
        }
    }
}

fn build_raydan1(n: usize) -> Problem {
    let f_star = (1..=n).map(|i| i as f64 / 10.0).sum();
    finish("raydan1", vec![1.0; n], Raydan1, Some(f_star), Some(vec![0.0; n]))
}

struct Raydan2;

impl Objective for Raydan2 {
    fn value(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xi| libm::exp(xi) - xi).sum()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (&xi, g) in x.iter().zip(out.iter_mut()) {
            *g = libm::exp(xi) - 1.0;
        }
    }
}

fn build_raydan2(n: usize) -> Problem {
    finish("raydan2", vec![1.0; n], Raydan2, Some(n as f64), Some(vec![0.0; n]))
}

struct Dixon3dq;

impl Objective for Dixon3dq {
    fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let head = x[0] - 1.0;
        let tail = x[n - 1] - 1.0;
        let chain: f64 = x[1..]
            .windows(2)
            .map(|w| {
                let t = w[0] - w[1];
                t * t
            })
            .sum();
        head * head + chain + tail * tail
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        out.fill(0.0);
        out[0] = 2.0 * (x[0] - 1.0);
        for j in 1..n - 1 {
            let t = x[j] - x[j + 1];
            out[j] += 2.0 * t;
            out[j + 1] -= 2.0 * t;
        }
        out[n - 1] += 2.0 * (x[n - 1] - 1.0);
    }
}

fn build_dixon3dq(n: usize) -> Problem {
    finish("dixon3dq", vec![-1.0; n], Dixon3dq, Some(0.0), Some(vec![1.0; n]))
}

struct QuadraticQf1;

impl Objective for QuadraticQf1 {
    fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let quad: f64 = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| (i + 1) as f64 * xi * xi)
            .sum();
        0.5 * quad - x[n - 1]
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (i, (&xi, g)) in x.iter().zip(out.iter_mut()).enumerate() {
            *g = (i + 1) as f64 * xi;
        }
        out[x.len() - 1] -= 1.0;
    }
}

fn build_quadratic_qf1(n: usize) -> Problem {
    let mut x_star = vec![0.0; n];
    x_star[n - 1] = 1.0 / n as f64;
    let f_star = -0.5 / n as f64;
    finish("quadratic_qf1", vec![1.0; n], QuadraticQf1, Some(f_star), Some(x_star))
}

struct ExtPenalty;

impl Objective for ExtPenalty {
    fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let lin: f64 = x[..n - 1]
            .iter()
            .map(|&xi| (xi - 1.0) * (xi - 1.0))
            .sum();
        let t = x.iter().map(|xi| xi * xi).sum::<f64>() - 0.25;
        lin + t * t
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        let t = x.iter().map(|xi| xi * xi).sum::<f64>() - 0.25;
        for (i, (&xi, g)) in x.iter().zip(out.iter_mut()).enumerate() {
            *g = 4.0 * xi * t;
            if i < n - 1 {
                *g += 2.0 * (xi - 1.0);
            }
        }
    }
}

fn build_ext_penalty(n: usize) -> Problem {
    let x0 = (1..=n).map(|i| i as f64).collect();
    finish("ext_penalty", x0, ExtPenalty, None, None)
}
