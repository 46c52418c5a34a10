//! Spectral step-size gradient methods for smooth unconstrained minimization.
//!
//! The crate provides the two-point Barzilai–Borwein steps (`BB1`, `BB2`) and
//! their three-point generalizations (`TBB1`, `TBB2`, `TBB1'`, `TBB2'`), a
//! safeguarded step-size projection, a relaxed generalized Armijo backtracking
//! search, and the driver loop tying them together. Post-hoc convergence-rate
//! diagnostics and Dolan–Moré performance profiles live alongside.
//!
//! The crate is `no_std` and needs only `alloc`. Wall-clock budgets are
//! supplied through the [`solver::Clock`] trait, so the std companion crate is
//! free to plug in `std::time::Instant`.
#![no_std]
// `!(a < b)` is how NaN gets rejected throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bench;
pub mod diagnostics;
pub mod linesearch;
pub mod problems;
pub mod solver;
pub mod stepsize;

mod error;
mod vecops;

pub use error::ConfigError;

pub use bench::{BenchRecord, Metric, PerformanceProfile, ProfileError};
pub use diagnostics::{RateReport, StepViolation};
pub use linesearch::{LineSearchConfig, LineSearchError, LineSearchOutcome};
pub use problems::{DimRule, Objective, Problem, ProblemError};
pub use solver::{
    Clock, IterationRecord, NoClock, SolverConfig, SolverResult, Status, TolMode,
};
pub use stepsize::{IterateHistory, SafeguardConfig, StepSizeRule};
