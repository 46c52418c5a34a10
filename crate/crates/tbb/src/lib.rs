//! Std companion to `tbb-core`: wall clock, parallel benchmark suites, CSV
//! formats and the gradient check used by the `tbb` binary.

pub mod csvio;
pub mod gradcheck;
pub mod suite;

pub use csvio::CsvError;
pub use suite::{run_suite, solve, StdClock};
