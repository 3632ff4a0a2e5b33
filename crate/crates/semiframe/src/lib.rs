//! Scenario files, pipelines, signal recovery and reports built on
//! `semiframe-core`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod pipeline;
pub mod reconstruct;
pub mod report;
pub mod scenario;

pub use error::{ExitStatus, RunError, RunResult};
pub use pipeline::{run, Command};
pub use report::{emit_report, Format, RunReport};
pub use scenario::{load_scenario, parse_scenario, Scenario};
