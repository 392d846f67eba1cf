//! Library side of the `minklab` command: configuration, suite reports,
//! the verification suites and the demos.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod demos;
pub mod error;
pub mod report;
pub mod suites;

pub use config::Config;
pub use error::{CliError, Result};
pub use report::{Bound, Check, SuiteReport, SCHEMA_VERSION};
pub use suites::{run_suite, SUITES};
