//! Front end for the `heattrace` library: potential syntax, jobs, reports.

// `!(x > 0.0)` is how NaN gets rejected alongside the out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod fixtures;
pub mod job;
pub mod parse;
pub mod report;
pub mod run;

pub use job::{Cli, CliCommand, Command, Format, JobArgs, JobSpec, UsageError};
pub use report::Report;
pub use run::{run, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;
pub const EXIT_FAIL: i32 = 4;
