//! Batch front end for the Heun-class pipeline: job files in, JSON reports
//! and CSV scan tables out.

pub mod error;
pub mod job;
pub mod report;
pub mod run;
pub mod scan;

pub use error::CliError;
pub use job::JobSpec;
pub use report::{RunMode, SolutionReport};
