//! Command-line front end for the wronskian automorphism criterion.

pub mod commands;
pub mod report;

pub use commands::{run, Cli};
pub use report::ReportDocument;
