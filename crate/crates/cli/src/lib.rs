//! Scenario files, commands and report formats behind the `condsym` binary.

pub mod commands;
pub mod report;
pub mod scenario;

pub use commands::{demo, run_census, verify, CommandError, Demo, Outcome, RunOptions, Status};
pub use report::{Format, Record, Report, ReportParseError};
pub use scenario::{ParseError, ScenarioFile};
