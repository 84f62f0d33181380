//! Command-line front end for `crcalc`: scenario files, task dispatch and
//! report emission.
//!
//! Exit codes: 0 when every pass-type task passes, 1 when one fails, 2 for
//! unreadable or invalid input, 3 when a computation fails.

pub mod cli;
pub mod error;
pub mod literal;
pub mod report;
pub mod run;
pub mod scenario;

pub use cli::{execute, Cli};
pub use error::CliError;
pub use report::{Format, Report};
pub use run::{run_scenario, Overrides};
pub use scenario::Scenario;
