//! File formats, parallel batch drivers and the `maxineq` command line on
//! top of `maxineq-core`.

pub mod batch;
pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod sidecar;
pub mod weightspec;

pub use cli::run;
pub use error::{CliError, CliResult};
