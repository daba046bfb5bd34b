//! Provenance sidecars: `<output>.meta.json` beside each primary output.
//! Nothing time- or host-dependent is recorded, so reruns reproduce them.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;
use crate::formats::write_json;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sidecar {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub subcommand: String,
    pub master_seed: u64,
    /// Per-item seeds, in item order, when the run draws random items.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub item_seeds: Vec<u64>,
    pub tol: f64,
    pub tol_override: bool,
    pub outputs: Vec<PathBuf>,
    /// Subcommand-specific configuration and summary.
    pub details: Value,
}

impl Sidecar {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".meta.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_json(path, self)
    }
}
