//! Command-line front end: builtin figure scenarios, JSON-configured runs,
//! parameter sweeps and the mapping / error-budget utilities.
//!
//! Everything written is deterministic: CSV values use 17 significant
//! digits, '.' decimals and '\n' line endings, and sweeps keep grid order.

pub mod config;
pub mod error;
pub mod scenario;
pub mod spectrum;
pub mod sweep;
pub mod tools;

pub use config::{ModeSelection, ScenarioConfig};
pub use error::CliError;
pub use scenario::{builtin, run_scenario, Bundle, Summary};
pub use sweep::{run_sweep, sweep_csv};

use std::fs;
use std::path::Path;

/// Writes `name` under `dir`, creating the directory.
pub fn write_output(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))
}

/// Writes every file of a bundle plus `<name>_summary.json`.
pub fn write_bundle(dir: &Path, bundle: &Bundle) -> Result<(), CliError> {
    for f in &bundle.files {
        write_output(dir, &f.name, &f.contents)?;
    }
    write_output(dir, &format!("{}_summary.json", bundle.summary.name), &bundle.summary_json())
}
