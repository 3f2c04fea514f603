use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::args::Command;
use crate::error::Result;
use crate::formats::{read_json, write_json};

/// Sidecar written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Full parameter set; replaying it reproduces the outputs byte for byte.
    pub command: Command,
    pub seed: Option<u64>,
    pub library_version: String,
    /// The file this manifest accompanies.
    pub output: PathBuf,
    /// Every file the run produced.
    pub outputs: Vec<PathBuf>,
    pub duration_seconds: f64,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Writes one manifest per entry of `outputs`.
pub fn write_manifests(command: &Command, outputs: &[PathBuf], elapsed: Duration) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(outputs.len());
    for out in outputs {
        let m = RunManifest {
            subcommand: command.name().to_string(),
            command: command.clone(),
            seed: command.seed(),
            library_version: arspec_core::VERSION.to_string(),
            output: out.clone(),
            outputs: outputs.to_vec(),
            duration_seconds: elapsed.as_secs_f64(),
        };
        let path = manifest_path(out);
        write_json(&path, &m)?;
        written.push(path);
    }
    Ok(written)
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    read_json(path)
}
