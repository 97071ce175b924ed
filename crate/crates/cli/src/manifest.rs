//! Run manifests: what was run, on which inputs, producing which files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const RUN_MANIFEST_FORMAT: &str = "wlcovers-run/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub format: String,
    pub command: String,
    pub arguments: Vec<String>,
    /// SHA-256 of each input file, keyed by the path as given.
    pub input_digests: BTreeMap<String, String>,
    pub version: String,
    /// SHA-256 of each output file, keyed by path.
    pub outputs: BTreeMap<String, String>,
    pub exit_code: i32,
    pub wall_time_ms: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

/// Collects inputs and outputs while a command runs.
#[derive(Debug)]
pub struct RunRecorder {
    command: String,
    arguments: Vec<String>,
    started: Instant,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl RunRecorder {
    pub fn new(command: &str, arguments: Vec<String>) -> Self {
        RunRecorder {
            command: command.to_string(),
            arguments,
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn outputs(&self) -> &[PathBuf] {
        &self.outputs
    }

    pub fn finish(&self, exit_code: i32) -> RunManifest {
        let digests = |paths: &[PathBuf]| {
            paths
                .iter()
                .filter_map(|p| Some((p.display().to_string(), file_digest(p).ok()?)))
                .collect()
        };
        RunManifest {
            format: RUN_MANIFEST_FORMAT.to_string(),
            command: self.command.clone(),
            arguments: self.arguments.clone(),
            input_digests: digests(&self.inputs),
            version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: digests(&self.outputs),
            exit_code,
            wall_time_ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

/// Default manifest location: `run.json` inside an output directory, or
/// `<file>.run.json` next to an output file.
pub fn default_location(output: &Path) -> PathBuf {
    if output.is_dir() {
        output.join("run.json")
    } else {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".run.json");
        output.with_file_name(name)
    }
}

pub fn write(manifest: &RunManifest, path: &Path) -> std::io::Result<()> {
    let mut json = serde_json::to_string_pretty(manifest).map_err(std::io::Error::other)?;
    json.push('\n');
    fs::write(path, json)
}
