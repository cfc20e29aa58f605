//! Output files: header comment, atomic write, and a manifest per run.

use crate::config::RunConfig;
use crate::failure::Failure;
use jacobi::transform::write_atomic;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct FileRecord {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config_sha256: String,
    config: &'a RunConfig,
    inputs: &'a [FileRecord],
    outputs: &'a [FileRecord],
}

/// Collects the files of one run. Relative output paths land in the output
/// directory; the manifest is written last, next to the first output.
pub struct Sink {
    config: RunConfig,
    dir: PathBuf,
    inputs: Vec<FileRecord>,
    outputs: Vec<(PathBuf, FileRecord)>,
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Sink {
    pub fn new(config: RunConfig, dir: &Path) -> Self {
        Sink {
            config,
            dir: dir.to_path_buf(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn read_input(&mut self, path: &Path) -> Result<String, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        self.inputs.push(FileRecord {
            path: path.display().to_string(),
            sha256: digest(text.as_bytes()),
        });
        Ok(text)
    }

    /// Body prefixed with the header comment line.
    pub fn render(&self, body: &str) -> String {
        format!("# {}\n{body}", self.config.header())
    }

    pub fn write(&mut self, name: &Path, body: &str) -> Result<(), Failure> {
        let path = if name.is_absolute() { name.to_path_buf() } else { self.dir.join(name) };
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| Failure::Domain(format!("{}: {e}", parent.display())))?;
        }
        let text = self.render(body);
        write_atomic(&path, text.as_bytes())?;
        let record = FileRecord {
            path: name.display().to_string(),
            sha256: digest(text.as_bytes()),
        };
        self.outputs.push((path, record));
        Ok(())
    }

    pub fn finish(self) -> Result<(), Failure> {
        let Some((first, _)) = self.outputs.first() else {
            return Ok(());
        };
        let stem = first.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let path = first.with_file_name(format!("{stem}.manifest.json"));
        let outputs: Vec<FileRecord> = self
            .outputs
            .iter()
            .map(|(_, r)| FileRecord {
                path: r.path.clone(),
                sha256: r.sha256.clone(),
            })
            .collect();
        let manifest = Manifest {
            tool: "jacobi",
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: self.config.hash(),
            config: &self.config,
            inputs: &self.inputs,
            outputs: &outputs,
        };
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        write_atomic(&path, json.as_bytes())?;
        Ok(())
    }
}
