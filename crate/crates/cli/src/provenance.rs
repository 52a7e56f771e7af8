//! Provenance recording: every run ends by writing `provenance.json`, which
//! echoes the resolved configuration, the SHA-256 of each input, and the
//! names of all artifacts written. The record contains no timestamps, so a
//! repeated run produces byte-identical output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use netcurv::{Error, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const PROVENANCE_SCHEMA: &str = "netcurv-provenance/1";

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path, content: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(content);
        let sha256 = hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        InputDigest {
            path: path.display().to_string(),
            bytes: content.len(),
            sha256,
        }
    }
}

#[derive(Serialize)]
struct Provenance<'a> {
    schema: &'static str,
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    config: serde_json::Value,
    inputs: &'a [InputDigest],
    outputs: &'a [String],
}

/// The output directory of one run. Files opened through it are listed in
/// the provenance record written by [`OutDir::finish`].
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)?;
        Ok(OutDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Opens `name` for writing inside the directory and records it.
    pub fn file(&mut self, name: &str) -> Result<fs::File> {
        let file = fs::File::create(self.root.join(name))?;
        self.written.push(name.to_string());
        Ok(file)
    }

    /// Writes the provenance record and consumes the directory handle.
    pub fn finish(
        mut self,
        subcommand: &str,
        config: serde_json::Value,
        inputs: &[InputDigest],
    ) -> Result<()> {
        self.written.push("provenance.json".to_string());
        let record = Provenance {
            schema: PROVENANCE_SCHEMA,
            tool: "netcurv",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            config,
            inputs,
            outputs: &self.written,
        };
        let mut file = fs::File::create(self.root.join("provenance.json"))?;
        serde_json::to_writer_pretty(&mut file, &record)
            .map_err(|e| Error::Config(format!("provenance serialization failed: {e}")))?;
        writeln!(file)?;
        Ok(())
    }
}
