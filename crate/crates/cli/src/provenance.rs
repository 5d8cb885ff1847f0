//! Input checksums and the provenance block stamped on every report, plus
//! the writers for the fixed-name artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputChecksum {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Reads inputs and remembers their checksums.
#[derive(Debug, Default)]
pub struct Inputs {
    files: Vec<InputChecksum>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::new("input", format!("{} is not UTF-8", path.display())))?;
        self.record(&path.display().to_string(), &text);
        Ok(text)
    }

    /// Records text that did not come from a named file (e.g. a cache entry).
    pub fn record(&mut self, name: &str, text: &str) {
        self.files.push(InputChecksum {
            name: name.to_owned(),
            sha256: sha256_hex(text.as_bytes()),
            bytes: text.len(),
        });
    }
}

#[derive(Debug, Serialize)]
pub struct Provenance<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a Command,
    pub config: &'a RunConfig,
    pub seed: u64,
    pub inputs: &'a [InputChecksum],
}

/// Writes the artifacts of one run into the output directory.
pub struct Reporter<'a> {
    dir: PathBuf,
    provenance: Provenance<'a>,
}

impl<'a> Reporter<'a> {
    pub fn new(
        config: &'a RunConfig,
        command: &'a Command,
        inputs: &'a Inputs,
    ) -> Result<Self, CliError> {
        fs::create_dir_all(&config.out).map_err(|e| CliError::io(&config.out, e))?;
        Ok(Self {
            dir: config.out.clone(),
            provenance: Provenance {
                tool: "epitrack",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config,
                seed: config.seed,
                inputs: &inputs.files,
            },
        })
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        tracing::info!(path = %path.display(), "wrote report");
        Ok(path)
    }

    /// JSON object `{ "provenance": …, <body fields> }`.
    pub fn json<T: Serialize>(&self, name: &str, body: &T) -> Result<PathBuf, CliError> {
        #[derive(Serialize)]
        struct Doc<'b, 'c, T> {
            provenance: &'b Provenance<'c>,
            #[serde(flatten)]
            body: &'b T,
        }
        let mut text = serde_json::to_string_pretty(&Doc {
            provenance: &self.provenance,
            body,
        })?;
        text.push('\n');
        self.write(name, &text)
    }

    /// CSV whose first line is `# provenance: <json>`.
    pub fn csv<R: Serialize>(&self, name: &str, rows: &[R]) -> Result<PathBuf, CliError> {
        let mut text = format!(
            "# provenance: {}\n",
            serde_json::to_string(&self.provenance)?
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r)?;
        }
        let body = w
            .into_inner()
            .map_err(|e| CliError::new("csv", e.to_string()))?;
        text.push_str(std::str::from_utf8(&body).expect("csv output is UTF-8"));
        self.write(name, &text)
    }

    pub fn svg(&self, name: &str, svg: &str) -> Result<PathBuf, CliError> {
        self.write(name, svg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
