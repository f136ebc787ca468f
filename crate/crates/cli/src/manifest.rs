use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything needed to trace an output back to its inputs. No timestamps
/// or host details, so identical runs produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub formats: Formats,
    pub subcommand: String,
    pub arguments: Vec<String>,
    pub config_sha256: String,
    pub config: RunConfig,
    pub inputs: Vec<FileRecord>,
    pub outputs: Vec<FileRecord>,
    /// Subcommand-specific facts (counts, accuracies, warnings).
    pub facts: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Formats {
    pub ngram_model: String,
    pub tagger_model: String,
    pub score_file: String,
    pub pairs_file: String,
}

impl Default for Formats {
    fn default() -> Self {
        Formats {
            ngram_model: mpaudit::ngram::MODEL_HEADER.into(),
            tagger_model: mpaudit::postag::MODEL_HEADER.into(),
            score_file: mpaudit::scorefile::HEADER.join(" "),
            pairs_file: mpaudit::dataio::PAIRS_HEADER.join(" "),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects inputs and outputs of one subcommand run inside `out_dir`.
pub struct Run {
    out_dir: PathBuf,
    manifest: Manifest,
}

impl Run {
    pub fn start(subcommand: &str, arguments: Vec<String>, config: &RunConfig, out_dir: &Path) -> anyhow::Result<Run> {
        std::fs::create_dir_all(out_dir)
            .map_err(|e| mpaudit::Error::io(out_dir, e))
            .context("creating output directory")?;
        let toml = config.to_toml();
        Ok(Run {
            out_dir: out_dir.to_path_buf(),
            manifest: Manifest {
                tool: "mpaudit".into(),
                version: env!("CARGO_PKG_VERSION").into(),
                formats: Formats::default(),
                subcommand: subcommand.into(),
                arguments,
                config_sha256: sha256_hex(toml.as_bytes()),
                config: config.clone(),
                inputs: Vec::new(),
                outputs: Vec::new(),
                facts: serde_json::Map::new(),
            },
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Records a file or directory input by content hash.
    pub fn input(&mut self, role: &str, path: &Path) -> anyhow::Result<()> {
        let sha256 = mpaudit::dataio::dataset_hash(path)?;
        self.manifest.inputs.push(FileRecord {
            role: role.into(),
            path: path.display().to_string(),
            sha256,
        });
        Ok(())
    }

    pub fn fact(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("fact serializes");
        self.manifest.facts.insert(key.into(), value);
    }

    /// Writes `name` inside the output directory and records its hash.
    pub fn write(&mut self, role: &str, name: &str, contents: impl AsRef<[u8]>) -> anyhow::Result<PathBuf> {
        let path = self.out_dir.join(name);
        let bytes = contents.as_ref();
        std::fs::write(&path, bytes).map_err(|e| mpaudit::Error::io(&path, e))?;
        self.manifest.outputs.push(FileRecord {
            role: role.into(),
            path: name.into(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn finish(mut self) -> anyhow::Result<Manifest> {
        let toml = self.manifest.config.to_toml();
        self.write("config", CONFIG_FILE, toml)?;
        let json = serde_json::to_string_pretty(&self.manifest)? + "\n";
        let path = self.out_dir.join(MANIFEST_FILE);
        std::fs::write(&path, json).map_err(|e| mpaudit::Error::io(&path, e))?;
        Ok(self.manifest)
    }
}

pub fn read_manifest(path: &Path) -> anyhow::Result<Manifest> {
    let text = std::fs::read_to_string(path).map_err(|e| mpaudit::Error::io(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| mpaudit::Error::schema(path.display().to_string(), e.to_string()).into())
}
