//! Benchmark and corpus ingestion.
//!
//! All loaders are deterministic: files are visited in sorted path order and
//! records keep their on-disk order.

mod blimp;
mod corpus;
mod hash;
mod li_adger;
mod normalized;
mod zorro;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Sentence;

pub use blimp::load_blimp;
pub use corpus::{load_training_corpus, CorpusFormat, TrainingCorpus};
pub use hash::dataset_hash;
pub use li_adger::{build_li_adger_pairs, load_li_adger, Condition, SentenceType, LEXICALIZATIONS};
pub use normalized::{
    read_pairs_tsv, read_sentences_tsv, sentences_of_pairs, write_pairs_tsv, write_sentences_tsv,
    PAIRS_HEADER, SENTENCES_HEADER,
};
pub use zorro::{load_zorro, ZorroLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "blimp")]
    Blimp,
    #[serde(rename = "zorro")]
    Zorro,
    #[serde(rename = "li_adger")]
    LiAdger,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Blimp => "blimp",
            Source::Zorro => "zorro",
            Source::LiAdger => "li_adger",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "blimp" => Ok(Source::Blimp),
            "zorro" => Ok(Source::Zorro),
            "li_adger" | "liadger" | "li-adger" => Ok(Source::LiAdger),
            other => Err(Error::Config(format!("unknown source {other:?}"))),
        }
    }
}

/// One benchmark item: an acceptable sentence and its unacceptable counterpart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalPair {
    pub id: String,
    pub paradigm: String,
    pub phenomenon: String,
    pub good: Sentence,
    pub bad: Sentence,
    pub source: Source,
}

/// Loader output together with the non-fatal warnings raised while loading.
#[derive(Debug, Clone)]
pub struct Ingested<T> {
    pub items: Vec<T>,
    pub warnings: Vec<String>,
}

impl<T> Default for Ingested<T> {
    fn default() -> Self {
        Ingested {
            items: Vec::new(),
            warnings: Vec::new(),
        }
    }
}

impl<T> Ingested<T> {
    pub(crate) fn warn(&mut self, message: String) {
        log::warn!("{message}");
        self.warnings.push(message);
    }
}

/// Regular files directly under `dir` with one of `extensions`, sorted.
pub(crate) fn list_files(dir: &Path, extensions: &[&str]) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if !path.is_file() {
            continue;
        }
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if extensions.iter().any(|x| x.eq_ignore_ascii_case(ext)) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}
