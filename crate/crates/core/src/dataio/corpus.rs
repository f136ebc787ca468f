use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    /// One utterance per line, tokenized with [`tokenize`].
    #[default]
    Plain,
    /// One utterance per line as space-separated `token_TAG` items.
    Tagged,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(CorpusFormat::Plain),
            "tagged" => Ok(CorpusFormat::Tagged),
            other => Err(Error::Config(format!("unknown corpus format {other:?}"))),
        }
    }
}

/// Utterances of a training corpus, optionally with a parallel tag stream.
#[derive(Debug, Clone, Default)]
pub struct TrainingCorpus {
    pub name: String,
    pub sentences: Vec<Vec<String>>,
    pub tags: Option<Vec<Vec<String>>>,
    pub token_count: usize,
}

impl TrainingCorpus {
    pub fn from_sentences(name: impl Into<String>, sentences: Vec<Vec<String>>) -> Self {
        let token_count = sentences.iter().map(Vec::len).sum();
        TrainingCorpus {
            name: name.into(),
            sentences,
            tags: None,
            token_count,
        }
    }

    /// Tokenizes each line of `text` as one utterance; blank lines are skipped.
    pub fn from_text(name: impl Into<String>, text: &str) -> Self {
        let sentences = text
            .lines()
            .map(tokenize)
            .filter(|t| !t.is_empty())
            .collect();
        Self::from_sentences(name, sentences)
    }

    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }

    /// `(tokens, tags)` pairs; empty when the corpus carries no tags.
    pub fn tagged(&self) -> impl Iterator<Item = (&[String], &[String])> {
        self.tags
            .iter()
            .flat_map(|tags| self.sentences.iter().zip(tags))
            .map(|(s, t)| (s.as_slice(), t.as_slice()))
    }
}

/// Splits one `token_TAG` item at its last underscore.
pub(crate) fn split_tagged(item: &str) -> Option<(String, String)> {
    let (tok, tag) = item.rsplit_once('_')?;
    if tok.is_empty() || tag.is_empty() {
        return None;
    }
    Some((tok.to_lowercase(), tag.to_string()))
}

/// Reads a training corpus in one pass. An empty file loads with a warning.
pub fn load_training_corpus(path: &Path, format: CorpusFormat) -> Result<TrainingCorpus> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut sentences = Vec::new();
    let mut all_tags = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        match format {
            CorpusFormat::Plain => {
                let toks = tokenize(&line);
                if !toks.is_empty() {
                    sentences.push(toks);
                }
            }
            CorpusFormat::Tagged => {
                let mut toks = Vec::new();
                let mut tags = Vec::new();
                for item in line.split_whitespace() {
                    let (tok, tag) = split_tagged(item).ok_or_else(|| Error::Ingest {
                        file: path.display().to_string(),
                        record: index,
                        message: format!("item {item:?} is not token_TAG"),
                    })?;
                    toks.push(tok);
                    tags.push(tag);
                }
                if !toks.is_empty() {
                    sentences.push(toks);
                    all_tags.push(tags);
                }
            }
        }
    }
    let mut corpus = TrainingCorpus::from_sentences(name, sentences);
    if format == CorpusFormat::Tagged {
        corpus.tags = Some(all_tags);
    }
    if corpus.is_empty() {
        log::warn!("{}: training corpus is empty", path.display());
    }
    Ok(corpus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_countable() {
        let tmp = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(tmp.path(), "a b\nc").unwrap();
        let c = load_training_corpus(tmp.path(), CorpusFormat::Plain).unwrap();
        assert_eq!(c.sentences.len(), 2);
        assert_eq!(c.token_count, 3);
    }

    #[test]
    fn empty_file_is_usable() {
        let tmp = tempfile::NamedTempFile::new().unwrap();
        let c = load_training_corpus(tmp.path(), CorpusFormat::Plain).unwrap();
        assert_eq!(c.token_count, 0);
        assert!(c.is_empty());
    }

    #[test]
    fn tagged_format() {
        let tmp = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(tmp.path(), "The_DT dog_NN runs_VBZ\nwell_RB\n").unwrap();
        let c = load_training_corpus(tmp.path(), CorpusFormat::Tagged).unwrap();
        assert_eq!(c.token_count, 4);
        let first = c.tagged().next().map(|(t, g)| (t.to_vec(), g.to_vec())).unwrap();
        assert_eq!(first.0, ["the", "dog", "runs"]);
        assert_eq!(first.1, ["DT", "NN", "VBZ"]);
    }

    #[test]
    fn tagged_item_without_tag_is_rejected() {
        let tmp = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(tmp.path(), "the_DT dog\n").unwrap();
        assert!(load_training_corpus(tmp.path(), CorpusFormat::Tagged).is_err());
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_training_corpus(Path::new("/nonexistent/x.txt"), CorpusFormat::Plain);
        assert!(matches!(err, Err(Error::Io { .. })));
    }

    #[test]
    fn underscore_inside_token() {
        assert_eq!(split_tagged("a_b_NN"), Some(("a_b".into(), "NN".into())));
        assert_eq!(split_tagged("ab"), None);
    }
}
