//! The score-file interchange format shared by every scorer.
//!
//! UTF-8, tab-separated, with the header `sentence_id scorer_id score log_base`.
//! `log_base` is `e`, `2` or `10` for log-probability-like scores and `none`
//! for unitless scores such as human z-scores. Scores must be finite and each
//! `(sentence_id, scorer_id)` may appear once.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEADER: [&str; 4] = ["sentence_id", "scorer_id", "score", "log_base"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    E,
    Two,
    Ten,
    None,
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::E => "e",
            LogBase::Two => "2",
            LogBase::Ten => "10",
            LogBase::None => "none",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            "10" => Ok(LogBase::Ten),
            "none" => Ok(LogBase::None),
            other => Err(Error::Config(format!("unknown log base {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub sentence_id: String,
    pub scorer_id: String,
    pub score: f64,
    pub log_base: LogBase,
}

/// Writes records in the given order. Scores use Rust's shortest
/// round-trip float formatting.
pub fn write_scores<W: Write>(mut out: W, records: &[ScoreRecord]) -> Result<()> {
    let io = |e: std::io::Error| Error::Usage(format!("writing scores: {e}"));
    writeln!(out, "{}", HEADER.join("\t")).map_err(io)?;
    for r in records {
        if !r.score.is_finite() {
            return Err(Error::Usage(format!(
                "non-finite score for {} / {}",
                r.sentence_id, r.scorer_id
            )));
        }
        writeln!(
            out,
            "{}\t{}\t{:?}\t{}",
            r.sentence_id, r.scorer_id, r.score, r.log_base
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Parses and validates a score file held in memory.
pub fn parse_scores(name: &str, text: &str) -> Result<Vec<ScoreRecord>> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    if header.split('\t').collect::<Vec<_>>() != HEADER {
        return Err(Error::schema(
            name,
            format!("expected header {:?}, got {header:?}", HEADER.join("\t")),
        ));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let row = i + 2;
        let cols: Vec<&str> = line.split('\t').collect();
        let [sentence_id, scorer_id, score, base] = cols[..] else {
            return Err(Error::schema(name, format!("line {row}: expected 4 columns")));
        };
        if sentence_id.is_empty() || scorer_id.is_empty() {
            return Err(Error::schema(name, format!("line {row}: empty id")));
        }
        let score: f64 = score
            .parse()
            .map_err(|_| Error::schema(name, format!("line {row}: bad score {score:?}")))?;
        if !score.is_finite() {
            return Err(Error::schema(name, format!("line {row}: non-finite score")));
        }
        let log_base = base
            .parse()
            .map_err(|_| Error::schema(name, format!("line {row}: bad log_base {base:?}")))?;
        if !seen.insert((sentence_id.to_string(), scorer_id.to_string())) {
            return Err(Error::schema(
                name,
                format!("line {row}: duplicate score for {sentence_id} / {scorer_id}"),
            ));
        }
        out.push(ScoreRecord {
            sentence_id: sentence_id.to_string(),
            scorer_id: scorer_id.to_string(),
            score,
            log_base,
        });
    }
    Ok(out)
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scores(&path.display().to_string(), &text)
}

/// Scores of one scorer keyed by sentence id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    pub scorer_id: String,
    pub log_base: Option<LogBase>,
    pub scores: HashMap<String, f64>,
}

impl ScoreTable {
    pub fn new(scorer_id: impl Into<String>) -> Self {
        ScoreTable {
            scorer_id: scorer_id.into(),
            ..Default::default()
        }
    }

    pub fn get(&self, sentence_id: &str) -> Option<f64> {
        self.scores.get(sentence_id).copied()
    }

    pub fn insert(&mut self, sentence_id: impl Into<String>, score: f64) {
        self.scores.insert(sentence_id.into(), score);
    }
}

/// Groups records by scorer, keeping scorers sorted by id.
pub fn group_by_scorer(records: Vec<ScoreRecord>) -> BTreeMap<String, ScoreTable> {
    let mut out: BTreeMap<String, ScoreTable> = BTreeMap::new();
    for r in records {
        let table = out
            .entry(r.scorer_id.clone())
            .or_insert_with(|| ScoreTable::new(r.scorer_id.clone()));
        table.log_base.get_or_insert(r.log_base);
        table.scores.insert(r.sentence_id, r.score);
    }
    out
}
