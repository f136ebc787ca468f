use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use super::{file_stem, list_files, read_to_string, Ingested, MinimalPair, Source};
use crate::error::{Error, Result};
use crate::text::Sentence;

pub const PAIRS_PER_PARADIGM: usize = 1000;

const GOOD_KEYS: &[&str] = &["sentence_good", "good"];
const BAD_KEYS: &[&str] = &["sentence_bad", "bad"];
const PARADIGM_KEYS: &[&str] = &["UID", "uid", "paradigm"];
const PHENOMENON_KEYS: &[&str] = &["linguistics_term", "phenomenon"];

fn field<'a>(record: &'a Value, keys: &[&str]) -> Option<&'a str> {
    keys.iter().find_map(|k| record.get(*k).and_then(Value::as_str))
}

/// Loads every `*.jsonl` file under `dir`, one JSON object per line.
///
/// Records need good/bad sentence fields; the paradigm falls back to the
/// file stem and the phenomenon to the paradigm when absent.
pub fn load_blimp(dir: &Path) -> Result<Ingested<MinimalPair>> {
    let mut out = Ingested::default();
    let files = list_files(dir, &["jsonl", "json"])?;
    if files.is_empty() {
        out.warn(format!("{}: no BLiMP record files found", dir.display()));
        return Ok(out);
    }
    for path in files {
        let name = path.display().to_string();
        let text = read_to_string(&path)?;
        let stem = file_stem(&path);
        let mut per_paradigm: BTreeMap<String, usize> = BTreeMap::new();
        for (index, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let ingest_err = |message: String| Error::Ingest {
                file: name.clone(),
                record: index,
                message,
            };
            let record: Value =
                serde_json::from_str(line).map_err(|e| ingest_err(format!("invalid JSON: {e}")))?;
            let good = field(&record, GOOD_KEYS)
                .ok_or_else(|| ingest_err("missing field sentence_good".into()))?;
            let bad = field(&record, BAD_KEYS)
                .ok_or_else(|| ingest_err("missing field sentence_bad".into()))?;
            let paradigm = field(&record, PARADIGM_KEYS).unwrap_or(&stem).to_string();
            let phenomenon = field(&record, PHENOMENON_KEYS)
                .unwrap_or(&paradigm)
                .to_string();
            let pair_no = record
                .get("pairID")
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .unwrap_or_else(|| index.to_string());
            let id = format!("blimp.{paradigm}.{pair_no}");
            let good = Sentence::new(format!("{id}.good"), good);
            let bad = Sentence::new(format!("{id}.bad"), bad);
            if good.is_empty() || bad.is_empty() {
                return Err(ingest_err("empty sentence".into()));
            }
            if good.tokens == bad.tokens {
                out.warn(format!("{name}: record {index}: identical sentences, skipped"));
                continue;
            }
            *per_paradigm.entry(paradigm.clone()).or_default() += 1;
            out.items.push(MinimalPair {
                id,
                paradigm,
                phenomenon,
                good,
                bad,
                source: Source::Blimp,
            });
        }
        for (paradigm, n) in per_paradigm {
            if n != PAIRS_PER_PARADIGM {
                out.warn(format!(
                    "{name}: paradigm {paradigm} has {n} pairs, expected {PAIRS_PER_PARADIGM}"
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) {
        std::fs::write(dir.join(name), body).unwrap();
    }

    #[test]
    fn single_record() {
        let tmp = tempfile::tempdir().unwrap();
        write(
            tmp.path(),
            "toy.jsonl",
            r#"{"sentence_good": "the dog runs", "sentence_bad": "the dog run", "UID": "toy", "linguistics_term": "agreement", "pairID": "0"}"#,
        );
        let got = load_blimp(tmp.path()).unwrap();
        assert_eq!(got.items.len(), 1);
        let pair = &got.items[0];
        assert_eq!(pair.good.tokens, ["the", "dog", "runs"]);
        assert_eq!(pair.bad.tokens.len(), 3);
        assert_eq!(pair.paradigm, "toy");
        assert_eq!(pair.phenomenon, "agreement");
        // One pair instead of 1000 is a warning, not a failure.
        assert_eq!(got.warnings.len(), 1);
    }

    #[test]
    fn empty_directory_warns() {
        let tmp = tempfile::tempdir().unwrap();
        let got = load_blimp(tmp.path()).unwrap();
        assert!(got.items.is_empty());
        assert_eq!(got.warnings.len(), 1);
    }

    #[test]
    fn missing_field_names_file_and_record() {
        let tmp = tempfile::tempdir().unwrap();
        write(
            tmp.path(),
            "p.jsonl",
            "{\"sentence_good\": \"a b\", \"sentence_bad\": \"b a\"}\n{\"sentence_good\": \"a b\"}\n",
        );
        let err = load_blimp(tmp.path()).unwrap_err().to_string();
        assert!(err.contains("p.jsonl"), "{err}");
        assert!(err.contains("record 1"), "{err}");
        assert!(err.contains("sentence_bad"), "{err}");
    }

    #[test]
    fn paradigm_defaults_to_file_stem() {
        let tmp = tempfile::tempdir().unwrap();
        write(
            tmp.path(),
            "wh_island.jsonl",
            r#"{"good": "who left ?", "bad": "who left left ?"}"#,
        );
        let got = load_blimp(tmp.path()).unwrap();
        assert_eq!(got.items[0].paradigm, "wh_island");
        assert_eq!(got.items[0].phenomenon, "wh_island");
    }
}
