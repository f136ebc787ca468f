//! Tab-separated interchange files.
//!
//! Pair files carry `pair_id, source, phenomenon, paradigm, good_sentence,
//! bad_sentence`. Sentence ids are implied by the pair id: `a|b` names the
//! good and bad sentence directly (LI-Adger), any other id `p` expands to
//! `p.good` and `p.bad`.
//!
//! Sentence files carry `sentence_id, sentence` and an optional `tags`
//! column of space-separated tags.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use super::{MinimalPair, Source};
use crate::error::{Error, Result};
use crate::text::Sentence;

pub const PAIRS_HEADER: [&str; 6] = [
    "pair_id",
    "source",
    "phenomenon",
    "paradigm",
    "good_sentence",
    "bad_sentence",
];

pub const SENTENCES_HEADER: [&str; 2] = ["sentence_id", "sentence"];

fn clean(field: &str) -> String {
    field.replace(['\t', '\n', '\r'], " ")
}

fn sentence_ids(pair_id: &str) -> (String, String) {
    match pair_id.split_once('|') {
        Some((g, b)) => (g.to_string(), b.to_string()),
        None => (format!("{pair_id}.good"), format!("{pair_id}.bad")),
    }
}

pub fn write_pairs_tsv<W: Write>(out: W, pairs: &[MinimalPair]) -> Result<()> {
    let mut w = tsv_writer(out);
    let io = |e: csv::Error| Error::Usage(format!("writing pairs: {e}"));
    w.write_record(PAIRS_HEADER).map_err(io)?;
    for p in pairs {
        w.write_record([
            clean(&p.id),
            p.source.to_string(),
            clean(&p.phenomenon),
            clean(&p.paradigm),
            clean(&p.good.raw),
            clean(&p.bad.raw),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Usage(format!("writing pairs: {e}")))
}

pub fn read_pairs_tsv(path: &Path) -> Result<Vec<MinimalPair>> {
    let name = path.display().to_string();
    let mut reader = tsv_reader(path)?;
    let headers = reader
        .headers()
        .map_err(|e| Error::schema(&name, e.to_string()))?;
    if headers.iter().collect::<Vec<_>>() != PAIRS_HEADER {
        return Err(Error::schema(
            &name,
            format!("expected header {:?}", PAIRS_HEADER.join("\t")),
        ));
    }
    let mut pairs = Vec::new();
    for (index, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::schema(&name, format!("row {index}: {e}")))?;
        if rec.len() != PAIRS_HEADER.len() {
            return Err(Error::schema(&name, format!("row {index}: wrong column count")));
        }
        let (good_id, bad_id) = sentence_ids(&rec[0]);
        pairs.push(MinimalPair {
            id: rec[0].to_string(),
            source: rec[1].parse().map_err(|_| {
                Error::schema(&name, format!("row {index}: unknown source {:?}", &rec[1]))
            })?,
            phenomenon: rec[2].to_string(),
            paradigm: rec[3].to_string(),
            good: Sentence::new(good_id, &rec[4]),
            bad: Sentence::new(bad_id, &rec[5]),
        });
    }
    Ok(pairs)
}

/// Unique sentences of `pairs` (good before bad, first occurrence wins).
pub fn sentences_of_pairs(pairs: &[MinimalPair]) -> Vec<Sentence> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in pairs {
        for s in [&p.good, &p.bad] {
            if seen.insert(s.id.clone()) {
                out.push(s.clone());
            }
        }
    }
    out
}

pub fn write_sentences_tsv<W: Write>(out: W, sentences: &[Sentence]) -> Result<()> {
    let mut w = tsv_writer(out);
    let io = |e: csv::Error| Error::Usage(format!("writing sentences: {e}"));
    let tagged = !sentences.is_empty() && sentences.iter().all(|s| s.tags.is_some());
    if tagged {
        w.write_record(["sentence_id", "sentence", "tags"]).map_err(io)?;
    } else {
        w.write_record(SENTENCES_HEADER).map_err(io)?;
    }
    for s in sentences {
        let mut row = vec![clean(&s.id), clean(&s.raw)];
        if tagged {
            row.push(s.tags.as_ref().map(|t| t.join(" ")).unwrap_or_default());
        }
        w.write_record(row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Usage(format!("writing sentences: {e}")))
}

/// Reads a sentence file, or expands a pair file into its sentences.
pub fn read_sentences_tsv(path: &Path) -> Result<Vec<Sentence>> {
    let name = path.display().to_string();
    let mut reader = tsv_reader(path)?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::schema(&name, e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    if headers == PAIRS_HEADER {
        drop(reader);
        return Ok(sentences_of_pairs(&read_pairs_tsv(path)?));
    }
    let tagged = match headers.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        ["sentence_id", "sentence"] => false,
        ["sentence_id", "sentence", "tags"] => true,
        _ => {
            return Err(Error::schema(
                &name,
                "expected header sentence_id<TAB>sentence[<TAB>tags]",
            ))
        }
    };
    let mut out = Vec::new();
    for (index, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::schema(&name, format!("row {index}: {e}")))?;
        let mut s = Sentence::new(&rec[0], &rec[1]);
        if tagged {
            let tags: Vec<String> = rec
                .get(2)
                .unwrap_or("")
                .split_whitespace()
                .map(String::from)
                .collect();
            if tags.len() != s.tokens.len() {
                return Err(Error::schema(
                    &name,
                    format!("row {index}: {} tags for {} tokens", tags.len(), s.tokens.len()),
                ));
            }
            s.tags = Some(tags);
        }
        out.push(s);
    }
    Ok(out)
}

fn tsv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(b'\t')
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(out)
}

pub(crate) fn tsv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::schema(path.display().to_string(), format!("{other:?}")),
        })
}

impl MinimalPair {
    pub fn new(
        id: impl Into<String>,
        source: Source,
        phenomenon: impl Into<String>,
        paradigm: impl Into<String>,
        good: &str,
        bad: &str,
    ) -> Self {
        let id = id.into();
        let (good_id, bad_id) = sentence_ids(&id);
        MinimalPair {
            good: Sentence::new(good_id, good),
            bad: Sentence::new(bad_id, bad),
            id,
            source,
            phenomenon: phenomenon.into(),
            paradigm: paradigm.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_roundtrip() {
        let pairs = vec![
            MinimalPair::new("zorro.p.0", Source::Zorro, "ph", "ph-p", "a b .", "b a ."),
            MinimalPair::new("x.g.01|x.*.01", Source::LiAdger, "x", "x", "John left.", "John left left."),
        ];
        let tmp = tempfile::NamedTempFile::new().unwrap();
        write_pairs_tsv(std::fs::File::create(tmp.path()).unwrap(), &pairs).unwrap();
        let back = read_pairs_tsv(tmp.path()).unwrap();
        assert_eq!(back, pairs);
        assert_eq!(back[1].good.id, "x.g.01");
        assert_eq!(back[1].bad.id, "x.*.01");
    }

    #[test]
    fn header_mismatch_is_schema_error() {
        let tmp = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(tmp.path(), "id\tgood\tbad\n").unwrap();
        assert!(matches!(read_pairs_tsv(tmp.path()), Err(Error::Schema { .. })));
    }

    #[test]
    fn pair_file_expands_to_sentences() {
        let pairs = vec![MinimalPair::new("p", Source::Blimp, "a", "b", "x y", "y x")];
        let tmp = tempfile::NamedTempFile::new().unwrap();
        write_pairs_tsv(std::fs::File::create(tmp.path()).unwrap(), &pairs).unwrap();
        let sents = read_sentences_tsv(tmp.path()).unwrap();
        let ids: Vec<_> = sents.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["p.good", "p.bad"]);
    }

    #[test]
    fn tagged_sentences_roundtrip() {
        let s = vec![Sentence::new("s1", "the dog runs").with_tags(vec!["DT".into(), "NN".into(), "VBZ".into()])];
        let tmp = tempfile::NamedTempFile::new().unwrap();
        write_sentences_tsv(std::fs::File::create(tmp.path()).unwrap(), &s).unwrap();
        assert_eq!(read_sentences_tsv(tmp.path()).unwrap(), s);
    }
}
