//! LI-Adger sentence types and lexically matched minimal pairs.
//!
//! Input is a directory of `*.tsv` / `*.csv` judgment tables. Each table has
//! a header naming (case-insensitively) a sentence-id column (`sentence_id`,
//! `id`, `item` or `code`), a sentence column (`sentence` or `text`), a
//! z-score column (`z`, `zscore`, `z_score`, `me_z` or `mean_z`) and an
//! optional `phenomenon` column.
//!
//! Sentence ids follow `<type prefix>.<condition>.<lexicalization>`, e.g.
//! `32.3.Culicover.7a.g.01`, where the condition is `g` (grammatical) or `*`.
//! When no phenomenon is given, it is derived from the type prefix with any
//! trailing condition letter removed (`32.3.Culicover.7a` -> `32.3.Culicover.7`).
//! A `phenomena.tsv` file (`type_id<TAB>phenomenon`, no header) overrides the
//! derivation; multi-condition sets whose ids do not share a prefix need it.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{list_files, read_to_string, Ingested, MinimalPair, Source};
use crate::error::{Error, Result};
use crate::text::Sentence;

/// Sentences per sentence type.
pub const LEXICALIZATIONS: usize = 8;

const PHENOMENA_FILE: &str = "phenomena.tsv";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    Grammatical,
    Star,
}

impl Condition {
    fn parse(label: &str) -> Option<Self> {
        let lower = label.to_ascii_lowercase();
        if lower == "g" || lower == "ok" {
            Some(Condition::Grammatical)
        } else if label.starts_with('*') {
            Some(Condition::Star)
        } else {
            None
        }
    }
}

/// One condition: eight lexicalizations of a syntactic frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceType {
    pub type_id: String,
    pub phenomenon: String,
    pub condition: Condition,
    pub sentences: Vec<Sentence>,
    /// Averaged human magnitude-estimation z-score, parallel to `sentences`.
    pub human_z: Vec<f64>,
}

impl SentenceType {
    /// Lexicalization index (the last id component) of sentence `i`.
    pub fn lexicalization(&self, i: usize) -> &str {
        let id = &self.sentences[i].id;
        id.rsplit('.').next().unwrap_or(id)
    }
}

struct ParsedId<'a> {
    type_id: &'a str,
    prefix: &'a str,
    condition: Condition,
}

fn parse_sentence_id(id: &str) -> Option<ParsedId<'_>> {
    let (type_id, _lex) = id.rsplit_once('.')?;
    let (prefix, label) = type_id.rsplit_once('.')?;
    Some(ParsedId {
        type_id,
        prefix,
        condition: Condition::parse(label)?,
    })
}

fn derive_phenomenon(prefix: &str) -> String {
    match prefix.rsplit_once('.') {
        Some((head, last)) => {
            let trimmed = last.trim_end_matches(|c: char| c.is_ascii_alphabetic());
            if !trimmed.is_empty() && trimmed.len() < last.len() {
                format!("{head}.{trimmed}")
            } else {
                prefix.to_string()
            }
        }
        None => prefix.to_string(),
    }
}

fn find_column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| {
        let h = h.trim().to_ascii_lowercase();
        names.iter().any(|n| *n == h)
    })
}

fn load_phenomena(dir: &Path) -> Result<HashMap<String, String>> {
    let path = dir.join(PHENOMENA_FILE);
    if !path.exists() {
        return Ok(HashMap::new());
    }
    let mut map = HashMap::new();
    for line in read_to_string(&path)?.lines() {
        if let Some((ty, ph)) = line.split_once('\t') {
            map.insert(ty.trim().to_string(), ph.trim().to_string());
        }
    }
    Ok(map)
}

struct Row {
    id: String,
    sentence: String,
    z: f64,
    phenomenon: Option<String>,
}

fn read_table(path: &Path) -> Result<Vec<Row>> {
    let name = path.display().to_string();
    let delimiter = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("csv") => b',',
        _ => b'\t',
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::schema(&name, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::schema(&name, e.to_string()))?
        .clone();
    let missing = |what: &str| Error::schema(&name, format!("no {what} column in header"));
    let id_col = find_column(&headers, &["sentence_id", "id", "item", "item_id", "code"])
        .ok_or_else(|| missing("sentence id"))?;
    let text_col = find_column(&headers, &["sentence", "text", "item_text"])
        .ok_or_else(|| missing("sentence"))?;
    let z_col = find_column(
        &headers,
        &["z", "zscore", "z_score", "me_z", "me_zscore", "mean_z"],
    )
    .ok_or_else(|| missing("z-score"))?;
    let phen_col = find_column(&headers, &["phenomenon"]);

    let mut rows = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let ingest_err = |message: String| Error::Ingest {
            file: name.clone(),
            record: index,
            message,
        };
        let record = record.map_err(|e| ingest_err(e.to_string()))?;
        let get = |col: usize| record.get(col).map(str::trim).unwrap_or("");
        let id = get(id_col);
        if id.is_empty() {
            continue;
        }
        let z: f64 = get(z_col)
            .parse()
            .map_err(|_| ingest_err(format!("bad z-score {:?}", get(z_col))))?;
        rows.push(Row {
            id: id.to_string(),
            sentence: get(text_col).to_string(),
            z,
            phenomenon: phen_col.map(|c| get(c).to_string()).filter(|p| !p.is_empty()),
        });
    }
    Ok(rows)
}

/// Loads every judgment table under `dir` into sentence types, in order of
/// first appearance.
pub fn load_li_adger(dir: &Path) -> Result<Ingested<SentenceType>> {
    let mut out = Ingested::default();
    let overrides = load_phenomena(dir)?;
    let tables: Vec<_> = list_files(dir, &["tsv", "csv"])?
        .into_iter()
        .filter(|p| p.file_name().and_then(|f| f.to_str()) != Some(PHENOMENA_FILE))
        .collect();
    if tables.is_empty() {
        out.warn(format!("{}: no LI-Adger tables found", dir.display()));
    }

    let mut order: Vec<String> = Vec::new();
    let mut by_type: HashMap<String, SentenceType> = HashMap::new();
    let mut seen_ids: HashSet<String> = HashSet::new();
    for path in tables {
        for (index, row) in read_table(&path)?.into_iter().enumerate() {
            let parsed = parse_sentence_id(&row.id).ok_or_else(|| Error::Ingest {
                file: path.display().to_string(),
                record: index,
                message: format!("cannot parse sentence id {:?}", row.id),
            })?;
            if !seen_ids.insert(row.id.clone()) {
                out.warn(format!("duplicate sentence id {}, later row ignored", row.id));
                continue;
            }
            let type_id = parsed.type_id.to_string();
            let entry = by_type.entry(type_id.clone()).or_insert_with(|| {
                order.push(type_id.clone());
                let phenomenon = overrides
                    .get(&type_id)
                    .cloned()
                    .or_else(|| row.phenomenon.clone())
                    .unwrap_or_else(|| derive_phenomenon(parsed.prefix));
                SentenceType {
                    type_id: type_id.clone(),
                    phenomenon,
                    condition: parsed.condition,
                    sentences: Vec::new(),
                    human_z: Vec::new(),
                }
            });
            entry.sentences.push(Sentence::new(row.id, row.sentence));
            entry.human_z.push(row.z);
        }
    }

    for type_id in order {
        let ty = by_type.remove(&type_id).expect("type recorded in order");
        if ty.sentences.len() != LEXICALIZATIONS {
            return Err(Error::Dataset(format!(
                "sentence type {type_id} has {} lexicalizations, expected {LEXICALIZATIONS}",
                ty.sentences.len()
            )));
        }
        out.items.push(ty);
    }
    Ok(out)
}

/// Pairs every grammatical condition with every starred condition of the same
/// phenomenon, matching sentences by lexicalization index.
///
/// Identical pairs (same ids, or same good/bad token sequences) are kept once.
pub fn build_li_adger_pairs(types: &[SentenceType]) -> Ingested<MinimalPair> {
    let mut out = Ingested::default();
    let mut phenomena: BTreeMap<&str, (usize, Vec<&SentenceType>)> = BTreeMap::new();
    for (i, ty) in types.iter().enumerate() {
        phenomena
            .entry(ty.phenomenon.as_str())
            .or_insert_with(|| (i, Vec::new()))
            .1
            .push(ty);
    }
    let mut groups: Vec<_> = phenomena.into_iter().collect();
    groups.sort_by_key(|(_, (first, _))| *first);

    let mut seen_ids = HashSet::new();
    let mut seen_text = HashSet::new();
    for (phenomenon, (_, members)) in groups {
        let good_types: Vec<_> = members
            .iter()
            .filter(|t| t.condition == Condition::Grammatical)
            .collect();
        let star_types: Vec<_> = members
            .iter()
            .filter(|t| t.condition == Condition::Star)
            .collect();
        if star_types.is_empty() || good_types.is_empty() {
            out.warn(format!(
                "phenomenon {phenomenon}: no {} condition, no pairs built",
                if star_types.is_empty() { "starred" } else { "grammatical" }
            ));
            continue;
        }
        for good_ty in &good_types {
            for star_ty in &star_types {
                for gi in 0..good_ty.sentences.len() {
                    let lex = good_ty.lexicalization(gi);
                    let Some(si) = (0..star_ty.sentences.len())
                        .find(|&si| star_ty.lexicalization(si) == lex)
                    else {
                        continue;
                    };
                    let good = &good_ty.sentences[gi];
                    let bad = &star_ty.sentences[si];
                    if good.tokens == bad.tokens {
                        continue;
                    }
                    if !seen_ids.insert((good.id.clone(), bad.id.clone()))
                        || !seen_text.insert((good.tokens.clone(), bad.tokens.clone()))
                    {
                        continue;
                    }
                    out.items.push(MinimalPair {
                        id: format!("{}|{}", good.id, bad.id),
                        paradigm: phenomenon.to_string(),
                        phenomenon: phenomenon.to_string(),
                        good: good.clone(),
                        bad: bad.clone(),
                        source: Source::LiAdger,
                    });
                }
            }
        }
    }
    out
}
