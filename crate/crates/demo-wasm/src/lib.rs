//! Browser bindings for three mpaudit operations: applying a surface rule to
//! a minimal pair, comparing two sentences under an n-gram model trained on
//! pasted text, and rendering a correlation TSV as an SVG heatmap.
//!
//! Each export has a plain Rust counterpart returning `Result<String, String>`
//! so the logic is testable off the browser.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use mpaudit::gradient::render_heatmap;
use mpaudit::ngram::{train_ngram, Level, SmoothingConfig};
use mpaudit::rules::{apply_rule, builtin_source, parse_rulepack, sentence_satisfies, RuleBody, RuleVerdict};
use mpaudit::{MinimalPair, Sentence, Source, TrainingCorpus};

const MAX_ORDER: u32 = 6;

#[derive(Serialize)]
struct RuleResult<'a> {
    paradigm: &'a str,
    verdict: &'static str,
    /// Per-sentence rules only: whether each sentence satisfies the predicate.
    good_holds: Option<bool>,
    bad_holds: Option<bool>,
}

fn verdict_name(v: RuleVerdict) -> &'static str {
    match v {
        RuleVerdict::ChooseGood => "choose_good",
        RuleVerdict::ChooseBad => "choose_bad",
        RuleVerdict::Abstain => "abstain",
    }
}

/// `rules` is either `builtin:zorro` / `builtin:blimp` or rulepack text.
/// An empty `paradigm` selects the only rule of a one-rule pack.
pub fn rule_verdict(rules: &str, paradigm: &str, good: &str, bad: &str) -> Result<String, String> {
    let source = match rules.trim().strip_prefix("builtin:") {
        Some(name) => builtin_source(name).ok_or_else(|| format!("unknown builtin rulepack {name:?}"))?,
        None => rules,
    };
    let pack = parse_rulepack(source).map_err(|e| e.to_string())?;
    let rule = if paradigm.trim().is_empty() {
        match pack.rules.as_slice() {
            [only] => only,
            _ => return Err("choose a paradigm".into()),
        }
    } else {
        pack.rule(paradigm.trim())
            .ok_or_else(|| format!("no rule for paradigm {:?}", paradigm.trim()))?
    };
    let pair = MinimalPair::new("demo", Source::Zorro, "demo", &rule.paradigm, good, bad);
    let (good_holds, bad_holds) = match &rule.body {
        RuleBody::PerSentence(p) => (
            Some(sentence_satisfies(p, &pair.good, pack.positions)),
            Some(sentence_satisfies(p, &pair.bad, pack.positions)),
        ),
        RuleBody::Pairwise(_) => (None, None),
    };
    let result = RuleResult {
        paradigm: &rule.paradigm,
        verdict: verdict_name(apply_rule(rule, &pair, pack.positions)),
        good_holds,
        bad_holds,
    };
    Ok(serde_json::to_string(&result).expect("serializable"))
}

/// Paradigm names of a builtin rulepack, as a JSON array.
pub fn builtin_paradigms(name: &str) -> Result<String, String> {
    let source = builtin_source(name).ok_or_else(|| format!("unknown builtin rulepack {name:?}"))?;
    let pack = parse_rulepack(source).map_err(|e| e.to_string())?;
    let names: Vec<&str> = pack.paradigms().collect();
    Ok(serde_json::to_string(&names).expect("serializable"))
}

#[derive(Serialize)]
struct SentenceScore {
    tokens: Vec<String>,
    logprob: f64,
    slor: f64,
}

#[derive(Serialize)]
struct Comparison {
    order: usize,
    vocab_size: usize,
    good: SentenceScore,
    bad: SentenceScore,
    /// By log-probability: `correct`, `incorrect` or `tie`.
    verdict: &'static str,
}

/// Trains a word n-gram model on `corpus` (one utterance per line) and
/// scores both sentences.
pub fn ngram_compare(corpus: &str, order: u32, good: &str, bad: &str) -> Result<String, String> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(format!("order must be between 1 and {MAX_ORDER}"));
    }
    let corpus = TrainingCorpus::from_text("pasted", corpus);
    let model = train_ngram(&corpus, order as usize, Level::Word, SmoothingConfig::default(), None)
        .map_err(|e| e.to_string())?;
    let score = |id: &str, text: &str| -> Result<SentenceScore, String> {
        let s = Sentence::new(id, text);
        Ok(SentenceScore {
            logprob: model.logprob(&s).map_err(|e| e.to_string())?,
            slor: model.slor(&s).map_err(|e| e.to_string())?,
            tokens: s.tokens,
        })
    };
    let good = score("good", good)?;
    let bad = score("bad", bad)?;
    let verdict = if good.logprob > bad.logprob {
        "correct"
    } else if good.logprob < bad.logprob {
        "incorrect"
    } else {
        "tie"
    };
    let out = Comparison {
        order: order as usize,
        vocab_size: model.vocab_size(),
        good,
        bad,
        verdict,
    };
    Ok(serde_json::to_string(&out).expect("serializable"))
}

/// Parses a correlation TSV: a header of column labels after one corner
/// cell, then one row per label. `NA` (or empty) marks undefined cells.
pub fn parse_matrix(tsv: &str) -> Result<(Vec<String>, Vec<Vec<Option<f64>>>), String> {
    let mut lines = tsv.lines().map(str::trim_end).filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty matrix")?;
    let labels: Vec<String> = header.split('\t').skip(1).map(str::to_string).collect();
    let mut cells = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut fields = line.split('\t');
        let label = fields.next().unwrap_or_default();
        if labels.get(i).map(String::as_str) != Some(label) {
            return Err(format!("row {} is labelled {label:?}, expected {:?}", i + 1, labels.get(i)));
        }
        let row = fields
            .map(|f| match f.trim() {
                "" | "NA" | "NaN" => Ok(None),
                v => v.parse::<f64>().map(Some).map_err(|_| format!("bad cell {v:?} in row {label}")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        cells.push(row);
    }
    Ok((labels, cells))
}

pub fn heatmap(tsv: &str, title: &str) -> Result<String, String> {
    let (labels, cells) = parse_matrix(tsv)?;
    render_heatmap(&cells, &labels, title).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = ruleVerdict)]
pub fn rule_verdict_js(rules: &str, paradigm: &str, good: &str, bad: &str) -> Result<String, JsError> {
    js(rule_verdict(rules, paradigm, good, bad))
}

#[wasm_bindgen(js_name = builtinParadigms)]
pub fn builtin_paradigms_js(name: &str) -> Result<String, JsError> {
    js(builtin_paradigms(name))
}

#[wasm_bindgen(js_name = ngramCompare)]
pub fn ngram_compare_js(corpus: &str, order: u32, good: &str, bad: &str) -> Result<String, JsError> {
    js(ngram_compare(corpus, order, good, bad))
}

#[wasm_bindgen(js_name = heatmapSvg)]
pub fn heatmap_js(tsv: &str, title: &str) -> Result<String, JsError> {
    js(heatmap(tsv, title))
}
