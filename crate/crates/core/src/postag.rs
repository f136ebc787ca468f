//! Averaged-perceptron part-of-speech tagger.
//!
//! Greedy left-to-right decoding over contextual and orthographic features,
//! with weights averaged over every training instance. The tagset is
//! whatever the training corpus uses.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Sentence;

pub const MODEL_HEADER: &str = "mpaudit-tagger 1";
pub const DEFAULT_SEED: u64 = 0x5eed;

const START: [&str; 2] = ["-START-", "-START2-"];
const END: [&str; 2] = ["-END-", "-END2-"];

/// Words seen at least this often with one dominant tag skip the perceptron.
const TAGDICT_MIN_FREQ: usize = 20;
const TAGDICT_MIN_SHARE: f64 = 0.97;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub seed: u64,
    /// Fraction of sentences held out for the accuracy report.
    pub heldout_fraction: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 5,
            seed: DEFAULT_SEED,
            heldout_fraction: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub train_sentences: usize,
    pub heldout_sentences: usize,
    /// Token accuracy on the held-out split, `None` when it is empty.
    pub heldout_accuracy: Option<f64>,
    pub seed: u64,
    pub epochs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TagModel {
    tagset: Vec<String>,
    weights: HashMap<String, Vec<f64>>,
    tagdict: HashMap<String, usize>,
    pub version: String,
}

#[derive(Default, Clone, Copy)]
struct Accum {
    weight: f64,
    total: f64,
    stamp: usize,
}

struct Trainer {
    ntags: usize,
    weights: HashMap<String, Vec<Accum>>,
    instances: usize,
}

impl Trainer {
    fn scores(&self, features: &[String]) -> Vec<f64> {
        let mut scores = vec![0.0; self.ntags];
        for f in features {
            if let Some(ws) = self.weights.get(f) {
                for (s, w) in scores.iter_mut().zip(ws) {
                    *s += w.weight;
                }
            }
        }
        scores
    }

    fn update(&mut self, truth: usize, guess: usize, features: &[String]) {
        self.instances += 1;
        if truth == guess {
            return;
        }
        let now = self.instances;
        let ntags = self.ntags;
        for f in features {
            let ws = self
                .weights
                .entry(f.clone())
                .or_insert_with(|| vec![Accum::default(); ntags]);
            for (tag, delta) in [(truth, 1.0), (guess, -1.0)] {
                let a = &mut ws[tag];
                a.total += (now - a.stamp) as f64 * a.weight;
                a.stamp = now;
                a.weight += delta;
            }
        }
    }

    fn averaged(self) -> HashMap<String, Vec<f64>> {
        let n = self.instances.max(1) as f64;
        self.weights
            .into_iter()
            .filter_map(|(f, ws)| {
                let avg: Vec<f64> = ws
                    .iter()
                    .map(|a| (a.total + (self.instances - a.stamp) as f64 * a.weight) / n)
                    .collect();
                avg.iter().any(|w| *w != 0.0).then_some((f, avg))
            })
            .collect()
    }
}

fn normalize(word: &str) -> String {
    if word.contains('-') && !word.starts_with('-') {
        "!HYPHEN".into()
    } else if word.len() == 4 && word.chars().all(|c| c.is_ascii_digit()) {
        "!YEAR".into()
    } else if word.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        "!DIGITS".into()
    } else {
        word.to_lowercase()
    }
}

fn suffix(word: &str, n: usize) -> &str {
    let start = word
        .char_indices()
        .rev()
        .nth(n.saturating_sub(1))
        .map_or(0, |(i, _)| i);
    &word[start..]
}

fn shape(word: &str) -> String {
    let mut out = String::new();
    for c in word.chars() {
        let k = if c.is_uppercase() {
            'X'
        } else if c.is_alphabetic() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if !out.ends_with(k) {
            out.push(k);
        }
    }
    out
}

/// Feature strings for position `i` of the padded context.
fn features(i: usize, word: &str, context: &[String], prev: &str, prev2: &str) -> Vec<String> {
    // context is padded with two start symbols, so word i lives at i + 2.
    let i = i + 2;
    let first = word.chars().next().map(String::from).unwrap_or_default();
    vec![
        "bias".to_string(),
        format!("i suffix {}", suffix(word, 3)),
        format!("i suffix2 {}", suffix(word, 2)),
        format!("i pref1 {first}"),
        format!("i shape {}", shape(word)),
        format!("i-1 tag {prev}"),
        format!("i-2 tag {prev2}"),
        format!("i tag+i-2 tag {prev} {prev2}"),
        format!("i word {}", context[i]),
        format!("i-1 tag+i word {prev} {}", context[i]),
        format!("i-1 word {}", context[i - 1]),
        format!("i-1 suffix {}", suffix(&context[i - 1], 3)),
        format!("i-2 word {}", context[i - 2]),
        format!("i+1 word {}", context[i + 1]),
        format!("i+1 suffix {}", suffix(&context[i + 1], 3)),
        format!("i+2 word {}", context[i + 2]),
    ]
}

fn padded_context(tokens: &[String]) -> Vec<String> {
    let mut ctx: Vec<String> = START.iter().map(|s| s.to_string()).collect();
    ctx.extend(tokens.iter().map(|w| normalize(w)));
    ctx.extend(END.iter().map(|s| s.to_string()));
    ctx
}

fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if *s > scores[best] {
            best = i;
        }
    }
    best
}

fn build_tagdict(
    sentences: &[(&[String], &[String])],
    tag_index: &HashMap<&str, usize>,
) -> HashMap<String, usize> {
    let mut counts: HashMap<&str, BTreeMap<usize, usize>> = HashMap::new();
    for (toks, tags) in sentences {
        for (w, t) in toks.iter().zip(tags.iter()) {
            *counts.entry(w).or_default().entry(tag_index[t.as_str()]).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .filter_map(|(w, tags)| {
            let n: usize = tags.values().sum();
            let (tag, top) = tags.iter().max_by_key(|(t, c)| (**c, std::cmp::Reverse(**t)))?;
            (n >= TAGDICT_MIN_FREQ && *top as f64 / n as f64 >= TAGDICT_MIN_SHARE)
                .then(|| (w.to_string(), *tag))
        })
        .collect()
}

/// Trains a tagger on `(tokens, tags)` sentences.
///
/// Sentence order is shuffled with `config.seed` once to pick the held-out
/// split and again before every epoch, so a fixed seed and input order give
/// an identical model.
pub fn train_tagger<'a, I>(corpus: I, config: &TrainConfig) -> Result<(TagModel, TrainReport)>
where
    I: IntoIterator<Item = (&'a [String], &'a [String])>,
{
    if config.epochs == 0 {
        return Err(Error::Training("epochs must be at least 1".into()));
    }
    let mut data: Vec<(&[String], &[String])> = Vec::new();
    for (i, (toks, tags)) in corpus.into_iter().enumerate() {
        if toks.len() != tags.len() {
            return Err(Error::Training(format!(
                "sentence {i} ({:?}): {} tokens but {} tags",
                toks.join(" "),
                toks.len(),
                tags.len()
            )));
        }
        if !toks.is_empty() {
            data.push((toks, tags));
        }
    }
    if data.is_empty() {
        return Err(Error::Training("no training data".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);
    let n_heldout = (data.len() as f64 * config.heldout_fraction).floor() as usize;
    let n_heldout = n_heldout.min(data.len() - 1);
    let (heldout_idx, train_idx) = order.split_at(n_heldout);
    let mut train: Vec<(&[String], &[String])> = train_idx.iter().map(|&i| data[i]).collect();
    let heldout: Vec<(&[String], &[String])> = heldout_idx.iter().map(|&i| data[i]).collect();

    let mut tagset: Vec<String> = data
        .iter()
        .flat_map(|(_, tags)| tags.iter().cloned())
        .collect();
    tagset.sort();
    tagset.dedup();
    let tag_index: HashMap<&str, usize> = tagset
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let tagdict = build_tagdict(&train, &tag_index);

    let mut trainer = Trainer {
        ntags: tagset.len(),
        weights: HashMap::new(),
        instances: 0,
    };
    for _ in 0..config.epochs {
        for (toks, tags) in &train {
            let context = padded_context(toks);
            let (mut prev, mut prev2) = (START[0].to_string(), START[1].to_string());
            for (i, (w, gold)) in toks.iter().zip(tags.iter()).enumerate() {
                let guess = match tagdict.get(w.as_str()) {
                    Some(&t) => t,
                    None => {
                        let feats = features(i, w, &context, &prev, &prev2);
                        let guess = argmax(&trainer.scores(&feats));
                        trainer.update(tag_index[gold.as_str()], guess, &feats);
                        guess
                    }
                };
                prev2 = std::mem::replace(&mut prev, tagset[guess].clone());
            }
        }
        train.shuffle(&mut rng);
    }

    let model = TagModel {
        weights: trainer.averaged(),
        tagset,
        tagdict,
        version: MODEL_HEADER.to_string(),
    };
    let heldout_accuracy = (!heldout.is_empty()).then(|| model.accuracy(heldout.iter().copied()));
    let report = TrainReport {
        train_sentences: train.len(),
        heldout_sentences: heldout.len(),
        heldout_accuracy,
        seed: config.seed,
        epochs: config.epochs,
    };
    Ok((model, report))
}

impl TagModel {
    pub fn tagset(&self) -> &[String] {
        &self.tagset
    }

    /// One tag per token; unknown words fall back on orthographic features.
    pub fn tag_tokens(&self, tokens: &[String]) -> Vec<String> {
        let context = padded_context(tokens);
        let (mut prev, mut prev2) = (START[0].to_string(), START[1].to_string());
        let mut out = Vec::with_capacity(tokens.len());
        for (i, w) in tokens.iter().enumerate() {
            let tag = match self.tagdict.get(w.as_str()) {
                Some(&t) => t,
                None => {
                    let mut scores = vec![0.0; self.tagset.len()];
                    for f in features(i, w, &context, &prev, &prev2) {
                        if let Some(ws) = self.weights.get(&f) {
                            for (s, w) in scores.iter_mut().zip(ws) {
                                *s += w;
                            }
                        }
                    }
                    argmax(&scores)
                }
            };
            let tag = self.tagset[tag].clone();
            prev2 = std::mem::replace(&mut prev, tag.clone());
            out.push(tag);
        }
        out
    }

    pub fn tag(&self, sentence: &Sentence) -> Sentence {
        let mut s = sentence.clone();
        s.tags = Some(self.tag_tokens(&s.tokens));
        s
    }

    /// Token-level accuracy against gold tags, in `[0, 1]`.
    pub fn accuracy<'a>(&self, gold: impl IntoIterator<Item = (&'a [String], &'a [String])>) -> f64 {
        let (mut right, mut total) = (0usize, 0usize);
        for (toks, tags) in gold {
            for (p, g) in self.tag_tokens(toks).iter().zip(tags) {
                right += usize::from(p == g);
                total += 1;
            }
        }
        if total == 0 {
            0.0
        } else {
            right as f64 / total as f64
        }
    }

    /// Plain-text weight dump, sorted so that equal models serialize equally.
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{MODEL_HEADER}")?;
        writeln!(out, "tags\t{}", self.tagset.join("\t"))?;
        let mut dict: Vec<_> = self.tagdict.iter().collect();
        dict.sort();
        for (w, t) in dict {
            writeln!(out, "dict\t{w}\t{}", self.tagset[*t])?;
        }
        let mut feats: Vec<_> = self.weights.iter().collect();
        feats.sort_by(|a, b| a.0.cmp(b.0));
        for (f, ws) in feats {
            let mut line = format!("w\t{f}");
            for (i, w) in ws.iter().enumerate() {
                if *w != 0.0 {
                    let _ = write!(line, "\t{i}:{w:?}");
                }
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<TagModel> {
        let bad = |m: String| Error::schema("tagger model", m);
        let mut lines = input.lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| bad(e.to_string()))?
            .unwrap_or_default();
        if header != MODEL_HEADER {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let mut tagset: Vec<String> = Vec::new();
        let mut tagdict = HashMap::new();
        let mut weights = HashMap::new();
        for line in lines {
            let line = line.map_err(|e| bad(e.to_string()))?;
            let mut parts = line.split('\t');
            match parts.next() {
                Some("tags") => tagset = parts.map(String::from).collect(),
                Some("dict") => {
                    let (w, t) = (parts.next(), parts.next());
                    let (Some(w), Some(t)) = (w, t) else {
                        return Err(bad(format!("bad dict line {line:?}")));
                    };
                    let idx = tagset
                        .iter()
                        .position(|x| x == t)
                        .ok_or_else(|| bad(format!("unknown tag {t:?}")))?;
                    tagdict.insert(w.to_string(), idx);
                }
                Some("w") => {
                    let f = parts.next().ok_or_else(|| bad("missing feature".into()))?;
                    let mut ws = vec![0.0; tagset.len()];
                    for cell in parts {
                        let (i, w) = cell
                            .split_once(':')
                            .ok_or_else(|| bad(format!("bad weight {cell:?}")))?;
                        let i: usize = i.parse().map_err(|_| bad(format!("bad index {i:?}")))?;
                        *ws.get_mut(i).ok_or_else(|| bad(format!("index {i} out of range")))? =
                            w.parse().map_err(|_| bad(format!("bad weight {w:?}")))?;
                    }
                    weights.insert(f.to_string(), ws);
                }
                Some("") | None => {}
                Some(other) => return Err(bad(format!("unknown record {other:?}"))),
            }
        }
        if tagset.is_empty() {
            return Err(bad("empty tagset".into()));
        }
        Ok(TagModel {
            tagset,
            weights,
            tagdict,
            version: MODEL_HEADER.to_string(),
        })
    }
}

/// Accuracy of always predicting the corpus-wide most frequent tag.
pub fn majority_baseline<'a>(gold: impl IntoIterator<Item = (&'a [String], &'a [String])> + Clone) -> f64 {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    let mut total = 0;
    for (_, tags) in gold {
        for t in tags {
            *counts.entry(t).or_default() += 1;
            total += 1;
        }
    }
    let top = counts.values().max().copied().unwrap_or(0);
    if total == 0 {
        0.0
    } else {
        top as f64 / total as f64
    }
}
