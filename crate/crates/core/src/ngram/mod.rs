//! Count-based n-gram language models over word or tag streams.
//!
//! Sentences are padded with `order - 1` BOS symbols and terminated by EOS.
//! Two smoothing schemes are available:
//!
//! * `add_k`: `P(w | h) = (c(h w) + k) / (c(h) + k |V|)` at full order.
//! * `stupid_backoff`: relative frequency when `h w` was seen, otherwise
//!   `alpha` times the next-lower order, renormalized per context so that
//!   every conditional distribution sums to one. The recursion bottoms out
//!   in an add-k unigram.
//!
//! All scores are natural logs.

mod serialize;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataio::TrainingCorpus;
use crate::error::{Error, Result};
use crate::postag::TagModel;
use crate::text::Sentence;

pub use serialize::MODEL_HEADER;

pub const UNK: &str = "<unk>";
pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";

const UNK_ID: u32 = 0;
const BOS_ID: u32 = 1;
const EOS_ID: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Word,
    Tag,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Word => "word",
            Level::Tag => "tag",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(Level::Word),
            "tag" => Ok(Level::Tag),
            other => Err(Error::Config(format!("unknown level {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    AddK,
    StupidBackoff,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add_k" => Ok(Scheme::AddK),
            "stupid_backoff" => Ok(Scheme::StupidBackoff),
            other => Err(Error::Config(format!("unknown smoothing scheme {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingConfig {
    pub scheme: Scheme,
    /// Additive constant (add-k, and the unigram floor of backoff).
    pub k: f64,
    /// Backoff discount.
    pub alpha: f64,
    /// Tokens seen at most this often in training become UNK.
    pub unk_threshold: usize,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        SmoothingConfig {
            scheme: Scheme::StupidBackoff,
            k: 1.0,
            alpha: 0.4,
            unk_threshold: 1,
        }
    }
}

impl SmoothingConfig {
    pub fn add_k(k: f64) -> Self {
        SmoothingConfig {
            scheme: Scheme::AddK,
            k,
            alpha: 0.4,
            unk_threshold: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Config(format!("k must be > 0, got {}", self.k)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!(
                "alpha must be in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct Context {
    total: u64,
    next: HashMap<u32, u64>,
    /// Backoff normalizer; 1.0 for add-k.
    norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    order: usize,
    level: Level,
    smoothing: SmoothingConfig,
    vocab: Vec<String>,
    index: HashMap<String, u32>,
    /// `levels[h]` maps histories of length `h` to their continuation counts.
    levels: Vec<HashMap<Vec<u32>, Context>>,
}

/// Trains an n-gram model.
///
/// Tag-level models tag the corpus with `tagger`; they never reuse tags
/// carried by the corpus so that training and benchmark tags come from the
/// same tagger.
pub fn train_ngram(
    corpus: &TrainingCorpus,
    order: usize,
    level: Level,
    smoothing: SmoothingConfig,
    tagger: Option<&TagModel>,
) -> Result<NGramModel> {
    if order == 0 {
        return Err(Error::Config("order must be at least 1".into()));
    }
    smoothing.validate()?;
    if corpus.is_empty() {
        return Err(Error::Training(format!("corpus {:?} is empty", corpus.name)));
    }
    let streams: Vec<Vec<String>> = match level {
        Level::Word => corpus.sentences.clone(),
        Level::Tag => {
            let tagger = tagger.ok_or_else(|| {
                Error::Config("a tag-level model needs a tagger".into())
            })?;
            corpus.sentences.iter().map(|s| tagger.tag_tokens(s)).collect()
        }
    };
    Ok(NGramModel::from_streams(&streams, order, level, smoothing))
}

impl NGramModel {
    fn from_streams(
        streams: &[Vec<String>],
        order: usize,
        level: Level,
        smoothing: SmoothingConfig,
    ) -> Self {
        let mut freq: HashMap<&str, usize> = HashMap::new();
        for s in streams {
            for t in s {
                *freq.entry(t).or_default() += 1;
            }
        }
        let mut words: Vec<&str> = freq
            .iter()
            .filter(|(w, c)| **c > smoothing.unk_threshold && ![UNK, BOS, EOS].contains(*w))
            .map(|(w, _)| *w)
            .collect();
        words.sort_unstable();
        let mut vocab: Vec<String> = vec![UNK.into(), BOS.into(), EOS.into()];
        vocab.extend(words.into_iter().map(String::from));
        let index = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();

        let mut model = NGramModel {
            order,
            level,
            smoothing,
            vocab,
            index,
            levels: vec![HashMap::new(); order],
        };
        for s in streams {
            let padded = model.pad(s.iter().map(String::as_str));
            for i in (order - 1)..padded.len() {
                for h in 0..order {
                    let entry = model.levels[h]
                        .entry(padded[i - h..i].to_vec())
                        .or_default();
                    entry.total += 1;
                    *entry.next.entry(padded[i]).or_default() += 1;
                }
            }
        }
        model.compute_norms();
        model
    }

    fn compute_norms(&mut self) {
        for ctx in self.levels.iter_mut().flat_map(|l| l.values_mut()) {
            ctx.norm = 1.0;
        }
        if self.smoothing.scheme != Scheme::StupidBackoff {
            return;
        }
        let alpha = self.smoothing.alpha;
        for h in 1..self.order {
            let norms: Vec<(Vec<u32>, f64)> = self.levels[h]
                .iter()
                .map(|(ctx, entry)| {
                    // Sorted so the float sum does not depend on hash order.
                    let mut seen: Vec<u32> = entry.next.keys().copied().collect();
                    seen.sort_unstable();
                    let lower: f64 = seen
                        .into_iter()
                        .map(|w| self.backoff_prob(&ctx[1..], w))
                        .sum();
                    (ctx.clone(), 1.0 + alpha * (1.0 - lower))
                })
                .collect();
            for (ctx, z) in norms {
                self.levels[h].get_mut(&ctx).expect("context present").norm = z;
            }
        }
    }

    fn pad<'a>(&self, tokens: impl Iterator<Item = &'a str>) -> Vec<u32> {
        let mut ids = vec![BOS_ID; self.order - 1];
        ids.extend(tokens.map(|t| self.id(t)));
        ids.push(EOS_ID);
        ids
    }

    fn id(&self, token: &str) -> u32 {
        self.index.get(token).copied().unwrap_or(UNK_ID)
    }

    /// Size of the predictable vocabulary (everything except BOS).
    fn predictable(&self) -> f64 {
        (self.vocab.len() - 1) as f64
    }

    fn unigram_prob(&self, w: u32) -> f64 {
        let root = self.levels[0].get(&Vec::new());
        let (count, total) = root.map_or((0, 0), |r| (r.next.get(&w).copied().unwrap_or(0), r.total));
        let k = self.smoothing.k;
        (count as f64 + k) / (total as f64 + k * self.predictable())
    }

    fn backoff_prob(&self, ctx: &[u32], w: u32) -> f64 {
        if ctx.is_empty() {
            return self.unigram_prob(w);
        }
        match self.levels[ctx.len()].get(ctx) {
            None => self.backoff_prob(&ctx[1..], w),
            Some(entry) => match entry.next.get(&w) {
                Some(&c) => c as f64 / entry.total as f64 / entry.norm,
                None => self.smoothing.alpha * self.backoff_prob(&ctx[1..], w) / entry.norm,
            },
        }
    }

    fn add_k_prob(&self, ctx: &[u32], w: u32) -> f64 {
        let k = self.smoothing.k;
        let (count, total) = self.levels[ctx.len()]
            .get(ctx)
            .map_or((0, 0), |e| (e.next.get(&w).copied().unwrap_or(0), e.total));
        (count as f64 + k) / (total as f64 + k * self.predictable())
    }

    fn prob_ids(&self, ctx: &[u32], w: u32) -> f64 {
        match self.smoothing.scheme {
            Scheme::AddK => self.add_k_prob(ctx, w),
            Scheme::StupidBackoff => self.backoff_prob(ctx, w),
        }
    }

    /// `P(token | context)`, with the context truncated to `order - 1` tokens
    /// and left-padded with BOS.
    pub fn conditional_prob(&self, context: &[&str], token: &str) -> f64 {
        let h = self.order - 1;
        let mut ids: Vec<u32> = context.iter().map(|t| self.id(t)).collect();
        if ids.len() > h {
            ids.drain(..ids.len() - h);
        }
        while ids.len() < h {
            ids.insert(0, BOS_ID);
        }
        self.prob_ids(&ids, self.id(token))
    }

    /// Every token the model can predict (vocabulary plus UNK and EOS).
    pub fn predictable_tokens(&self) -> impl Iterator<Item = &str> {
        self.vocab
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u32 != BOS_ID)
            .map(|(_, w)| w.as_str())
    }

    /// Histories observed in training, `(length, tokens)`.
    pub fn observed_contexts(&self) -> Vec<Vec<&str>> {
        let mut out: Vec<Vec<&str>> = self
            .levels
            .iter()
            .flat_map(|l| l.keys())
            .map(|ids| ids.iter().map(|&i| self.vocab[i as usize].as_str()).collect())
            .collect();
        out.sort();
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn smoothing(&self) -> &SmoothingConfig {
        &self.smoothing
    }

    /// Number of word (or tag) types excluding the reserved symbols.
    pub fn vocab_size(&self) -> usize {
        self.vocab.len() - 3
    }

    fn units<'a>(&self, sentence: &'a Sentence) -> Result<&'a [String]> {
        match self.level {
            Level::Word => Ok(&sentence.tokens),
            Level::Tag => sentence.tags.as_deref().ok_or_else(|| {
                Error::Usage(format!(
                    "tag-level model applied to untagged sentence {}",
                    sentence.id
                ))
            }),
        }
    }

    fn chain_logprob(&self, units: &[String], with_eos: bool) -> f64 {
        let mut padded = self.pad(units.iter().map(String::as_str));
        if !with_eos {
            padded.pop();
        }
        let h = self.order - 1;
        (h..padded.len())
            .map(|i| self.prob_ids(&padded[i - h..i], padded[i]).ln())
            .sum()
    }

    /// Natural-log probability of the BOS-padded, EOS-terminated sentence.
    pub fn logprob(&self, sentence: &Sentence) -> Result<f64> {
        Ok(self.chain_logprob(self.units(sentence)?, true))
    }

    /// Like [`logprob`](Self::logprob) but without the final EOS event.
    pub fn prefix_logprob(&self, sentence: &Sentence) -> Result<f64> {
        Ok(self.chain_logprob(self.units(sentence)?, false))
    }

    /// Sum of smoothed unigram log probabilities of every token plus EOS.
    pub fn unigram_logprob(&self, sentence: &Sentence) -> Result<f64> {
        if self.vocab_size() == 0 {
            return Err(Error::Usage("model vocabulary is empty".into()));
        }
        let units = self.units(sentence)?;
        Ok(units
            .iter()
            .map(|t| self.id(t))
            .chain(std::iter::once(EOS_ID))
            .map(|w| self.unigram_prob(w).ln())
            .sum())
    }

    /// Syntactic log-odds ratio: `(logprob - unigram_logprob) / length`.
    pub fn slor(&self, sentence: &Sentence) -> Result<f64> {
        let len = self.units(sentence)?.len();
        if len == 0 {
            return Err(Error::Usage(format!(
                "SLOR undefined for empty sentence {}",
                sentence.id
            )));
        }
        Ok((self.logprob(sentence)? - self.unigram_logprob(sentence)?) / len as f64)
    }
}

#[cfg(test)]
mod tests;
