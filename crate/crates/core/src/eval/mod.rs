//! Forced-choice evaluation of scorers on minimal pairs.
//!
//! A scorer succeeds on a pair when it scores the good sentence strictly
//! higher than the bad one. Equal scores are a tie and earn credit according
//! to the [`TiePolicy`].

mod report;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataio::MinimalPair;
use crate::error::{Error, Result};
use crate::ngram::{Level, NGramModel};
use crate::postag::TagModel;
use crate::rules::{apply_rule, RuleVerdict, Rulepack};
use crate::scorefile::ScoreTable;
use crate::text::Sentence;

pub use report::{
    either_paradigm, summarize, ColumnStat, EvalReport, PairVerdict, ParadigmRow, PhenomenonRow,
    SummaryConfig, ORACLE_ID,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Correct,
    Incorrect,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    #[default]
    Half,
    Zero,
}

impl TiePolicy {
    pub fn credit(self) -> f64 {
        match self {
            TiePolicy::Half => 0.5,
            TiePolicy::Zero => 0.0,
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiePolicy::Half => "half",
            TiePolicy::Zero => "zero",
        })
    }
}

impl FromStr for TiePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(TiePolicy::Half),
            "zero" => Ok(TiePolicy::Zero),
            other => Err(Error::Config(format!("unknown tie policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    NgramLl,
    Slor,
    Rule,
    ExternalScores,
    HumanZ,
}

impl fmt::Display for ScorerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScorerKind::NgramLl => "ngram_ll",
            ScorerKind::Slor => "slor",
            ScorerKind::Rule => "rule",
            ScorerKind::ExternalScores => "external_scores",
            ScorerKind::HumanZ => "human_z",
        })
    }
}

impl FromStr for ScorerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ngram_ll" => Ok(ScorerKind::NgramLl),
            "slor" => Ok(ScorerKind::Slor),
            "rule" => Ok(ScorerKind::Rule),
            "external_scores" => Ok(ScorerKind::ExternalScores),
            "human_z" => Ok(ScorerKind::HumanZ),
            other => Err(Error::Config(format!("unknown scorer kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
enum Binding {
    Ngram {
        model: Arc<NGramModel>,
        tagger: Option<Arc<TagModel>>,
    },
    Rules(Arc<Rulepack>),
    Scores(Arc<ScoreTable>),
}

/// A named scorer bound to the model, rulepack or score table it reads.
#[derive(Debug, Clone)]
pub struct ScorerHandle {
    pub id: String,
    pub kind: ScorerKind,
    binding: Binding,
}

impl ScorerHandle {
    /// Log-likelihood under an n-gram model. Tag-level models need a tagger
    /// unless every sentence already carries tags.
    pub fn ngram_ll(id: impl Into<String>, model: Arc<NGramModel>, tagger: Option<Arc<TagModel>>) -> Self {
        ScorerHandle {
            id: id.into(),
            kind: ScorerKind::NgramLl,
            binding: Binding::Ngram { model, tagger },
        }
    }

    pub fn slor(id: impl Into<String>, model: Arc<NGramModel>, tagger: Option<Arc<TagModel>>) -> Self {
        ScorerHandle {
            id: id.into(),
            kind: ScorerKind::Slor,
            binding: Binding::Ngram { model, tagger },
        }
    }

    pub fn rule(id: impl Into<String>, pack: Arc<Rulepack>) -> Self {
        ScorerHandle {
            id: id.into(),
            kind: ScorerKind::Rule,
            binding: Binding::Rules(pack),
        }
    }

    pub fn external(id: impl Into<String>, scores: Arc<ScoreTable>) -> Self {
        ScorerHandle {
            id: id.into(),
            kind: ScorerKind::ExternalScores,
            binding: Binding::Scores(scores),
        }
    }

    pub fn human_z(id: impl Into<String>, scores: Arc<ScoreTable>) -> Self {
        ScorerHandle {
            id: id.into(),
            kind: ScorerKind::HumanZ,
            binding: Binding::Scores(scores),
        }
    }

    /// The scalar score of one sentence. Rule scorers have none.
    pub fn score(&self, sentence: &Sentence) -> Result<f64> {
        match &self.binding {
            Binding::Ngram { model, tagger } => {
                let tagged;
                let s = if model.level() == Level::Tag && sentence.tags.is_none() {
                    let tagger = tagger.as_ref().ok_or_else(|| {
                        Error::Config(format!("scorer {} needs a tagger", self.id))
                    })?;
                    tagged = tagger.tag(sentence);
                    &tagged
                } else {
                    sentence
                };
                match self.kind {
                    ScorerKind::Slor => model.slor(s),
                    _ => model.logprob(s),
                }
            }
            Binding::Scores(table) => table.get(&sentence.id).ok_or_else(|| Error::Excluded {
                scorer: self.id.clone(),
                reason: format!("no score for sentence {}", sentence.id),
            }),
            Binding::Rules(_) => Err(Error::Usage(format!(
                "rule scorer {} compares pairs and has no sentence score",
                self.id
            ))),
        }
    }
}

/// Correct iff `good > bad`; tie iff equal.
pub fn verdict_from_scores(good: f64, bad: f64) -> Verdict {
    if good > bad {
        Verdict::Correct
    } else if good < bad {
        Verdict::Incorrect
    } else {
        Verdict::Tie
    }
}

impl From<RuleVerdict> for Verdict {
    fn from(v: RuleVerdict) -> Self {
        match v {
            RuleVerdict::ChooseGood => Verdict::Correct,
            RuleVerdict::ChooseBad => Verdict::Incorrect,
            RuleVerdict::Abstain => Verdict::Tie,
        }
    }
}

/// Judges one pair. [`Error::Excluded`] marks a pair this scorer cannot
/// judge (missing external score, paradigm without a rule); other errors
/// are failures of the scorer itself.
pub fn forced_choice(scorer: &ScorerHandle, pair: &MinimalPair) -> Result<Verdict> {
    if let Binding::Rules(pack) = &scorer.binding {
        let rule = pack.rule(&pair.paradigm).ok_or_else(|| Error::Excluded {
            scorer: scorer.id.clone(),
            reason: format!("no rule for paradigm {}", pair.paradigm),
        })?;
        return Ok(apply_rule(rule, pair, pack.positions).into());
    }
    Ok(verdict_from_scores(
        scorer.score(&pair.good)?,
        scorer.score(&pair.bad)?,
    ))
}

/// Percent credit of a verdict list.
pub fn accuracy_of(verdicts: &[Verdict], policy: TiePolicy) -> Result<f64> {
    if verdicts.is_empty() {
        return Err(Error::Empty("accuracy of an empty pair list"));
    }
    let credit: f64 = verdicts
        .iter()
        .map(|v| match v {
            Verdict::Correct => 1.0,
            Verdict::Incorrect => 0.0,
            Verdict::Tie => policy.credit(),
        })
        .sum();
    Ok(100.0 * credit / verdicts.len() as f64)
}

/// Forced-choice accuracy in percent over the pairs the scorer can judge.
/// Excluded pairs are logged and left out of the denominator.
pub fn accuracy(scorer: &ScorerHandle, pairs: &[MinimalPair], policy: TiePolicy) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Empty("accuracy of an empty pair list"));
    }
    let mut verdicts = Vec::with_capacity(pairs.len());
    let mut excluded = 0usize;
    for p in pairs {
        match forced_choice(scorer, p) {
            Ok(v) => verdicts.push(v),
            Err(Error::Excluded { .. }) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    if excluded > 0 {
        log::warn!("{}: {excluded} of {} pairs excluded", scorer.id, pairs.len());
    }
    accuracy_of(&verdicts, policy)
}

/// Pair-level oracle: correct when any component is correct. Without a
/// correct component, a tie in any component keeps the pair a tie so the
/// oracle never earns less credit than a component.
pub fn oracle_verdict(components: &[Verdict]) -> Verdict {
    if components.contains(&Verdict::Correct) {
        Verdict::Correct
    } else if components.contains(&Verdict::Tie) {
        Verdict::Tie
    } else {
        Verdict::Incorrect
    }
}

/// Runs every scorer on the pair and combines the verdicts.
pub fn oracle_pair(scorers: &[ScorerHandle], pair: &MinimalPair) -> Result<Verdict> {
    if scorers.len() < 2 {
        return Err(Error::Usage("an oracle needs at least two scorers".into()));
    }
    let verdicts = scorers
        .iter()
        .map(|s| forced_choice(s, pair))
        .collect::<Result<Vec<_>>>()?;
    Ok(oracle_verdict(&verdicts))
}

#[cfg(test)]
mod tests;
