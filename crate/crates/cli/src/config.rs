use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use mpaudit::eval::TiePolicy;
use mpaudit::gradient::Method;
use mpaudit::ngram::{Level, Scheme, SmoothingConfig};
use mpaudit::postag::TrainConfig;
use mpaudit::rules::RuleEvalConfig;

pub const CONFIG_VERSION: u32 = 1;
pub const DATA_DIR_ENV: &str = "MPAUDIT_DATA_DIR";

/// The run configuration. Every field has a default, so an empty file (or
/// no file at all) is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    /// Relative input paths that do not exist are looked up here.
    pub data_dir: Option<PathBuf>,
    /// Parent of the per-subcommand output directories when `--out` is absent.
    pub output_dir: PathBuf,
    pub seed: u64,
    pub tagger: TaggerSection,
    pub ngram: NgramSection,
    pub eval: EvalSection,
    pub rules: RulesSection,
    pub gradient: GradientSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaggerSection {
    pub epochs: usize,
    pub heldout_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramSection {
    pub order: usize,
    pub level: Level,
    pub scheme: Scheme,
    pub k: f64,
    pub alpha: f64,
    pub unk_threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub tie_policy: TiePolicy,
    pub reference: Option<String>,
    pub oracle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RulesSection {
    pub abstain_credit: f64,
    pub strict_uncovered: bool,
    /// Points beyond which a paradigm is flagged against the reference table.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GradientSection {
    pub method: Method,
    pub rezscore_human: bool,
    /// File with one sentence-type id per line; all types when absent.
    pub inclusion: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            data_dir: None,
            output_dir: PathBuf::from("out"),
            seed: mpaudit::postag::DEFAULT_SEED,
            tagger: TaggerSection::default(),
            ngram: NgramSection::default(),
            eval: EvalSection::default(),
            rules: RulesSection::default(),
            gradient: GradientSection::default(),
        }
    }
}

impl Default for TaggerSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        TaggerSection {
            epochs: t.epochs,
            heldout_fraction: t.heldout_fraction,
        }
    }
}

impl Default for NgramSection {
    fn default() -> Self {
        let s = SmoothingConfig::default();
        NgramSection {
            order: 5,
            level: Level::Word,
            scheme: s.scheme,
            k: s.k,
            alpha: s.alpha,
            unk_threshold: s.unk_threshold,
        }
    }
}

impl Default for EvalSection {
    fn default() -> Self {
        EvalSection {
            tie_policy: TiePolicy::Half,
            reference: None,
            oracle: Vec::new(),
        }
    }
}

impl Default for RulesSection {
    fn default() -> Self {
        let r = RuleEvalConfig::default();
        RulesSection {
            abstain_credit: r.abstain_credit,
            strict_uncovered: r.strict_uncovered,
            tolerance: 2.0,
        }
    }
}

impl Default for GradientSection {
    fn default() -> Self {
        GradientSection {
            method: Method::Pearson,
            rezscore_human: false,
            inclusion: None,
        }
    }
}

impl NgramSection {
    pub fn smoothing(&self) -> SmoothingConfig {
        SmoothingConfig {
            scheme: self.scheme,
            k: self.k,
            alpha: self.alpha,
            unk_threshold: self.unk_threshold,
        }
    }
}

impl RulesSection {
    pub fn eval_config(&self) -> RuleEvalConfig {
        RuleEvalConfig {
            abstain_credit: self.abstain_credit,
            strict_uncovered: self.strict_uncovered,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| mpaudit::Error::Config(e.to_string()))?;
        if cfg.version != CONFIG_VERSION {
            bail!(mpaudit::Error::Config(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                cfg.version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| mpaudit::Error::io(path, e))
            .context("reading config")?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    /// The data directory from the environment, falling back to the config.
    pub fn effective_data_dir(&self) -> Option<PathBuf> {
        std::env::var_os(DATA_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
            .or_else(|| self.data_dir.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn round_trips() {
        let mut cfg = RunConfig::default();
        cfg.data_dir = Some("data".into());
        cfg.eval.oracle = vec!["word".into(), "tag".into()];
        cfg.gradient.method = Method::Spearman;
        cfg.ngram.scheme = Scheme::AddK;
        let again = RunConfig::parse(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn example_file_parses() {
        let text = include_str!("../../../mpaudit.toml");
        assert_eq!(RunConfig::parse(text).unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(RunConfig::parse("version = 2").is_err());
        assert!(RunConfig::parse("[ngram]\nsmoothing = 3").is_err());
        assert!(RunConfig::parse("[ngram]\nlevel = \"char\"").is_err());
    }
}
