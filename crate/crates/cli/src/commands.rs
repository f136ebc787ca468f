use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Args, ValueEnum};
use log::{info, warn};

use mpaudit::dataio::{
    self, build_li_adger_pairs, load_blimp, load_li_adger, load_training_corpus, load_zorro,
    read_pairs_tsv, read_sentences_tsv, CorpusFormat, ZorroLayout,
};
use mpaudit::eval::{summarize, ScorerHandle, SummaryConfig, TiePolicy};
use mpaudit::gradient::{
    self, correlation_matrix, li_adger_accuracy, type_variability, JudgmentMatrix, Method,
    Statistic, HUMAN,
};
use mpaudit::ngram::{self, Level, NGramModel, Scheme};
use mpaudit::postag::{self, TagModel, TrainConfig};
use mpaudit::reference;
use mpaudit::rules::{eval_rulepack, load_rulepack};
use mpaudit::scorefile::{self, group_by_scorer, LogBase, ScoreRecord, ScoreTable};
use mpaudit::{Error, Sentence, Source};

use crate::config::RunConfig;
use crate::manifest::{read_manifest, sha256_hex, Run, MANIFEST_FILE};
use crate::Failure;

/// Errors raised by the driver itself rather than the library.
#[derive(Debug)]
pub struct CliError {
    category: Failure,
    message: String,
}

impl CliError {
    pub fn category(&self) -> Failure {
        self.category
    }

    fn missing(message: String) -> Self {
        CliError {
            category: Failure::MissingInput,
            message,
        }
    }

    fn usage(message: String) -> Self {
        CliError {
            category: Failure::Usage,
            message,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

type Result<T> = anyhow::Result<T>;

/// Existing path as given, else relative to the data directory.
fn resolve(config: &RunConfig, path: &Path) -> Result<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        if let Some(dir) = config.effective_data_dir() {
            let candidate = dir.join(path);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
    }
    Err(CliError::missing(format!("{}: input not found", path.display())).into())
}

fn out_dir(config: &RunConfig, flag: Option<PathBuf>, subcommand: &str) -> PathBuf {
    flag.unwrap_or_else(|| config.output_dir.join(subcommand))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?))
}

fn load_model(path: &Path) -> Result<NGramModel> {
    NGramModel::read_from(open(path)?).with_context(|| format!("loading {}", path.display()))
}

fn load_tagger(path: &Path) -> Result<TagModel> {
    TagModel::read_from(open(path)?).with_context(|| format!("loading {}", path.display()))
}

fn split_binding(spec: &str) -> Result<(String, PathBuf)> {
    match spec.split_once('=') {
        Some((id, path)) if !id.is_empty() && !path.is_empty() => Ok((id.into(), path.into())),
        _ => Err(CliError::usage(format!("expected ID=PATH, got {spec:?}")).into()),
    }
}

#[derive(Debug, Args)]
pub struct ScorerArgs {
    /// Score file; every scorer id inside it becomes a scorer.
    #[arg(long = "scores", value_name = "FILE")]
    scores: Vec<PathBuf>,
    /// N-gram log-likelihood scorer.
    #[arg(long = "ngram", value_name = "ID=MODEL")]
    ngram: Vec<String>,
    /// N-gram SLOR scorer.
    #[arg(long = "slor", value_name = "ID=MODEL")]
    slor: Vec<String>,
    /// Tagger applied to sentences scored by tag-level models.
    #[arg(long, value_name = "MODEL")]
    tagger: Option<PathBuf>,
}

impl ScorerArgs {
    fn build(&self, config: &RunConfig, run: &mut Run) -> Result<Vec<ScorerHandle>> {
        let mut scorers = Vec::new();
        for path in &self.scores {
            let path = resolve(config, path)?;
            run.input("scores", &path)?;
            for (id, table) in group_by_scorer(scorefile::read_scores(&path)?) {
                let table = Arc::new(table);
                scorers.push(if id == HUMAN {
                    ScorerHandle::human_z(id, table)
                } else {
                    ScorerHandle::external(id, table)
                });
            }
        }
        let tagger = match &self.tagger {
            Some(path) => {
                let path = resolve(config, path)?;
                run.input("tagger", &path)?;
                Some(Arc::new(load_tagger(&path)?))
            }
            None => None,
        };
        for (specs, slor) in [(&self.ngram, false), (&self.slor, true)] {
            for spec in specs {
                let (id, path) = split_binding(spec)?;
                let path = resolve(config, &path)?;
                run.input("ngram_model", &path)?;
                let model = Arc::new(load_model(&path)?);
                if model.level() == Level::Tag && tagger.is_none() {
                    return Err(Error::Config(format!("{id}: a tag-level model needs --tagger")).into());
                }
                let t = tagger.clone();
                scorers.push(if slor {
                    ScorerHandle::slor(id, model, t)
                } else {
                    ScorerHandle::ngram_ll(id, model, t)
                });
            }
        }
        Ok(scorers)
    }
}

// ---------------------------------------------------------------- normalize

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    /// blimp, zorro or li_adger.
    #[arg(long)]
    source: Source,
    /// Directory of the raw release.
    #[arg(long)]
    input: PathBuf,
    /// Zorro files list the acceptable sentence first.
    #[arg(long)]
    good_first: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn normalize(args: NormalizeArgs, config: RunConfig, argv: Vec<String>) -> Result<()> {
    let input = resolve(&config, &args.input)?;
    let mut run = Run::start("normalize", argv, &config, &out_dir(&config, args.out, "normalize"))?;
    run.input("dataset", &input)?;

    let (pairs, sentences, warnings) = match args.source {
        Source::LiAdger => {
            let types = load_li_adger(&input)?;
            let pairs = build_li_adger_pairs(&types.items);
            let sentences: Vec<Sentence> =
                types.items.iter().flat_map(|t| t.sentences.iter().cloned()).collect();
            let human: Vec<ScoreRecord> = types
                .items
                .iter()
                .flat_map(|t| t.sentences.iter().zip(&t.human_z))
                .map(|(s, z)| ScoreRecord {
                    sentence_id: s.id.clone(),
                    scorer_id: HUMAN.into(),
                    score: *z,
                    log_base: LogBase::None,
                })
                .collect();
            let mut buf = Vec::new();
            scorefile::write_scores(&mut buf, &human)?;
            run.write("human_scores", "human.scores.tsv", buf)?;
            run.fact("sentence_types", types.items.len());
            let mut warnings = types.warnings;
            warnings.extend(pairs.warnings);
            (pairs.items, sentences, warnings)
        }
        source => {
            let loaded = if source == Source::Zorro {
                let layout = if args.good_first { ZorroLayout::GoodFirst } else { ZorroLayout::BadFirst };
                load_zorro(&input, layout)?
            } else {
                load_blimp(&input)?
            };
            let sentences = dataio::sentences_of_pairs(&loaded.items);
            (loaded.items, sentences, loaded.warnings)
        }
    };
    if pairs.is_empty() {
        return Err(Error::Dataset(format!("{}: no pairs found", input.display())).into());
    }

    let mut buf = Vec::new();
    dataio::write_pairs_tsv(&mut buf, &pairs)?;
    run.write("pairs", "pairs.tsv", buf)?;
    let mut buf = Vec::new();
    dataio::write_sentences_tsv(&mut buf, &sentences)?;
    run.write("sentences", "sentences.tsv", buf)?;

    let paradigms: std::collections::BTreeSet<&str> = pairs.iter().map(|p| p.paradigm.as_str()).collect();
    run.fact("source", args.source);
    run.fact("pairs", pairs.len());
    run.fact("paradigms", paradigms.len());
    run.fact("sentences", sentences.len());
    run.fact("warnings", &warnings);
    println!(
        "{}: {} pairs, {} paradigms, {} sentences ({} warnings) -> {}",
        args.source,
        pairs.len(),
        paradigms.len(),
        sentences.len(),
        warnings.len(),
        run.out_dir().display()
    );
    run.finish()?;
    Ok(())
}

// ------------------------------------------------------------- train-tagger

#[derive(Debug, Args)]
pub struct TrainTaggerArgs {
    /// Corpus of space-separated `token_TAG` items, one sentence per line.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fraction of sentences held out for the accuracy report.
    #[arg(long)]
    heldout: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn train_tagger(args: TrainTaggerArgs, mut config: RunConfig, argv: Vec<String>) -> Result<()> {
    config.tagger.epochs = args.epochs.unwrap_or(config.tagger.epochs);
    config.seed = args.seed.unwrap_or(config.seed);
    config.tagger.heldout_fraction = args.heldout.unwrap_or(config.tagger.heldout_fraction);
    let corpus_path = resolve(&config, &args.corpus)?;
    let mut run = Run::start("train-tagger", argv, &config, &out_dir(&config, args.out, "train-tagger"))?;
    run.input("corpus", &corpus_path)?;

    let corpus = load_training_corpus(&corpus_path, CorpusFormat::Tagged)?;
    let train = TrainConfig {
        epochs: config.tagger.epochs,
        seed: config.seed,
        heldout_fraction: config.tagger.heldout_fraction,
    };
    let (model, report) = postag::train_tagger(corpus.tagged(), &train)?;
    let mut buf = Vec::new();
    model.write_to(&mut buf).map_err(|e| Error::io(run.out_dir().join("tagger.model"), e))?;
    run.write("tagger_model", "tagger.model", buf)?;
    run.fact("train_report", &report);
    match report.heldout_accuracy {
        Some(acc) => println!("held-out accuracy {:.2}% on {} sentences", acc * 100.0, report.heldout_sentences),
        None => println!("trained on {} sentences (no held-out split)", report.train_sentences),
    }
    run.finish()?;
    Ok(())
}

// -------------------------------------------------------------- train-ngram

#[derive(Debug, Args)]
pub struct TrainNgramArgs {
    #[arg(long)]
    corpus: PathBuf,
    /// plain or tagged.
    #[arg(long, default_value = "plain")]
    format: CorpusFormat,
    #[arg(long)]
    order: Option<usize>,
    /// word or tag.
    #[arg(long)]
    level: Option<Level>,
    /// stupid_backoff or add_k.
    #[arg(long)]
    scheme: Option<Scheme>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    unk_threshold: Option<usize>,
    /// Tagger used to tag the corpus for tag-level models.
    #[arg(long)]
    tagger: Option<PathBuf>,
    /// Model file stem; defaults to e.g. `5word`.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn train_ngram(args: TrainNgramArgs, mut config: RunConfig, argv: Vec<String>) -> Result<()> {
    let n = &mut config.ngram;
    n.order = args.order.unwrap_or(n.order);
    n.level = args.level.unwrap_or(n.level);
    n.scheme = args.scheme.unwrap_or(n.scheme);
    n.k = args.k.unwrap_or(n.k);
    n.alpha = args.alpha.unwrap_or(n.alpha);
    n.unk_threshold = args.unk_threshold.unwrap_or(n.unk_threshold);
    let corpus_path = resolve(&config, &args.corpus)?;
    let tagger_path = args.tagger.as_deref().map(|p| resolve(&config, p)).transpose()?;
    let mut run = Run::start("train-ngram", argv, &config, &out_dir(&config, args.out, "train-ngram"))?;
    run.input("corpus", &corpus_path)?;
    let tagger = match &tagger_path {
        Some(p) => {
            run.input("tagger", p)?;
            Some(load_tagger(p)?)
        }
        None => None,
    };

    let corpus = load_training_corpus(&corpus_path, args.format)?;
    let n = &config.ngram;
    let model = ngram::train_ngram(&corpus, n.order, n.level, n.smoothing(), tagger.as_ref())?;
    let name = args.name.unwrap_or_else(|| format!("{}{}", n.order, n.level));
    let file = format!("{name}.model");
    let mut buf = Vec::new();
    model.write_to(&mut buf).map_err(|e| Error::io(run.out_dir().join(&file), e))?;
    let path = run.write("ngram_model", &file, buf)?;
    run.fact("sentences", corpus.sentences.len());
    run.fact("vocab_size", model.vocab_size());
    println!(
        "{}-gram {} model, vocabulary {} -> {}",
        n.order,
        n.level,
        model.vocab_size(),
        path.display()
    );
    run.finish()?;
    Ok(())
}

// -------------------------------------------------------------------- score

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Metric {
    Ll,
    Slor,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    model: PathBuf,
    /// Sentences TSV (`sentence_id`, `sentence`).
    #[arg(long)]
    sentences: PathBuf,
    #[arg(long)]
    tagger: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ll")]
    metric: Metric,
    /// Defaults to the model file stem, with `_slor` appended for SLOR.
    #[arg(long)]
    scorer_id: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn score(args: ScoreArgs, config: RunConfig, argv: Vec<String>) -> Result<()> {
    let model_path = resolve(&config, &args.model)?;
    let sentences_path = resolve(&config, &args.sentences)?;
    let tagger_path = args.tagger.as_deref().map(|p| resolve(&config, p)).transpose()?;
    let mut run = Run::start("score", argv, &config, &out_dir(&config, args.out, "score"))?;
    run.input("ngram_model", &model_path)?;
    run.input("sentences", &sentences_path)?;

    let model = Arc::new(load_model(&model_path)?);
    let tagger = match &tagger_path {
        Some(p) => {
            run.input("tagger", p)?;
            Some(Arc::new(load_tagger(p)?))
        }
        None => None,
    };
    if model.level() == Level::Tag && tagger.is_none() {
        return Err(Error::Config("a tag-level model needs --tagger".into()).into());
    }
    let stem = model_path.file_stem().and_then(|s| s.to_str()).unwrap_or("ngram").to_string();
    let id = args.scorer_id.unwrap_or_else(|| match args.metric {
        Metric::Ll => stem,
        Metric::Slor => format!("{stem}_slor"),
    });
    let handle = match args.metric {
        Metric::Ll => ScorerHandle::ngram_ll(&id, model, tagger),
        Metric::Slor => ScorerHandle::slor(&id, model, tagger),
    };

    let sentences = read_sentences_tsv(&sentences_path)?;
    let records = sentences
        .iter()
        .map(|s| {
            Ok(ScoreRecord {
                sentence_id: s.id.clone(),
                scorer_id: id.clone(),
                score: handle.score(s)?,
                log_base: LogBase::E,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut buf = Vec::new();
    scorefile::write_scores(&mut buf, &records)?;
    let path = run.write("scores", "scores.tsv", buf)?;
    run.fact("scorer_id", &id);
    run.fact("sentences", records.len());
    println!("scored {} sentences as {id} -> {}", records.len(), path.display());
    run.finish()?;
    Ok(())
}

// --------------------------------------------------------------- eval-pairs

#[derive(Debug, Args)]
pub struct EvalPairsArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[command(flatten)]
    scorers: ScorerArgs,
    /// Rulepack scored as the `rule` column (`builtin:zorro`, `builtin:blimp` or a file).
    #[arg(long)]
    rulepack: Option<String>,
    /// Scorer the others are counted against.
    #[arg(long)]
    reference: Option<String>,
    /// Comma-separated components of the pair-level oracle.
    #[arg(long, value_delimiter = ',')]
    oracle: Option<Vec<String>>,
    /// half or zero.
    #[arg(long)]
    tie_policy: Option<TiePolicy>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load_rules(config: &RunConfig, spec: &str, run: &mut Run) -> Result<mpaudit::rules::Rulepack> {
    if spec.starts_with("builtin:") {
        run.fact("rulepack", spec);
        return Ok(load_rulepack(spec)?);
    }
    let path = resolve(config, Path::new(spec))?;
    run.input("rulepack", &path)?;
    Ok(load_rulepack(&path.to_string_lossy())?)
}

pub fn eval_pairs(args: EvalPairsArgs, mut config: RunConfig, argv: Vec<String>) -> Result<()> {
    if let Some(r) = args.reference {
        config.eval.reference = Some(r);
    }
    if let Some(o) = args.oracle {
        config.eval.oracle = o;
    }
    config.eval.tie_policy = args.tie_policy.unwrap_or(config.eval.tie_policy);
    let pairs_path = resolve(&config, &args.pairs)?;
    let mut run = Run::start("eval-pairs", argv, &config, &out_dir(&config, args.out, "eval-pairs"))?;
    run.input("pairs", &pairs_path)?;
    let pairs = read_pairs_tsv(&pairs_path)?;

    let mut scorers = args.scorers.build(&config, &mut run)?;
    if let Some(spec) = &args.rulepack {
        scorers.push(ScorerHandle::rule("rule", Arc::new(load_rules(&config, spec, &mut run)?)));
    }
    if scorers.is_empty() {
        return Err(CliError::usage("no scorers given (use --scores, --ngram, --slor or --rulepack)".into()).into());
    }

    let summary = SummaryConfig {
        tie_policy: config.eval.tie_policy,
        reference: config.eval.reference.clone(),
        oracle: config.eval.oracle.clone(),
        dataset_hash: Some(run_input_hash(&pairs_path)?),
    };
    let report = summarize(&scorers, &pairs, &summary)?;
    run.write("summary_tsv", "summary.tsv", report.to_tsv())?;
    run.write("summary_md", "summary.md", report.to_markdown())?;
    run.write("summary_json", "summary.json", report.to_json())?;
    run.write("verdicts", "verdicts.tsv", report.verdicts_tsv())?;

    let mut macros = serde_json::Map::new();
    for (column, value) in report.columns.iter().zip(&report.macro_average) {
        match value {
            Some(v) => println!("{column}\t{v:.2}"),
            None => println!("{column}\tNA"),
        }
        macros.insert(column.clone(), serde_json::to_value(value)?);
    }
    run.fact("pairs", pairs.len());
    run.fact("macro_average", macros);
    run.finish()?;
    Ok(())
}

fn run_input_hash(path: &Path) -> Result<String> {
    Ok(dataio::dataset_hash(path)?)
}

// --------------------------------------------------------------- eval-rules

#[derive(Debug, Args)]
pub struct EvalRulesArgs {
    /// `builtin:zorro`, `builtin:blimp` or a rulepack file.
    #[arg(long)]
    rulepack: String,
    #[arg(long)]
    pairs: PathBuf,
    /// Score paradigms without a rule as 0 instead of leaving them out.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    abstain_credit: Option<f64>,
    /// Reference table to flag deviations against (zorro or blimp).
    /// Defaults to the builtin rulepack's benchmark.
    #[arg(long)]
    compare: Option<String>,
    /// Flag paradigms further than this many points from the reference.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn eval_rules(args: EvalRulesArgs, mut config: RunConfig, argv: Vec<String>) -> Result<()> {
    config.rules.strict_uncovered |= args.strict;
    config.rules.abstain_credit = args.abstain_credit.unwrap_or(config.rules.abstain_credit);
    config.rules.tolerance = args.tolerance.unwrap_or(config.rules.tolerance);
    if !(0.0..=1.0).contains(&config.rules.abstain_credit) {
        return Err(Error::Config("abstain credit must be in [0, 1]".into()).into());
    }
    let pairs_path = resolve(&config, &args.pairs)?;
    let mut run = Run::start("eval-rules", argv, &config, &out_dir(&config, args.out, "eval-rules"))?;
    run.input("pairs", &pairs_path)?;
    let pack = load_rules(&config, &args.rulepack, &mut run)?;
    let pairs = read_pairs_tsv(&pairs_path)?;

    let report = eval_rulepack(&pack, &pairs, config.rules.eval_config());
    run.write("rules_tsv", "rules.tsv", report.to_tsv())?;

    let uncovered: Vec<&str> = report.uncovered().collect();
    for p in &uncovered {
        warn!("paradigm {p} has no rule");
    }
    let compare = args
        .compare
        .or_else(|| args.rulepack.strip_prefix("builtin:").map(str::to_string));
    if let Some(name) = &compare {
        let table = reference::table(name)
            .ok_or_else(|| Error::Config(format!("no reference table named {name:?}")))?;
        let observed = report
            .rows
            .iter()
            .filter_map(|r| r.accuracy.map(|a| (r.paradigm.as_str(), a)));
        let flagged = reference::deviations(table, observed, |r| r.rule, config.rules.tolerance);
        let mut tsv = String::from("paradigm\tobserved\treference\tdelta\n");
        for d in &flagged {
            warn!(
                "{}: {:.2} vs reference {:.2} ({:+.2})",
                d.paradigm, d.observed, d.reference, d.delta
            );
            tsv.push_str(&format!(
                "{}\t{:.2}\t{:.2}\t{:+.2}\n",
                d.paradigm, d.observed, d.reference, d.delta
            ));
        }
        run.write("deviations", "deviations.tsv", tsv)?;
        run.fact("reference_table", name);
        run.fact("flagged", flagged.len());
        println!("flagged\t{}", flagged.len());
    }

    match report.macro_average {
        Some(m) => println!("macro_average\t{m:.2}"),
        None => println!("macro_average\tNA"),
    }
    println!("perfect\t{}/{}", report.perfect(), report.rows.len());
    run.fact("pairs", pairs.len());
    run.fact("macro_average", report.macro_average);
    run.fact("perfect", report.perfect());
    run.fact("uncovered", &uncovered);
    run.finish()?;
    Ok(())
}

// ----------------------------------------------------------------- gradient

#[derive(Debug, Args)]
pub struct GradientArgs {
    /// Directory of LI-Adger judgment tables.
    #[arg(long)]
    li_adger: PathBuf,
    #[command(flatten)]
    scorers: ScorerArgs,
    /// pearson or spearman.
    #[arg(long)]
    method: Option<Method>,
    /// Re-z-score the human judgments.
    #[arg(long)]
    rezscore_human: bool,
    /// Sentence types to correlate, one id per line.
    #[arg(long)]
    inclusion: Option<PathBuf>,
    #[arg(long)]
    tie_policy: Option<TiePolicy>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read_inclusion(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

pub fn gradient(args: GradientArgs, mut config: RunConfig, argv: Vec<String>) -> Result<()> {
    config.gradient.method = args.method.unwrap_or(config.gradient.method);
    config.gradient.rezscore_human |= args.rezscore_human;
    if let Some(p) = args.inclusion {
        config.gradient.inclusion = Some(p);
    }
    config.eval.tie_policy = args.tie_policy.unwrap_or(config.eval.tie_policy);
    let dir = resolve(&config, &args.li_adger)?;
    let inclusion_path = config
        .gradient
        .inclusion
        .as_deref()
        .map(|p| resolve(&config, p))
        .transpose()?;
    let mut run = Run::start("gradient", argv, &config, &out_dir(&config, args.out, "gradient"))?;
    run.input("li_adger", &dir)?;
    let inclusion = match &inclusion_path {
        Some(p) => {
            run.input("inclusion", p)?;
            Some(read_inclusion(p)?)
        }
        None => None,
    };

    let types = load_li_adger(&dir)?.items;
    if types.is_empty() {
        return Err(Error::Dataset(format!("{}: no sentence types", dir.display())).into());
    }
    let pairs = build_li_adger_pairs(&types).items;
    let scorers = args.scorers.build(&config, &mut run)?;

    let mut matrix = JudgmentMatrix::from_types(&types);
    for scorer in &scorers {
        if scorer.id == HUMAN {
            return Err(CliError::usage("scorer id \"human\" is reserved for the shipped judgments".into()).into());
        }
        let mut row = HashMap::new();
        for sentence in types.iter().flat_map(|t| &t.sentences) {
            match scorer.score(sentence) {
                Ok(v) => {
                    row.insert(sentence.id.clone(), v);
                }
                Err(Error::Excluded { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        matrix.push_row(&scorer.id, &row)?;
    }
    let keep: &[&str] = if config.gradient.rezscore_human { &[] } else { &[HUMAN] };
    let z = matrix.zscored(keep)?;

    let variability = type_variability(&z, &types);
    run.write("variability", "variability.tsv", gradient::variability_tsv(&variability))?;
    for (stat, stem, title) in [
        (Statistic::TypeMeans, "corr_means", "Correlation of sentence-type means"),
        (Statistic::TypeStds, "corr_stds", "Correlation of sentence-type standard deviations"),
    ] {
        let c = correlation_matrix(&z, &types, stat, inclusion.as_deref(), config.gradient.method)?;
        run.write("correlation_tsv", &format!("{stem}.tsv"), c.to_tsv())?;
        run.write("correlation_svg", &format!("{stem}.svg"), c.to_svg(title)?)?;
    }

    let mut human = ScoreTable::new(HUMAN);
    for t in &types {
        for (s, v) in t.sentences.iter().zip(&t.human_z) {
            human.insert(s.id.clone(), *v);
        }
    }
    let mut bar_scorers = vec![ScorerHandle::human_z(HUMAN, Arc::new(human))];
    bar_scorers.extend(scorers);
    let bars = li_adger_accuracy(&bar_scorers, &pairs, config.eval.tie_policy)?;
    run.write("accuracy_bars", "accuracy_bars.tsv", gradient::accuracy_bars_tsv(&bars))?;

    for v in &variability {
        match v.avg_within_type_std {
            Some(s) => println!("{}\t{s:.3}", v.scorer),
            None => println!("{}\tNA", v.scorer),
        }
    }
    info!("{} sentence types, {} pairs", types.len(), pairs.len());
    run.fact("sentence_types", types.len());
    run.fact("pairs", pairs.len());
    run.fact("variability", &variability);
    run.finish()?;
    Ok(())
}

// ------------------------------------------------------------------- report

fn tsv_to_markdown(tsv: &str) -> String {
    let mut out = String::new();
    let mut rows = tsv.lines().filter(|l| !l.starts_with('#') && !l.is_empty());
    if let Some(header) = rows.next() {
        let cols: Vec<&str> = header.split('\t').collect();
        out.push_str(&format!("| {} |\n", cols.join(" | ")));
        out.push_str(&format!("|{}\n", "---|".repeat(cols.len())));
        for row in rows {
            out.push_str(&format!("| {} |\n", row.split('\t').collect::<Vec<_>>().join(" | ")));
        }
    }
    out
}

const TABLES: [&str; 5] = [
    "rules.tsv",
    "deviations.tsv",
    "variability.tsv",
    "accuracy_bars.tsv",
    "corr_means.tsv",
];

pub fn report(run_dir: &Path, argv: Vec<String>) -> Result<()> {
    if !run_dir.is_dir() {
        return Err(CliError::missing(format!("{}: run directory not found", run_dir.display())).into());
    }
    let mut candidates = vec![run_dir.to_path_buf()];
    let mut children: Vec<PathBuf> = std::fs::read_dir(run_dir)
        .map_err(|e| Error::io(run_dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    children.sort();
    candidates.extend(children);

    let mut runs = Vec::new();
    for dir in candidates {
        let path = dir.join(MANIFEST_FILE);
        if path.is_file() {
            let manifest = read_manifest(&path)?;
            if manifest.subcommand != "report" {
                runs.push((dir, manifest));
            }
        }
    }
    if runs.is_empty() {
        return Err(CliError::missing(format!("no results found in {}", run_dir.display())).into());
    }

    let mut doc = String::from("# mpaudit report\n");
    for (dir, m) in &runs {
        let rel = dir.strip_prefix(run_dir).unwrap_or(dir);
        let rel = if rel.as_os_str().is_empty() { Path::new(".") } else { rel };
        doc.push_str(&format!("\n## {} ({})\n\n", rel.display(), m.subcommand));
        doc.push_str(&format!("mpaudit {}, config sha256 `{}`\n\n", m.version, m.config_sha256));
        doc.push_str("| file | role | sha256 | status |\n|---|---|---|---|\n");
        for f in &m.inputs {
            doc.push_str(&format!("| {} | input: {} | `{}` | |\n", f.path, f.role, f.sha256));
        }
        for f in &m.outputs {
            let status = match std::fs::read(dir.join(&f.path)) {
                Ok(bytes) if sha256_hex(&bytes) == f.sha256 => "ok",
                Ok(_) => "modified",
                Err(_) => "missing",
            };
            doc.push_str(&format!("| {} | output: {} | `{}` | {status} |\n", f.path, f.role, f.sha256));
        }
        if !m.facts.is_empty() {
            doc.push('\n');
            for (k, v) in &m.facts {
                if !v.is_object() && !v.is_array() {
                    doc.push_str(&format!("- {k}: {v}\n"));
                }
            }
        }
        if let Ok(md) = std::fs::read_to_string(dir.join("summary.md")) {
            doc.push('\n');
            doc.push_str(&md);
        }
        for name in TABLES {
            if let Ok(tsv) = std::fs::read_to_string(dir.join(name)) {
                doc.push_str(&format!("\n### {name}\n\n"));
                doc.push_str(&tsv_to_markdown(&tsv));
            }
        }
        for svg in ["corr_means.svg", "corr_stds.svg"] {
            if dir.join(svg).is_file() {
                doc.push_str(&format!("\n![{svg}]({}/{svg})\n", rel.display()));
            }
        }
    }

    let out = run_dir.join("report");
    let mut run = Run::start("report", argv, &RunConfig::default(), &out)?;
    for (dir, _) in &runs {
        run.input("run_manifest", &dir.join(MANIFEST_FILE))?;
    }
    run.fact("runs", runs.len());
    let path = run.write("report", "report.md", doc)?;
    println!("{} runs -> {}", runs.len(), path.display());
    run.finish()?;
    Ok(())
}
