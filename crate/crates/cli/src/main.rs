//! `mpaudit`: ingest benchmarks, train baselines, score, evaluate and report.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "mpaudit", version, about = "Minimal-pair benchmark auditing toolkit")]
struct Cli {
    /// Run configuration (TOML). Flags override its values.
    #[arg(long, global = true, env = "MPAUDIT_CONFIG")]
    config: Option<PathBuf>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert a raw benchmark release into the pairs and sentences TSVs.
    Normalize(commands::NormalizeArgs),
    /// Train the part-of-speech tagger on a `token_TAG` corpus.
    TrainTagger(commands::TrainTaggerArgs),
    /// Train a word- or tag-level n-gram model.
    TrainNgram(commands::TrainNgramArgs),
    /// Score a sentences TSV with an n-gram model.
    Score(commands::ScoreArgs),
    /// Forced-choice evaluation of scorers on a pairs TSV.
    EvalPairs(commands::EvalPairsArgs),
    /// Apply a rulepack to a pairs TSV.
    EvalRules(commands::EvalRulesArgs),
    /// Within-type variability and correlations on LI-Adger judgments.
    Gradient(commands::GradientArgs),
    /// Collect the results of earlier runs into one document.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Directory holding run subdirectories (or a single run).
    #[arg(long)]
    run: PathBuf,
}

/// Process exit codes by error category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    Other = 1,
    Usage = 2,
    MissingInput = 3,
    Schema = 4,
    Data = 5,
}

fn classify(err: &anyhow::Error) -> Failure {
    use mpaudit::Error as E;
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<commands::CliError>() {
            return f.category();
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => {
                    Failure::MissingInput
                }
                E::Io { .. } => Failure::Other,
                E::Schema { .. } | E::RuleSyntax { .. } | E::Rulepack(_) => Failure::Schema,
                E::Config(_) | E::Usage(_) => Failure::Usage,
                E::Ingest { .. }
                | E::Dataset(_)
                | E::Training(_)
                | E::Excluded { .. }
                | E::Stats(_)
                | E::Empty(_) => Failure::Data,
            };
        }
    }
    Failure::Other
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Failure::Usage as u8 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err) as u8)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match cli.command {
        Command::Normalize(a) => commands::normalize(a, config, argv),
        Command::TrainTagger(a) => commands::train_tagger(a, config, argv),
        Command::TrainNgram(a) => commands::train_ngram(a, config, argv),
        Command::Score(a) => commands::score(a, config, argv),
        Command::EvalPairs(a) => commands::eval_pairs(a, config, argv),
        Command::EvalRules(a) => commands::eval_rules(a, config, argv),
        Command::Gradient(a) => commands::gradient(a, config, argv),
        Command::Report(a) => commands::report(&a.run, argv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn error_categories() {
        let missing = anyhow::Error::from(mpaudit::Error::io(
            "x",
            std::io::Error::from(std::io::ErrorKind::NotFound),
        ));
        assert_eq!(classify(&missing), Failure::MissingInput);
        let schema = anyhow::Error::from(mpaudit::Error::schema("f", "bad header"))
            .context("loading pairs");
        assert_eq!(classify(&schema), Failure::Schema);
        let data = anyhow::Error::from(mpaudit::Error::Dataset("odd".into()));
        assert_eq!(classify(&data), Failure::Data);
        assert_eq!(classify(&anyhow::anyhow!("boom")), Failure::Other);
    }
}
