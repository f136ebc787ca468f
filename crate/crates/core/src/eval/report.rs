use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::{accuracy_of, forced_choice, oracle_verdict, ScorerHandle, TiePolicy, Verdict};
use crate::dataio::MinimalPair;
use crate::error::{Error, Result};

/// Column id of the pair-level oracle in reports.
pub const ORACLE_ID: &str = "oracle";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SummaryConfig {
    pub tie_policy: TiePolicy,
    /// Scorer whose per-paradigm accuracy the others are counted against.
    pub reference: Option<String>,
    /// Components of the pair-level oracle (and of the paradigm-level
    /// "either" count). Empty for no oracle column.
    pub oracle: Vec<String>,
    pub dataset_hash: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ColumnStat {
    /// Pairs judged, excluding exclusions.
    pub n: usize,
    pub correct: usize,
    pub incorrect: usize,
    pub tie: usize,
    pub excluded: usize,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadigmRow {
    pub phenomenon: String,
    pub paradigm: String,
    pub pairs: usize,
    /// One entry per report column.
    pub stats: Vec<ColumnStat>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhenomenonRow {
    pub phenomenon: String,
    pub paradigms: usize,
    /// Mean of paradigm accuracies, per column.
    pub accuracy: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub pair_id: String,
    pub paradigm: String,
    /// One entry per column; `None` when excluded.
    pub verdicts: Vec<Option<Verdict>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub tie_policy: TiePolicy,
    pub dataset_hash: Option<String>,
    pub columns: Vec<String>,
    pub reference: Option<String>,
    pub paradigms: Vec<ParadigmRow>,
    pub phenomena: Vec<PhenomenonRow>,
    /// Mean over paradigms of each column's accuracy.
    pub macro_average: Vec<Option<f64>>,
    /// Per column, `(paradigms with accuracy ≥ reference, comparable paradigms)`.
    /// `None` for the reference column itself or without a reference.
    pub at_least_reference: Vec<Option<(usize, usize)>>,
    /// Paradigms where some oracle component alone reaches the reference.
    pub either: Option<(usize, usize)>,
    pub pairs: Vec<PairVerdict>,
}

/// Paradigm-level disjunction: some component accuracy reaches the
/// reference accuracy on the whole paradigm.
pub fn either_paradigm(components: &[f64], reference: f64) -> bool {
    components.iter().any(|&a| a >= reference)
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize(
    scorers: &[ScorerHandle],
    pairs: &[MinimalPair],
    config: &SummaryConfig,
) -> Result<EvalReport> {
    let mut seen = HashSet::new();
    for s in scorers {
        if s.id == ORACLE_ID || !seen.insert(s.id.as_str()) {
            return Err(Error::Config(format!("duplicate or reserved scorer id {:?}", s.id)));
        }
    }
    let index_of = |id: &str| {
        scorers
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| Error::Config(format!("unknown scorer {id:?}")))
    };
    let reference = config.reference.as_deref().map(index_of).transpose()?;
    let oracle = config
        .oracle
        .iter()
        .map(|id| index_of(id))
        .collect::<Result<Vec<_>>>()?;
    if oracle.len() == 1 {
        return Err(Error::Config("an oracle needs at least two scorers".into()));
    }

    let mut columns: Vec<String> = scorers.iter().map(|s| s.id.clone()).collect();
    if !oracle.is_empty() {
        columns.push(ORACLE_ID.to_string());
    }

    let mut verdicts = Vec::with_capacity(pairs.len());
    let mut excluded = vec![0usize; scorers.len()];
    for pair in pairs {
        let mut row = Vec::with_capacity(columns.len());
        for (i, s) in scorers.iter().enumerate() {
            match forced_choice(s, pair) {
                Ok(v) => row.push(Some(v)),
                Err(Error::Excluded { .. }) => {
                    excluded[i] += 1;
                    row.push(None)
                }
                Err(e) => return Err(e),
            }
        }
        if !oracle.is_empty() {
            let parts: Option<Vec<Verdict>> = oracle.iter().map(|&i| row[i]).collect();
            row.push(parts.map(|p| oracle_verdict(&p)));
        }
        verdicts.push(PairVerdict {
            pair_id: pair.id.clone(),
            paradigm: pair.paradigm.clone(),
            verdicts: row,
        });
    }
    for (s, n) in scorers.iter().zip(&excluded) {
        if *n > 0 {
            log::warn!("{}: {n} of {} pairs excluded", s.id, pairs.len());
        }
    }

    let mut groups: BTreeMap<&str, (&str, Vec<&PairVerdict>)> = BTreeMap::new();
    for (pair, v) in pairs.iter().zip(&verdicts) {
        groups
            .entry(pair.paradigm.as_str())
            .or_insert((pair.phenomenon.as_str(), Vec::new()))
            .1
            .push(v);
    }

    let mut paradigms = Vec::with_capacity(groups.len());
    for (paradigm, (phenomenon, vs)) in &groups {
        let stats = (0..columns.len())
            .map(|c| {
                let judged: Vec<Verdict> = vs.iter().filter_map(|v| v.verdicts[c]).collect();
                let count = |k: Verdict| judged.iter().filter(|&&v| v == k).count();
                Ok(ColumnStat {
                    n: judged.len(),
                    correct: count(Verdict::Correct),
                    incorrect: count(Verdict::Incorrect),
                    tie: count(Verdict::Tie),
                    excluded: vs.len() - judged.len(),
                    accuracy: if judged.is_empty() {
                        None
                    } else {
                        Some(accuracy_of(&judged, config.tie_policy)?)
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        paradigms.push(ParadigmRow {
            phenomenon: phenomenon.to_string(),
            paradigm: paradigm.to_string(),
            pairs: vs.len(),
            stats,
        });
    }

    let mut by_phenomenon: BTreeMap<&str, Vec<&ParadigmRow>> = BTreeMap::new();
    for row in &paradigms {
        by_phenomenon.entry(row.phenomenon.as_str()).or_default().push(row);
    }
    let phenomena = by_phenomenon
        .into_iter()
        .map(|(ph, rows)| PhenomenonRow {
            phenomenon: ph.to_string(),
            paradigms: rows.len(),
            accuracy: (0..columns.len())
                .map(|c| mean(rows.iter().filter_map(|r| r.stats[c].accuracy)))
                .collect(),
        })
        .collect();

    let macro_average = (0..columns.len())
        .map(|c| mean(paradigms.iter().filter_map(|r| r.stats[c].accuracy)))
        .collect();

    let at_least_reference = (0..columns.len())
        .map(|c| {
            let r = reference.filter(|&r| r != c)?;
            let comparable: Vec<(f64, f64)> = paradigms
                .iter()
                .filter_map(|row| Some((row.stats[c].accuracy?, row.stats[r].accuracy?)))
                .collect();
            let wins = comparable.iter().filter(|(a, b)| a >= b).count();
            Some((wins, comparable.len()))
        })
        .collect();

    let either = match reference {
        Some(r) if !oracle.is_empty() => {
            let mut wins = 0;
            let mut total = 0;
            for row in &paradigms {
                let comps: Option<Vec<f64>> = oracle.iter().map(|&i| row.stats[i].accuracy).collect();
                if let (Some(comps), Some(refacc)) = (comps, row.stats[r].accuracy) {
                    total += 1;
                    if either_paradigm(&comps, refacc) {
                        wins += 1;
                    }
                }
            }
            Some((wins, total))
        }
        _ => None,
    };

    Ok(EvalReport {
        tie_policy: config.tie_policy,
        dataset_hash: config.dataset_hash.clone(),
        columns,
        reference: config.reference.clone(),
        paradigms,
        phenomena,
        macro_average,
        at_least_reference,
        either,
        pairs: verdicts,
    })
}

fn pct(a: Option<f64>) -> String {
    a.map_or_else(|| "NA".to_string(), |a| format!("{a:.2}"))
}

fn frac(f: Option<(usize, usize)>) -> String {
    f.map_or_else(|| "-".to_string(), |(a, b)| format!("{a}/{b}"))
}

impl EvalReport {
    pub fn column(&self, id: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == id)
    }

    pub fn paradigm(&self, paradigm: &str) -> Option<&ParadigmRow> {
        self.paradigms.iter().find(|r| r.paradigm == paradigm)
    }

    /// Accuracy of one column on one paradigm.
    pub fn accuracy(&self, column: &str, paradigm: &str) -> Option<f64> {
        let c = self.column(column)?;
        self.paradigm(paradigm)?.stats[c].accuracy
    }

    pub fn macro_of(&self, column: &str) -> Option<f64> {
        self.macro_average[self.column(column)?]
    }

    /// Per-paradigm accuracies followed by the average and, with a
    /// reference, the "≥ reference" counts.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# tie_policy: {}\n", self.tie_policy);
        if let Some(h) = &self.dataset_hash {
            let _ = writeln!(out, "# dataset_sha256: {h}");
        }
        let _ = writeln!(out, "phenomenon\tparadigm\tpairs\t{}", self.columns.join("\t"));
        for r in &self.paradigms {
            let accs: Vec<String> = r.stats.iter().map(|s| pct(s.accuracy)).collect();
            let _ = writeln!(out, "{}\t{}\t{}\t{}", r.phenomenon, r.paradigm, r.pairs, accs.join("\t"));
        }
        let total: usize = self.paradigms.iter().map(|r| r.pairs).sum();
        let avg: Vec<String> = self.macro_average.iter().map(|&a| pct(a)).collect();
        let _ = writeln!(out, "average\t\t{total}\t{}", avg.join("\t"));
        if let Some(reference) = &self.reference {
            let counts: Vec<String> = self.at_least_reference.iter().map(|&f| frac(f)).collect();
            let _ = writeln!(out, "at_least_{reference}\t\t\t{}", counts.join("\t"));
            if let Some(e) = self.either {
                let _ = writeln!(out, "either_at_least_{reference}\t\t\t{}", frac(Some(e)));
            }
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("Tie policy: {}.", self.tie_policy);
        if let Some(h) = &self.dataset_hash {
            let _ = write!(out, " Dataset SHA-256: `{h}`.");
        }
        out.push_str("\n\n| Phenomenon | Paradigm | Pairs |");
        for c in &self.columns {
            let _ = write!(out, " {c} |");
        }
        out.push_str("\n|---|---|---:|");
        out.push_str(&"---:|".repeat(self.columns.len()));
        out.push('\n');
        let mut last_ph = "";
        for r in &self.paradigms {
            let ph = if r.phenomenon == last_ph { "" } else { r.phenomenon.as_str() };
            last_ph = &r.phenomenon;
            let _ = write!(out, "| {ph} | {} | {} |", r.paradigm, r.pairs);
            for s in &r.stats {
                let _ = write!(out, " {} |", pct(s.accuracy));
            }
            out.push('\n');
        }
        out.push_str("| **Average** | | |");
        for &a in &self.macro_average {
            let _ = write!(out, " {} |", pct(a));
        }
        out.push('\n');
        if let Some(reference) = &self.reference {
            let _ = write!(out, "| **Fraction ≥ {reference}** | | |");
            for &f in &self.at_least_reference {
                let _ = write!(out, " {} |", frac(f));
            }
            out.push('\n');
            if let Some(e) = self.either {
                let _ = writeln!(out, "\nEither component ≥ {reference}: {}", frac(Some(e)));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per pair with every column's verdict.
    pub fn verdicts_tsv(&self) -> String {
        let mut out = format!("pair_id\tparadigm\t{}\n", self.columns.join("\t"));
        for p in &self.pairs {
            let vs: Vec<&str> = p
                .verdicts
                .iter()
                .map(|v| match v {
                    Some(Verdict::Correct) => "correct",
                    Some(Verdict::Incorrect) => "incorrect",
                    Some(Verdict::Tie) => "tie",
                    None => "excluded",
                })
                .collect();
            let _ = writeln!(out, "{}\t{}\t{}", p.pair_id, p.paradigm, vs.join("\t"));
        }
        out
    }
}
