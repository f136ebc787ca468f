//! Gradient acceptability: z-scored judgments, within-type variability and
//! correlations between judges over per-type statistics.

mod heatmap;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataio::{MinimalPair, SentenceType};
use crate::error::{Error, Result};
use crate::eval::{accuracy, ScorerHandle, TiePolicy};

pub use heatmap::render_heatmap;

/// Row id of the human judgments.
pub const HUMAN: &str = "human";

/// Population mean and standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn zscore_values(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.len() < 2 {
        return Err(Error::Stats("zero variance: fewer than two values".into()));
    }
    let (mean, std) = mean_std(xs);
    if std == 0.0 || !std.is_finite() {
        return Err(Error::Stats("zero variance".into()));
    }
    // Center first, then rescale the centered values by their own std, so
    // the output is normalized to rounding error even for large offsets.
    let centered: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let (m2, s2) = mean_std(&centered);
    Ok(centered.iter().map(|x| (x - m2) / s2).collect())
}

/// Population z-scores of a score map.
pub fn zscore(raw: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    let values: Vec<f64> = raw.values().copied().collect();
    let z = zscore_values(&values)?;
    Ok(raw.keys().cloned().zip(z).collect())
}

/// Judgments of several scorers over a shared list of sentence ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JudgmentMatrix {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// `cells[row][column]`; `None` where a scorer has no judgment.
    pub cells: Vec<Vec<Option<f64>>>,
}

impl JudgmentMatrix {
    pub fn new(columns: Vec<String>) -> Self {
        JudgmentMatrix {
            rows: Vec::new(),
            columns,
            cells: Vec::new(),
        }
    }

    /// Adds a row, reading each column's value from `scores`.
    pub fn push_row(&mut self, id: impl Into<String>, scores: &HashMap<String, f64>) -> Result<()> {
        let id = id.into();
        if self.rows.contains(&id) {
            return Err(Error::Config(format!("duplicate judgment row {id:?}")));
        }
        let row = self.columns.iter().map(|c| scores.get(c).copied()).collect();
        self.rows.push(id);
        self.cells.push(row);
        Ok(())
    }

    /// Builds the matrix over all LI-Adger sentences with the human row first.
    pub fn from_types(types: &[SentenceType]) -> Self {
        let mut human = HashMap::new();
        let mut columns = Vec::new();
        for t in types {
            for (s, z) in t.sentences.iter().zip(&t.human_z) {
                columns.push(s.id.clone());
                human.insert(s.id.clone(), *z);
            }
        }
        let mut m = JudgmentMatrix::new(columns);
        m.push_row(HUMAN, &human).expect("first row");
        m
    }

    pub fn row(&self, id: &str) -> Option<usize> {
        self.rows.iter().position(|r| r == id)
    }

    /// Z-scores every row over its present cells, except rows in `keep`,
    /// which are copied unchanged.
    pub fn zscored(&self, keep: &[&str]) -> Result<Self> {
        let mut out = self.clone();
        for (r, id) in self.rows.iter().enumerate() {
            if keep.contains(&id.as_str()) {
                continue;
            }
            let present: Vec<f64> = self.cells[r].iter().flatten().copied().collect();
            let z = zscore_values(&present)
                .map_err(|e| Error::Stats(format!("row {id}: {e}")))?;
            let mut z = z.into_iter();
            for cell in out.cells[r].iter_mut().filter(|c| c.is_some()) {
                *cell = z.next();
            }
        }
        Ok(out)
    }
}

/// Per-scorer mean and std over the eight judgments of one type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeStats {
    pub type_id: String,
    /// Indexed like the matrix rows; `None` when a cell is missing.
    pub mean: Vec<Option<f64>>,
    pub std: Vec<Option<f64>>,
}

pub fn type_stats(matrix: &JudgmentMatrix, types: &[SentenceType]) -> Vec<TypeStats> {
    let col: HashMap<&str, usize> = matrix
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    types
        .iter()
        .map(|t| {
            let mut mean = Vec::with_capacity(matrix.rows.len());
            let mut std = Vec::with_capacity(matrix.rows.len());
            for row in &matrix.cells {
                let vals: Option<Vec<f64>> = t
                    .sentences
                    .iter()
                    .map(|s| col.get(s.id.as_str()).and_then(|&c| row[c]))
                    .collect();
                match vals {
                    Some(v) if !v.is_empty() => {
                        let (m, s) = mean_std(&v);
                        mean.push(Some(m));
                        std.push(Some(s));
                    }
                    _ => {
                        mean.push(None);
                        std.push(None);
                    }
                }
            }
            TypeStats {
                type_id: t.type_id.clone(),
                mean,
                std,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variability {
    pub scorer: String,
    /// Mean over types of the within-type population std.
    pub avg_within_type_std: Option<f64>,
    pub types_used: usize,
    pub types_excluded: usize,
}

pub fn type_variability(matrix: &JudgmentMatrix, types: &[SentenceType]) -> Vec<Variability> {
    let stats = type_stats(matrix, types);
    matrix
        .rows
        .iter()
        .enumerate()
        .map(|(r, id)| {
            let stds: Vec<f64> = stats.iter().filter_map(|t| t.std[r]).collect();
            let excluded = stats.len() - stds.len();
            if excluded > 0 {
                log::warn!("{id}: {excluded} sentence types with missing judgments excluded");
            }
            Variability {
                scorer: id.clone(),
                avg_within_type_std: (!stds.is_empty())
                    .then(|| stds.iter().sum::<f64>() / stds.len() as f64),
                types_used: stds.len(),
                types_excluded: excluded,
            }
        })
        .collect()
}

pub fn variability_tsv(rows: &[Variability]) -> String {
    let mut out = String::from("scorer\tavg_within_type_std\ttypes_used\ttypes_excluded\n");
    for v in rows {
        let value = v
            .avg_within_type_std
            .map_or_else(|| "NA".to_string(), |x| format!("{x:.6}"));
        let _ = writeln!(out, "{}\t{value}\t{}\t{}", v.scorer, v.types_used, v.types_excluded);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    TypeMeans,
    TypeStds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Pearson,
    Spearman,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pearson" => Ok(Method::Pearson),
            "spearman" => Ok(Method::Spearman),
            other => Err(Error::Config(format!("unknown correlation method {other:?}"))),
        }
    }
}

/// Pearson r; `None` when either vector has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    if x.len() < 2 {
        return None;
    }
    let (mx, _) = mean_std(x);
    let (my, _) = mean_std(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Relative distance (to the largest magnitude) below which values tie.
const RANK_TIE_TOL: f64 = 1e-9;

/// Ranks starting at 1, ties sharing their average rank.
///
/// Values closer than `RANK_TIE_TOL` times the largest magnitude count as
/// tied, so rounding noise in derived statistics cannot reorder them.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let tol = RANK_TIE_TOL * x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] - x[idx[i]] <= tol {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&ranks(x), &ranks(y))
}

/// Square, symmetric matrix of correlations between judges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub statistic: Statistic,
    pub method: Method,
    /// `None` marks an undefined cell (zero-variance statistic vector).
    pub cells: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.labels.iter().position(|l| l == a)?;
        let j = self.labels.iter().position(|l| l == b)?;
        self.cells[i][j]
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("scorer\t{}\n", self.labels.join("\t"));
        for (label, row) in self.labels.iter().zip(&self.cells) {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}")))
                .collect();
            let _ = writeln!(out, "{label}\t{}", cells.join("\t"));
        }
        out
    }

    pub fn to_svg(&self, title: &str) -> Result<String> {
        render_heatmap(&self.cells, &self.labels, title)
    }
}

/// Correlates the per-type statistic of every pair of matrix rows over the
/// included types (all types when `inclusion` is `None`).
pub fn correlation_matrix(
    matrix: &JudgmentMatrix,
    types: &[SentenceType],
    statistic: Statistic,
    inclusion: Option<&[String]>,
    method: Method,
) -> Result<CorrelationMatrix> {
    let selected: Vec<&SentenceType> = match inclusion {
        Some(ids) => {
            if ids.is_empty() {
                return Err(Error::Config("empty type inclusion list".into()));
            }
            ids.iter()
                .map(|id| {
                    types
                        .iter()
                        .find(|t| &t.type_id == id)
                        .ok_or_else(|| Error::Config(format!("unknown sentence type {id:?}")))
                })
                .collect::<Result<_>>()?
        }
        None => types.iter().collect(),
    };
    if selected.is_empty() {
        return Err(Error::Empty("no sentence types to correlate"));
    }
    let owned: Vec<SentenceType> = selected.into_iter().cloned().collect();
    let stats = type_stats(matrix, &owned);
    let vectors: Vec<Vec<f64>> = (0..matrix.rows.len())
        .map(|r| {
            stats
                .iter()
                .map(|t| {
                    let v = match statistic {
                        Statistic::TypeMeans => t.mean[r],
                        Statistic::TypeStds => t.std[r],
                    };
                    v.ok_or_else(|| {
                        Error::Stats(format!(
                            "{}: incomplete judgments for type {}",
                            matrix.rows[r], t.type_id
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let corr = match method {
        Method::Pearson => pearson,
        Method::Spearman => spearman,
    };
    let n = vectors.len();
    let mut cells = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let r = if i == j {
                // Defined only when the vector has variance.
                corr(&vectors[i], &vectors[i]).map(|_| 1.0)
            } else {
                corr(&vectors[i], &vectors[j])
            };
            cells[i][j] = r;
            cells[j][i] = r;
        }
    }
    Ok(CorrelationMatrix {
        labels: matrix.rows.clone(),
        statistic,
        method,
        cells,
    })
}

/// Forced-choice accuracy of each scorer on the LI-Adger pairs, as bar data.
pub fn li_adger_accuracy(
    scorers: &[ScorerHandle],
    pairs: &[MinimalPair],
    policy: TiePolicy,
) -> Result<Vec<(String, f64)>> {
    scorers
        .iter()
        .map(|s| Ok((s.id.clone(), accuracy(s, pairs, policy)?)))
        .collect()
}

pub fn accuracy_bars_tsv(rows: &[(String, f64)]) -> String {
    let mut out = String::from("scorer\taccuracy\n");
    for (id, acc) in rows {
        let _ = writeln!(out, "{id}\t{acc:.2}");
    }
    out
}

#[cfg(test)]
mod tests;
