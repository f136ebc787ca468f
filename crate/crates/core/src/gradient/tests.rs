use proptest::prelude::*;

use super::*;
use crate::dataio::Condition;
use crate::text::Sentence;

fn types(n: usize) -> Vec<SentenceType> {
    (0..n)
        .map(|k| SentenceType {
            type_id: format!("t{k}.g"),
            phenomenon: format!("t{k}"),
            condition: Condition::Grammatical,
            sentences: (0..8)
                .map(|i| Sentence::new(format!("t{k}.g.{i}"), format!("s {k} {i}")))
                .collect(),
            human_z: (0..8).map(|i| (k * 8 + i) as f64 * 0.1).collect(),
        })
        .collect()
}

fn row_from(types: &[SentenceType], f: impl Fn(usize, usize) -> f64) -> HashMap<String, f64> {
    let mut m = HashMap::new();
    for (k, t) in types.iter().enumerate() {
        for (i, s) in t.sentences.iter().enumerate() {
            m.insert(s.id.clone(), f(k, i));
        }
    }
    m
}

#[test]
fn zscore_hand_values() {
    let raw: BTreeMap<String, f64> = [("a", 1.0), ("b", 2.0), ("c", 3.0)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let z = zscore(&raw).unwrap();
    // sqrt(3/2)
    assert!((z["a"] + 1.224744871391589).abs() < 1e-12);
    assert!(z["b"].abs() < 1e-12);
    assert!((z["c"] - 1.224744871391589).abs() < 1e-12);
    let again = zscore(&z).unwrap();
    for k in z.keys() {
        assert!((again[k] - z[k]).abs() < 1e-9);
    }
}

#[test]
fn zscore_zero_variance() {
    let raw: BTreeMap<String, f64> = [("a".to_string(), 4.0), ("b".to_string(), 4.0)].into();
    let err = zscore(&raw).unwrap_err();
    assert!(err.to_string().contains("zero variance"));
    assert!(zscore(&BTreeMap::new()).is_err());
}

#[test]
fn identical_scores_within_type_have_zero_variability() {
    let ts = types(5);
    let mut m = JudgmentMatrix::from_types(&ts);
    m.push_row("flat", &row_from(&ts, |k, _| k as f64)).unwrap();
    let v = type_variability(&m.zscored(&[HUMAN]).unwrap(), &ts);
    assert_eq!(v[1].scorer, "flat");
    assert!(v[1].avg_within_type_std.unwrap().abs() < 1e-12);
}

#[test]
fn variability_hand_value() {
    // One type; the human row is used as given. Values 0..0.7 step 0.1
    // have population std 0.1 * sqrt(63/12).
    let ts = types(1);
    let m = JudgmentMatrix::from_types(&ts);
    let v = type_variability(&m, &ts);
    let expected = 0.1 * (63.0f64 / 12.0).sqrt();
    assert!((v[0].avg_within_type_std.unwrap() - expected).abs() < 1e-12);
}

#[test]
fn missing_cells_exclude_type() {
    let ts = types(3);
    let mut m = JudgmentMatrix::from_types(&ts);
    let mut partial = row_from(&ts, |k, i| (k + i) as f64);
    partial.remove("t1.g.3");
    m.push_row("lm", &partial).unwrap();
    let v = type_variability(&m, &ts);
    assert_eq!((v[1].types_used, v[1].types_excluded), (2, 1));
    assert!(correlation_matrix(&m, &ts, Statistic::TypeMeans, None, Method::Pearson).is_err());
}

#[test]
fn correlation_cases() {
    let ts = types(6);
    let mut m = JudgmentMatrix::from_types(&ts);
    m.push_row("neg", &row_from(&ts, |k, i| -((k * 8 + i) as f64))).unwrap();
    m.push_row("const", &row_from(&ts, |_, _| 1.0)).unwrap();
    let c = correlation_matrix(&m, &ts, Statistic::TypeMeans, None, Method::Pearson).unwrap();
    assert!((c.get(HUMAN, HUMAN).unwrap() - 1.0).abs() < 1e-12);
    assert!((c.get(HUMAN, "neg").unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(c.get(HUMAN, "const"), None);
    assert_eq!(c.get("const", "const"), None);
    assert!(c.to_tsv().contains("NA"));
    assert!(c.to_svg("means").unwrap().contains("url(#hatch)"));

    let only: Vec<String> = vec!["t0.g".into(), "t2.g".into(), "t4.g".into()];
    let c = correlation_matrix(&m, &ts, Statistic::TypeMeans, Some(&only), Method::Spearman).unwrap();
    assert!((c.get(HUMAN, "neg").unwrap() + 1.0).abs() < 1e-12);
    assert!(correlation_matrix(&m, &ts, Statistic::TypeMeans, Some(&[]), Method::Pearson).is_err());
    let bad = vec!["nope".to_string()];
    assert!(correlation_matrix(&m, &ts, Statistic::TypeMeans, Some(&bad), Method::Pearson).is_err());
}

#[test]
fn ranks_average_ties() {
    assert_eq!(ranks(&[10.0, 20.0, 10.0, 5.0]), [2.5, 4.0, 2.5, 1.0]);
    assert_eq!(ranks(&[0.3, 0.1 + 0.2, -1.0]), [2.5, 2.5, 1.0]);
    assert_eq!(ranks(&[1e-12, 2e-12]), [1.0, 2.0]);
}

#[test]
fn accuracy_bars_on_single_pair() {
    use crate::dataio::{MinimalPair, Source};
    use crate::scorefile::ScoreTable;
    use std::sync::Arc;
    let pair = MinimalPair::new("g|b", Source::LiAdger, "p", "p", "a b", "b a");
    for (g, b, want) in [(1.0, 0.0, 100.0), (0.0, 0.0, 50.0), (0.0, 1.0, 0.0)] {
        let mut t = ScoreTable::new(HUMAN);
        t.insert("g", g);
        t.insert("b", b);
        let s = ScorerHandle::human_z(HUMAN, Arc::new(t));
        let bars = li_adger_accuracy(&[s], std::slice::from_ref(&pair), TiePolicy::Half).unwrap();
        assert_eq!(bars[0].1, want);
    }
    assert_eq!(accuracy_bars_tsv(&[("h".into(), 50.0)]), "scorer\taccuracy\nh\t50.00\n");
}

fn arb_rows() -> impl Strategy<Value = Vec<Vec<f64>>> {
    // Three scorers over 4 types × 8 sentences.
    prop::collection::vec(prop::collection::vec(-20.0f64..20.0, 32), 3)
}

fn build(ts: &[SentenceType], rows: &[Vec<f64>], scale: f64) -> JudgmentMatrix {
    let mut m = JudgmentMatrix::from_types(ts);
    for (r, vals) in rows.iter().enumerate() {
        m.push_row(format!("lm{r}"), &row_from(ts, |k, i| scale * vals[k * 8 + i])).unwrap();
    }
    m
}

proptest! {
    #[test]
    fn zscored_rows_are_normalized(rows in arb_rows(), offset in -1e4f64..1e4, scale in 1e-3f64..1e3) {
        let ts = types(4);
        let shifted: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| scale * x + offset).collect()).collect();
        let z = build(&ts, &shifted, 1.0).zscored(&[]).unwrap();
        for row in &z.cells {
            let vals: Vec<f64> = row.iter().flatten().copied().collect();
            let (m, s) = mean_std(&vals);
            prop_assert!(m.abs() < 1e-9, "mean {}", m);
            prop_assert!((s - 1.0).abs() < 1e-9, "std {}", s);
        }
    }

    #[test]
    fn positive_scale_invariance(rows in arb_rows(), c in 1e-3f64..1e3) {
        let ts = types(4);
        let a = build(&ts, &rows, 1.0).zscored(&[HUMAN]).unwrap();
        let b = build(&ts, &rows, c).zscored(&[HUMAN]).unwrap();
        for (ra, rb) in a.cells.iter().zip(&b.cells) {
            for (x, y) in ra.iter().zip(rb) {
                prop_assert!((x.unwrap() - y.unwrap()).abs() < 1e-9);
            }
        }
        for (va, vb) in type_variability(&a, &ts).iter().zip(type_variability(&b, &ts)) {
            prop_assert!((va.avg_within_type_std.unwrap() - vb.avg_within_type_std.unwrap()).abs() < 1e-9);
        }
        for stat in [Statistic::TypeMeans, Statistic::TypeStds] {
            let ca = correlation_matrix(&a, &ts, stat, None, Method::Pearson).unwrap();
            let cb = correlation_matrix(&b, &ts, stat, None, Method::Pearson).unwrap();
            for (x, y) in ca.cells.iter().flatten().zip(cb.cells.iter().flatten()) {
                match (x, y) {
                    (Some(x), Some(y)) => prop_assert!((x - y).abs() < 1e-9),
                    (None, None) => {}
                    _ => prop_assert!(false, "definedness changed"),
                }
            }
        }
        // Forced-choice verdicts between any two sentences are unchanged.
        for r in 1..a.rows.len() {
            for j in 1..a.columns.len() {
                let (x0, x1) = (a.cells[r][j - 1].unwrap(), a.cells[r][j].unwrap());
                let (y0, y1) = (b.cells[r][j - 1].unwrap(), b.cells[r][j].unwrap());
                prop_assert_eq!(crate::eval::verdict_from_scores(x0, x1), crate::eval::verdict_from_scores(y0, y1));
            }
        }
    }

    #[test]
    fn correlation_matrix_shape(rows in arb_rows(), spear in prop::bool::ANY) {
        let ts = types(4);
        let m = build(&ts, &rows, 1.0).zscored(&[HUMAN]).unwrap();
        let method = if spear { Method::Spearman } else { Method::Pearson };
        for stat in [Statistic::TypeMeans, Statistic::TypeStds] {
            let c = correlation_matrix(&m, &ts, stat, None, method).unwrap();
            let n = c.labels.len();
            for i in 0..n {
                if let Some(d) = c.cells[i][i] {
                    prop_assert_eq!(d, 1.0);
                }
                for j in 0..n {
                    prop_assert_eq!(c.cells[i][j], c.cells[j][i]);
                    if let Some(v) = c.cells[i][j] {
                        prop_assert!((-1.0..=1.0).contains(&v));
                    }
                }
            }
        }
    }
}
