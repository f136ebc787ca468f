use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::dataio::Source;
use crate::rules::parse_rulepack;

fn pair(id: &str, paradigm: &str) -> MinimalPair {
    MinimalPair::new(id, Source::Blimp, "ph", paradigm, "good one", "bad one")
}

/// A scorer giving `(good, bad)` scores per pair id.
fn table_scorer(id: &str, scores: &[(&str, f64, f64)]) -> ScorerHandle {
    let mut t = ScoreTable::new(id);
    for (pid, g, b) in scores {
        t.insert(format!("{pid}.good"), *g);
        t.insert(format!("{pid}.bad"), *b);
    }
    ScorerHandle::external(id, Arc::new(t))
}

#[test]
fn forced_choice_cases() {
    let p = pair("p", "x");
    let s = table_scorer("s", &[("p", -10.2, -12.4)]);
    assert_eq!(forced_choice(&s, &p).unwrap(), Verdict::Correct);
    let s = table_scorer("s", &[("p", -3.0, -3.0)]);
    assert_eq!(forced_choice(&s, &p).unwrap(), Verdict::Tie);
    let s = table_scorer("s", &[("p", -5.0, -1.0)]);
    assert_eq!(forced_choice(&s, &p).unwrap(), Verdict::Incorrect);
}

#[test]
fn rule_scorer_delegates() {
    let pack = Arc::new(parse_rulepack("rule x: contains(\"good\")\nrule y: contains(\"one\")").unwrap());
    let s = ScorerHandle::rule("rule", pack);
    assert_eq!(forced_choice(&s, &pair("p", "x")).unwrap(), Verdict::Correct);
    assert_eq!(forced_choice(&s, &pair("p", "y")).unwrap(), Verdict::Tie);
    assert!(matches!(forced_choice(&s, &pair("p", "z")), Err(Error::Excluded { .. })));
}

#[test]
fn accuracy_policies() {
    let pairs = vec![pair("a", "x"), pair("b", "x")];
    let all = table_scorer("s", &[("a", 1.0, 0.0), ("b", 2.0, 0.0)]);
    assert_eq!(accuracy(&all, &pairs, TiePolicy::Half).unwrap(), 100.0);
    let ties = table_scorer("s", &[("a", 1.0, 1.0), ("b", 0.0, 0.0)]);
    assert_eq!(accuracy(&ties, &pairs, TiePolicy::Half).unwrap(), 50.0);
    assert_eq!(accuracy(&ties, &pairs, TiePolicy::Zero).unwrap(), 0.0);
    assert!(accuracy(&all, &[], TiePolicy::Half).is_err());
}

#[test]
fn missing_scores_shrink_denominator() {
    let pairs = vec![pair("a", "x"), pair("b", "x"), pair("c", "x")];
    let s = table_scorer("s", &[("a", 1.0, 0.0), ("b", 0.0, 1.0)]);
    assert_eq!(accuracy(&s, &pairs, TiePolicy::Half).unwrap(), 50.0);
    let r = summarize(&[s], &pairs, &SummaryConfig::default()).unwrap();
    let st = &r.paradigms[0].stats[0];
    assert_eq!((st.n, st.excluded, r.paradigms[0].pairs), (2, 1, 3));
}

#[test]
fn oracle_is_a_disjunction() {
    use Verdict::*;
    assert_eq!(oracle_verdict(&[Correct, Incorrect]), Correct);
    assert_eq!(oracle_verdict(&[Incorrect, Incorrect]), Incorrect);
    assert_eq!(oracle_verdict(&[Tie, Incorrect]), Tie);
    let p = pair("p", "x");
    let a = table_scorer("a", &[("p", 1.0, 0.0)]);
    let b = table_scorer("b", &[("p", 0.0, 1.0)]);
    assert_eq!(oracle_pair(&[a.clone(), b], &p).unwrap(), Correct);
    assert!(oracle_pair(&[a], &p).is_err());
}

#[test]
fn single_scorer_single_paradigm() {
    let pairs = vec![pair("a", "x")];
    let s = table_scorer("s", &[("a", 1.0, 0.0)]);
    let r = summarize(&[s], &pairs, &SummaryConfig::default()).unwrap();
    assert_eq!(r.paradigms.len(), 1);
    assert_eq!(r.macro_of("s"), Some(100.0));
    assert!(r.to_tsv().starts_with("# tie_policy: half\n"));
    assert!(r.to_markdown().contains("Tie policy: half"));
}

#[test]
fn either_and_reference_counts() {
    // Paradigm x: word beats ref. Paradigm y: neither does, but pair-wise
    // the oracle does.
    let pairs = vec![pair("x1", "x"), pair("x2", "x"), pair("y1", "y"), pair("y2", "y")];
    let reference = table_scorer("ref", &[("x1", 0.0, 1.0), ("x2", 0.0, 1.0), ("y1", 1.0, 0.0), ("y2", 1.0, 0.0)]);
    let word = table_scorer("word", &[("x1", 1.0, 0.0), ("x2", 0.0, 1.0), ("y1", 1.0, 0.0), ("y2", 0.0, 1.0)]);
    let tag = table_scorer("tag", &[("x1", 0.0, 1.0), ("x2", 0.0, 1.0), ("y1", 0.0, 1.0), ("y2", 1.0, 0.0)]);
    let cfg = SummaryConfig {
        reference: Some("ref".into()),
        oracle: vec!["word".into(), "tag".into()],
        ..Default::default()
    };
    let r = summarize(&[reference, word, tag], &pairs, &cfg).unwrap();
    assert_eq!(r.columns, ["ref", "word", "tag", "oracle"]);
    assert_eq!(r.accuracy("oracle", "y"), Some(100.0));
    // tag ties the reference at 0% on x, which counts.
    assert_eq!(r.at_least_reference, [None, Some((1, 2)), Some((1, 2)), Some((2, 2))]);
    assert_eq!(r.either, Some((1, 2)));
    assert!(r.to_tsv().contains("either_at_least_ref\t\t\t1/2"));
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["either"], serde_json::json!([1, 2]));
}

#[test]
fn duplicate_scorer_ids_rejected() {
    let s = table_scorer("s", &[]);
    assert!(summarize(&[s.clone(), s], &[], &SummaryConfig::default()).is_err());
}

fn arb_scores() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-50i32..50, -50i32..50), 1..40)
        .prop_map(|v| v.into_iter().map(|(a, b)| (a as f64 / 4.0, b as f64 / 4.0)).collect())
}

fn scorer_from(id: &str, scores: &[(f64, f64)], f: impl Fn(f64) -> f64) -> ScorerHandle {
    let mut t = ScoreTable::new(id);
    for (i, (g, b)) in scores.iter().enumerate() {
        t.insert(format!("p{i}.good"), f(*g));
        t.insert(format!("p{i}.bad"), f(*b));
    }
    ScorerHandle::external(id, Arc::new(t))
}

fn pairs_for(n: usize, paradigms: usize) -> Vec<MinimalPair> {
    (0..n).map(|i| pair(&format!("p{i}"), &format!("par{}", i % paradigms))).collect()
}

proptest! {
    #[test]
    fn argmax_invariance(scores in arb_scores(), a in 0.01f64..10.0, b in -100.0f64..100.0) {
        let pairs = pairs_for(scores.len(), 3);
        let raw = scorer_from("s", &scores, |x| x);
        let affine = scorer_from("s", &scores, |x| a * x + b);
        let cubic = scorer_from("s", &scores, |x| x * x * x + x);
        for p in &pairs {
            let v = forced_choice(&raw, p).unwrap();
            prop_assert_eq!(forced_choice(&affine, p).unwrap(), v);
            prop_assert_eq!(forced_choice(&cubic, p).unwrap(), v);
        }
    }

    #[test]
    fn oracle_dominance(a in arb_scores(), b in arb_scores(), policy in prop::bool::ANY) {
        let n = a.len().min(b.len());
        let pairs = pairs_for(n, 4);
        let sa = scorer_from("a", &a[..n], |x| x);
        let sb = scorer_from("b", &b[..n], |x| x);
        let cfg = SummaryConfig {
            tie_policy: if policy { TiePolicy::Half } else { TiePolicy::Zero },
            oracle: vec!["a".into(), "b".into()],
            ..Default::default()
        };
        let r = summarize(&[sa, sb], &pairs, &cfg).unwrap();
        for row in &r.paradigms {
            let o = row.stats[2].accuracy.unwrap();
            prop_assert!(o >= row.stats[0].accuracy.unwrap());
            prop_assert!(o >= row.stats[1].accuracy.unwrap());
        }
    }

    #[test]
    fn swap_symmetry(scores in arb_scores()) {
        let scores: Vec<(f64, f64)> = scores.into_iter().filter(|(g, b)| g != b).collect();
        prop_assume!(!scores.is_empty());
        let pairs = pairs_for(scores.len(), 1);
        let fwd = scorer_from("s", &scores, |x| x);
        let swapped: Vec<(f64, f64)> = scores.iter().map(|&(g, b)| (b, g)).collect();
        let rev = scorer_from("s", &swapped, |x| x);
        let a = accuracy(&fwd, &pairs, TiePolicy::Zero).unwrap();
        let b = accuracy(&rev, &pairs, TiePolicy::Zero).unwrap();
        prop_assert!((a + b - 100.0).abs() < 1e-9);
    }

    #[test]
    fn denominator_integrity(scores in arb_scores(), drop in prop::collection::vec(prop::bool::ANY, 40)) {
        let pairs = pairs_for(scores.len(), 3);
        let mut t = ScoreTable::new("s");
        let mut dropped = 0;
        for (i, (g, b)) in scores.iter().enumerate() {
            if drop[i] { dropped += 1; continue; }
            t.insert(format!("p{i}.good"), *g);
            t.insert(format!("p{i}.bad"), *b);
        }
        let r = summarize(&[ScorerHandle::external("s", Arc::new(t))], &pairs, &SummaryConfig::default()).unwrap();
        let judged: usize = r.paradigms.iter().map(|p| p.stats[0].n).sum();
        let total: usize = r.paradigms.iter().map(|p| p.pairs).sum();
        prop_assert_eq!(total, pairs.len());
        prop_assert_eq!(judged, pairs.len() - dropped);
        for p in &r.paradigms {
            if let Some(a) = p.stats[0].accuracy {
                prop_assert!((0.0..=100.0).contains(&a));
            }
        }
    }
}
