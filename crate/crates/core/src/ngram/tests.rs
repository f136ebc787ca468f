use proptest::prelude::*;

use super::*;

fn corpus(text: &str) -> TrainingCorpus {
    TrainingCorpus::from_text("toy", text)
}

fn sent(text: &str) -> Sentence {
    Sentence::new("s", text)
}

const TOY: &str = "the dog runs\nthe dogs run\na dog sleeps\nthe cat runs\na cat sees the dog\n";

/// Brute-force reference: counts n-grams by scanning the raw corpus for every
/// query, then applies the smoothing formulas directly. Shares no code with
/// the model.
struct Oracle {
    order: usize,
    lines: Vec<Vec<String>>,
    vocab: Vec<String>,
    k: f64,
    alpha: f64,
}

impl Oracle {
    fn new(text: &str, order: usize, k: f64, alpha: f64) -> Self {
        let lines: Vec<Vec<String>> = text
            .lines()
            .map(|l| l.split_whitespace().map(String::from).collect::<Vec<_>>())
            .filter(|l| !l.is_empty())
            .collect();
        let mut vocab: Vec<String> = lines.iter().flatten().cloned().collect();
        vocab.sort();
        vocab.dedup();
        vocab.push("<unk>".into());
        vocab.push("</s>".into());
        Oracle {
            order,
            lines,
            vocab,
            k,
            alpha,
        }
    }

    fn padded(&self, line: &[String]) -> Vec<String> {
        let mut p = vec!["<s>".to_string(); self.order - 1];
        p.extend(line.iter().cloned());
        p.push("</s>".into());
        p
    }

    /// (count of `hist + w`, count of `hist` as a history).
    fn counts(&self, hist: &[String], w: &str) -> (f64, f64) {
        let (mut joint, mut marg) = (0.0, 0.0);
        for line in &self.lines {
            let p = self.padded(line);
            for i in (self.order - 1)..p.len() {
                if p[i - hist.len()..i] == *hist {
                    marg += 1.0;
                    if p[i] == w {
                        joint += 1.0;
                    }
                }
            }
        }
        (joint, marg)
    }

    fn add_k(&self, hist: &[String], w: &str) -> f64 {
        let (j, m) = self.counts(hist, w);
        (j + self.k) / (m + self.k * self.vocab.len() as f64)
    }

    fn backoff(&self, hist: &[String], w: &str) -> f64 {
        if hist.is_empty() {
            return self.add_k(hist, w);
        }
        let (_, m) = self.counts(hist, "");
        if m == 0.0 {
            return self.backoff(&hist[1..], w);
        }
        let score = |v: &str| {
            let (j, m) = self.counts(hist, v);
            if j > 0.0 {
                j / m
            } else {
                self.alpha * self.backoff(&hist[1..], v)
            }
        };
        let z: f64 = self.vocab.iter().map(|v| score(v)).sum();
        score(w) / z
    }

    fn chain(&self, s: &str, backoff: bool) -> f64 {
        let toks: Vec<String> = s.split_whitespace().map(String::from).collect();
        let p = self.padded(&toks);
        let h = self.order - 1;
        (h..p.len())
            .map(|i| {
                let hist = &p[i - h..i];
                if backoff {
                    self.backoff(hist, &p[i])
                } else {
                    self.add_k(hist, &p[i])
                }
                .ln()
            })
            .sum()
    }
}

#[test]
fn mle_limit_on_closed_corpus() {
    let m = train_ngram(&corpus("a b\na b"), 2, Level::Word, SmoothingConfig::add_k(1e-9), None).unwrap();
    assert!((m.conditional_prob(&["a"], "b") - 1.0).abs() < 1e-8);
}

#[test]
fn chain_rule_hand_computed() {
    // Predictable vocabulary {a, b, <unk>, </s>}; every transition seen 2 of 2 times.
    let k = 0.5;
    let m = train_ngram(&corpus("a b\na b"), 2, Level::Word, SmoothingConfig::add_k(k), None).unwrap();
    let step: f64 = (2.0 + k) / (2.0 + 4.0 * k);
    let expected = 3.0 * step.ln();
    assert!((m.logprob(&sent("a b")).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn add_k_matches_brute_force() {
    for order in 1..=3 {
        let oracle = Oracle::new(TOY, order, 0.1, 0.4);
        let mut cfg = SmoothingConfig::add_k(0.1);
        cfg.unk_threshold = 0;
        let m = train_ngram(&corpus(TOY), order, Level::Word, cfg, None).unwrap();
        for s in ["the dog runs", "a cat runs", "dog the", "the zebra runs"] {
            let s_model = s.replace("zebra", "<unk>");
            let got = m.logprob(&sent(s)).unwrap();
            let want = oracle.chain(&s_model, false);
            assert!((got - want).abs() < 1e-9, "order {order} {s}: {got} vs {want}");
        }
    }
}

#[test]
fn backoff_matches_brute_force() {
    for order in 1..=4 {
        let oracle = Oracle::new(TOY, order, 1.0, 0.4);
        let cfg = SmoothingConfig {
            unk_threshold: 0,
            ..SmoothingConfig::default()
        };
        let m = train_ngram(&corpus(TOY), order, Level::Word, cfg, None).unwrap();
        for s in ["the dog runs", "a cat sees the dog", "runs the", "the <unk> dog"] {
            let got = m.logprob(&sent(s)).unwrap();
            let want = oracle.chain(s, true);
            assert!((got - want).abs() < 1e-9, "order {order} {s}: {got} vs {want}");
        }
    }
}

#[test]
fn unigram_hand_computed() {
    // Events of "a a b": a, a, b, </s>; N = 4.
    let m = train_ngram(&corpus("a a b"), 2, Level::Word, SmoothingConfig::add_k(1e-12), None).unwrap();
    let expected = (2.0f64 / 4.0).ln() + (1.0f64 / 4.0).ln() + (1.0f64 / 4.0).ln();
    assert!((m.unigram_logprob(&sent("a b")).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn single_type_vocabulary_has_two_transitions() {
    let k = 1.0;
    let m = train_ngram(&corpus("a\na"), 2, Level::Word, SmoothingConfig::add_k(k), None).unwrap();
    assert_eq!(m.vocab_size(), 1);
    // P(a | <s>) and P(</s> | a), each (2 + k) / (2 + 3k).
    let expected = 2.0 * ((2.0 + k) / (2.0 + 3.0 * k)).ln();
    assert!((m.logprob(&sent("a")).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn oov_sentence_is_finite() {
    let m = train_ngram(&corpus(TOY), 3, Level::Word, SmoothingConfig::default(), None).unwrap();
    let lp = m.logprob(&sent("zyzzyva quux frobnicate")).unwrap();
    assert!(lp.is_finite() && lp < 0.0);
}

#[test]
fn order_one_identities() {
    for cfg in [SmoothingConfig::default(), SmoothingConfig::add_k(0.3)] {
        let m = train_ngram(&corpus(TOY), 1, Level::Word, cfg, None).unwrap();
        for s in ["the dog runs", "a cat", "sees sees sees"] {
            let s = sent(s);
            assert_eq!(m.logprob(&s).unwrap(), m.unigram_logprob(&s).unwrap());
            assert_eq!(m.slor(&s).unwrap(), 0.0);
        }
    }
}

#[test]
fn slor_hand_computed() {
    let m = train_ngram(&corpus(TOY), 3, Level::Word, SmoothingConfig::default(), None).unwrap();
    let s = sent("the cat runs");
    let expected = (m.logprob(&s).unwrap() - m.unigram_logprob(&s).unwrap()) / 3.0;
    assert!((m.slor(&s).unwrap() - expected).abs() < 1e-9);
}

#[test]
fn slor_of_empty_sentence_errors() {
    let m = train_ngram(&corpus(TOY), 2, Level::Word, SmoothingConfig::default(), None).unwrap();
    assert!(m.slor(&sent("")).is_err());
}

#[test]
fn empty_vocabulary_is_rejected() {
    let cfg = SmoothingConfig {
        unk_threshold: 10,
        ..SmoothingConfig::default()
    };
    let m = train_ngram(&corpus("a b\nc"), 2, Level::Word, cfg, None).unwrap();
    assert_eq!(m.vocab_size(), 0);
    assert!(m.unigram_logprob(&sent("a")).is_err());
}

#[test]
fn training_errors() {
    assert!(matches!(
        train_ngram(&corpus(""), 2, Level::Word, SmoothingConfig::default(), None),
        Err(Error::Training(_))
    ));
    assert!(matches!(
        train_ngram(&corpus(TOY), 2, Level::Tag, SmoothingConfig::default(), None),
        Err(Error::Config(_))
    ));
    assert!(train_ngram(&corpus(TOY), 0, Level::Word, SmoothingConfig::default(), None).is_err());
    assert!(train_ngram(&corpus(TOY), 2, Level::Word, SmoothingConfig::add_k(0.0), None).is_err());
}

#[test]
fn tag_model_needs_tags() {
    use crate::postag::{train_tagger, TrainConfig};
    let tagged: Vec<(Vec<String>, Vec<String>)> = (0..30)
        .map(|_| {
            (
                vec!["the".into(), "dog".into(), "runs".into()],
                vec!["DT".into(), "NN".into(), "VBZ".into()],
            )
        })
        .collect();
    let (tagger, _) = train_tagger(
        tagged.iter().map(|(a, b)| (a.as_slice(), b.as_slice())),
        &TrainConfig::default(),
    )
    .unwrap();
    let m = train_ngram(&corpus(TOY), 3, Level::Tag, SmoothingConfig::default(), Some(&tagger)).unwrap();
    let s = sent("the dog runs");
    assert!(matches!(m.logprob(&s), Err(Error::Usage(_))));
    let tagged_s = tagger.tag(&s);
    assert!(m.logprob(&tagged_s).unwrap().is_finite());
    assert!(m.predictable_tokens().any(|t| t == "NN"));
}

#[test]
fn dump_roundtrip_preserves_scores() {
    let m = train_ngram(&corpus(TOY), 3, Level::Word, SmoothingConfig::default(), None).unwrap();
    let mut buf = Vec::new();
    m.write_to(&mut buf).unwrap();
    let back = NGramModel::read_from(buf.as_slice()).unwrap();
    assert_eq!(back, m);
    let mut again = Vec::new();
    back.write_to(&mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn dump_rejects_garbage() {
    assert!(NGramModel::read_from("nope\n".as_bytes()).is_err());
    let text = format!("{MODEL_HEADER}\norder\t2\nlevel\tword\n");
    assert!(NGramModel::read_from(text.as_bytes()).is_err());
}

fn toy_models() -> Vec<NGramModel> {
    let mut out = Vec::new();
    for order in 1..=4 {
        for cfg in [
            SmoothingConfig::default(),
            SmoothingConfig::add_k(0.05),
            SmoothingConfig {
                alpha: 1.0,
                unk_threshold: 0,
                ..SmoothingConfig::default()
            },
        ] {
            out.push(train_ngram(&corpus(TOY), order, Level::Word, cfg, None).unwrap());
        }
    }
    out
}

proptest! {
    #[test]
    fn next_token_distribution_sums_to_one(which in 0usize..12, ctx in prop::collection::vec(0usize..9, 0..4)) {
        let models = toy_models();
        let m = &models[which];
        let words = ["the", "dog", "dogs", "a", "cat", "runs", "run", "sees", "nope"];
        let context: Vec<&str> = ctx.iter().map(|&i| words[i]).collect();
        let total: f64 = m.predictable_tokens().map(|t| m.conditional_prob(&context, t)).sum();
        prop_assert!((total - 1.0).abs() < 1e-6, "sum {}", total);
    }

    #[test]
    fn slor_identity(words in prop::collection::vec(prop::sample::select(vec!["the", "dog", "cat", "runs", "a", "sees", "xyz"]), 1..8)) {
        for m in toy_models() {
            let s = sent(&words.join(" "));
            let lhs = m.slor(&s).unwrap();
            let rhs = (m.logprob(&s).unwrap() - m.unigram_logprob(&s).unwrap()) / s.len() as f64;
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn appending_a_token_lowers_prefix_logprob(
        words in prop::collection::vec(prop::sample::select(vec!["the", "dog", "cat", "runs", "a", "xyz"]), 0..6),
        extra in prop::sample::select(vec!["the", "dog", "cat", "runs", "a", "xyz"]),
    ) {
        for m in toy_models() {
            let short = sent(&words.join(" "));
            let mut longer = words.clone();
            longer.push(extra);
            let long = sent(&longer.join(" "));
            prop_assert!(m.prefix_logprob(&long).unwrap() < m.prefix_logprob(&short).unwrap());
        }
    }
}

#[test]
fn all_observed_contexts_are_normalized() {
    for m in toy_models() {
        for ctx in m.observed_contexts() {
            let total: f64 = m.predictable_tokens().map(|t| m.conditional_prob(&ctx, t)).sum();
            assert!((total - 1.0).abs() < 1e-6, "{ctx:?}: {total}");
        }
    }
}
