use std::collections::BTreeMap;

use serde::Serialize;

use super::ast::*;
use crate::dataio::MinimalPair;
use crate::text::{is_alphabetic, is_punctuation, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleVerdict {
    ChooseGood,
    ChooseBad,
    Abstain,
}

/// The positions of one sentence as the rule sees them.
struct View<'a> {
    words: Vec<&'a str>,
}

impl<'a> View<'a> {
    fn new(s: &'a Sentence, positions: Positions) -> Self {
        let words = s
            .tokens
            .iter()
            .map(String::as_str)
            .filter(|t| positions == Positions::Tokens || !is_punctuation(t))
            .collect();
        View { words }
    }

    fn first_of(&self, list: &[String]) -> Option<usize> {
        self.words.iter().position(|w| list.iter().any(|x| x == w))
    }

    fn last_of(&self, list: &[String]) -> Option<usize> {
        self.words.iter().rposition(|w| list.iter().any(|x| x == w))
    }

    fn resolve(&self, r: &WordRef, cursor: Option<usize>) -> Option<usize> {
        let n = self.words.len() as i64;
        let idx = match r {
            WordRef::At(i) if *i > 0 => *i as i64 - 1,
            WordRef::At(i) => n + *i as i64,
            WordRef::After { anchors, offset } => self.first_of(anchors)? as i64 + *offset as i64,
            WordRef::Cursor(d) => cursor? as i64 + *d as i64,
        };
        (0..n).contains(&idx).then_some(idx as usize)
    }

    fn word(&self, r: &WordRef, cursor: Option<usize>) -> Option<&'a str> {
        self.resolve(r, cursor).map(|i| self.words[i])
    }

    fn num(&self, e: &NumExpr) -> i64 {
        match e {
            NumExpr::Lit(n) => *n,
            NumExpr::CountEnds(suffixes) => self
                .words
                .iter()
                .filter(|w| is_alphabetic(w) && suffixes.iter().any(|s| w.ends_with(s.as_str())))
                .count() as i64,
            NumExpr::CountStarts(prefixes) => self
                .words
                .iter()
                .filter(|w| prefixes.iter().any(|p| w.starts_with(p.as_str())))
                .count() as i64,
            NumExpr::Count(list) => self
                .words
                .iter()
                .filter(|w| list.iter().any(|x| x == *w))
                .count() as i64,
            NumExpr::IndexOf(list) => self.first_of(list).map_or(0, |i| i as i64 + 1),
            NumExpr::Length => self.words.len() as i64,
        }
    }

    fn holds(&self, p: &Predicate, cursor: Option<usize>) -> bool {
        let any_eq = |w: &str, list: &[String]| list.iter().any(|x| x == w);
        match p {
            Predicate::Is(r, list) => self.word(r, cursor).is_some_and(|w| any_eq(w, list)),
            Predicate::Ends(r, list) => self
                .word(r, cursor)
                .is_some_and(|w| list.iter().any(|s| w.ends_with(s.as_str()))),
            Predicate::Starts(r, list) => self
                .word(r, cursor)
                .is_some_and(|w| list.iter().any(|s| w.starts_with(s.as_str()))),
            Predicate::Repeats(r) => self
                .resolve(r, cursor)
                .is_some_and(|i| self.words[..i].contains(&self.words[i])),
            Predicate::Contains(list) => self.first_of(list).is_some(),
            Predicate::ContainsPrefix(list) => self
                .words
                .iter()
                .any(|w| list.iter().any(|p| w.starts_with(p.as_str()))),
            Predicate::ContainsSubstring(s) => self.words.join(" ").contains(s.as_str()),
            Predicate::Adjacent(a, b) => self
                .words
                .windows(2)
                .any(|w| any_eq(w[0], a) && any_eq(w[1], b)),
            Predicate::Precedes(a, b) => match (self.first_of(a), self.first_of(b)) {
                (Some(i), Some(j)) => i < j,
                _ => false,
            },
            Predicate::Compare(l, op, r) => op.apply(self.num(l), self.num(r)),
            Predicate::Even(e) => self.num(e) % 2 == 0,
            Predicate::Odd(e) => self.num(e) % 2 != 0,
            Predicate::Exists(body) => (0..self.words.len()).any(|i| self.holds(body, Some(i))),
            Predicate::Not(q) => !self.holds(q, cursor),
            Predicate::And(qs) => qs.iter().all(|q| self.holds(q, cursor)),
            Predicate::Or(qs) => qs.iter().any(|q| self.holds(q, cursor)),
            Predicate::Iff(a, b) => self.holds(a, cursor) == self.holds(b, cursor),
            Predicate::Implies(a, b) => !self.holds(a, cursor) || self.holds(b, cursor),
            Predicate::IfThenElse(c, t, e) => {
                if self.holds(c, cursor) {
                    self.holds(t, cursor)
                } else {
                    e.as_ref().is_some_and(|e| self.holds(e, cursor))
                }
            }
        }
    }
}

/// Whether a single sentence satisfies a predicate.
pub fn sentence_satisfies(p: &Predicate, s: &Sentence, positions: Positions) -> bool {
    View::new(s, positions).holds(p, None)
}

fn prefer(good: Option<usize>, bad: Option<usize>, smaller_wins: bool) -> RuleVerdict {
    match (good, bad) {
        (Some(g), Some(b)) if g == b => RuleVerdict::Abstain,
        (Some(g), Some(b)) => {
            if (g < b) == smaller_wins {
                RuleVerdict::ChooseGood
            } else {
                RuleVerdict::ChooseBad
            }
        }
        (Some(_), None) => RuleVerdict::ChooseGood,
        (None, Some(_)) => RuleVerdict::ChooseBad,
        (None, None) => RuleVerdict::Abstain,
    }
}

/// Applies a rule to a pair. Total and deterministic.
pub fn apply_rule(rule: &Rule, pair: &MinimalPair, positions: Positions) -> RuleVerdict {
    let good = View::new(&pair.good, positions);
    let bad = View::new(&pair.bad, positions);
    match &rule.body {
        RuleBody::PerSentence(p) => match (good.holds(p, None), bad.holds(p, None)) {
            (true, false) => RuleVerdict::ChooseGood,
            (false, true) => RuleVerdict::ChooseBad,
            _ => RuleVerdict::Abstain,
        },
        RuleBody::Pairwise(Comparator::Shorter) => {
            prefer(Some(good.words.len()), Some(bad.words.len()), true)
        }
        RuleBody::Pairwise(Comparator::Longer) => {
            prefer(Some(good.words.len()), Some(bad.words.len()), false)
        }
        RuleBody::Pairwise(Comparator::FartherRight(anchors)) => {
            prefer(good.last_of(anchors), bad.last_of(anchors), false)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleEvalConfig {
    /// Credit for an abstention; 0.5 by default, 0.0 in strict mode.
    pub abstain_credit: f64,
    /// Score paradigms without a rule as 0% instead of leaving them out.
    pub strict_uncovered: bool,
}

impl Default for RuleEvalConfig {
    fn default() -> Self {
        RuleEvalConfig {
            abstain_credit: 0.5,
            strict_uncovered: false,
        }
    }
}

impl RuleEvalConfig {
    pub fn strict() -> Self {
        RuleEvalConfig {
            abstain_credit: 0.0,
            strict_uncovered: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleRow {
    pub phenomenon: String,
    pub paradigm: String,
    pub pairs: usize,
    pub choose_good: usize,
    pub choose_bad: usize,
    pub abstain: usize,
    pub covered: bool,
    /// Percent; `None` for an uncovered paradigm outside strict mode.
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleReport {
    pub config: RuleEvalConfig,
    /// Sorted by paradigm.
    pub rows: Vec<RuleRow>,
    pub macro_average: Option<f64>,
}

impl RuleReport {
    pub fn row(&self, paradigm: &str) -> Option<&RuleRow> {
        self.rows.iter().find(|r| r.paradigm == paradigm)
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().filter(|r| !r.covered).map(|r| r.paradigm.as_str())
    }

    /// Paradigms scoring exactly 100%.
    pub fn perfect(&self) -> usize {
        self.rows.iter().filter(|r| r.accuracy == Some(100.0)).count()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "phenomenon\tparadigm\tpairs\tchoose_good\tchoose_bad\tabstain\taccuracy\n",
        );
        for r in &self.rows {
            let acc = r.accuracy.map_or("uncovered".to_string(), |a| format!("{a:.2}"));
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                r.phenomenon, r.paradigm, r.pairs, r.choose_good, r.choose_bad, r.abstain, acc
            ));
        }
        if let Some(m) = self.macro_average {
            out.push_str(&format!("\tmacro_average\t\t\t\t\t{m:.2}\n"));
        }
        out
    }
}

pub fn eval_rulepack(pack: &Rulepack, pairs: &[MinimalPair], config: RuleEvalConfig) -> RuleReport {
    let mut groups: BTreeMap<&str, Vec<&MinimalPair>> = BTreeMap::new();
    for p in pairs {
        groups.entry(p.paradigm.as_str()).or_default().push(p);
    }
    let mut rows = Vec::new();
    for (paradigm, ps) in groups {
        let mut row = RuleRow {
            phenomenon: ps[0].phenomenon.clone(),
            paradigm: paradigm.to_string(),
            pairs: ps.len(),
            choose_good: 0,
            choose_bad: 0,
            abstain: 0,
            covered: false,
            accuracy: None,
        };
        match pack.rule(paradigm) {
            Some(rule) => {
                row.covered = true;
                for p in &ps {
                    match apply_rule(rule, p, pack.positions) {
                        RuleVerdict::ChooseGood => row.choose_good += 1,
                        RuleVerdict::ChooseBad => row.choose_bad += 1,
                        RuleVerdict::Abstain => row.abstain += 1,
                    }
                }
                let credit = row.choose_good as f64 + config.abstain_credit * row.abstain as f64;
                row.accuracy = Some(100.0 * credit / row.pairs as f64);
            }
            None => {
                log::warn!("no rule for paradigm {paradigm} ({} pairs)", ps.len());
                if config.strict_uncovered {
                    row.accuracy = Some(0.0);
                }
            }
        }
        rows.push(row);
    }
    let scored: Vec<f64> = rows.iter().filter_map(|r| r.accuracy).collect();
    let macro_average =
        (!scored.is_empty()).then(|| scored.iter().sum::<f64>() / scored.len() as f64);
    RuleReport {
        config,
        rows,
        macro_average,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::Source;
    use crate::rules::parse_rulepack;

    fn pair(paradigm: &str, good: &str, bad: &str) -> MinimalPair {
        MinimalPair::new("p", Source::Zorro, "ph", paradigm, good, bad)
    }

    fn verdict(src: &str, good: &str, bad: &str) -> RuleVerdict {
        let pack = parse_rulepack(src).unwrap();
        apply_rule(&pack.rules[0], &pair("x", good, bad), pack.positions)
    }

    #[test]
    fn third_last_word() {
        let v = verdict(
            "option positions = tokens\nrule a: is(w(-3), \"the\")",
            "what did the boy see before reading the book ?",
            "what did the boy see the book before reading ?",
        );
        assert_eq!(v, RuleVerdict::ChooseGood);
    }

    #[test]
    fn contains_and_abstain() {
        let src = r#"rule s: contains_any(["more","fewer"])"#;
        assert_eq!(
            verdict(src, "no boy has more than two dogs .", "no boy has most than two dogs ."),
            RuleVerdict::ChooseGood
        );
        assert_eq!(
            verdict("rule h: contains(\"himself\")", "he saw himself .", "himself saw him himself ."),
            RuleVerdict::Abstain
        );
        assert_eq!(verdict(src, "a b", "c d"), RuleVerdict::Abstain);
    }

    #[test]
    fn missing_reference_is_false() {
        assert_eq!(verdict("rule a: is(w(5), \"x\")", "a b c d x", "a b"), RuleVerdict::ChooseGood);
        assert_eq!(
            verdict("rule a: not is(w(5), \"x\")", "a b", "a b c d x"),
            RuleVerdict::ChooseGood
        );
        assert_eq!(
            verdict("rule a: is(after(\"z\", 1), \"x\")", "z x", "x z"),
            RuleVerdict::ChooseGood
        );
    }

    #[test]
    fn positions_mode() {
        let words = "rule a: length() == 3";
        let tokens = "option positions = tokens\nrule a: length() == 3";
        assert_eq!(verdict(words, "a b c .", "a b ."), RuleVerdict::ChooseGood);
        assert_eq!(verdict(tokens, "a b c .", "a b ."), RuleVerdict::ChooseBad);
    }

    #[test]
    fn counting_atoms() {
        let src = "rule a: even(count_ends(\"s\"))";
        assert_eq!(verdict(src, "dogs cats run", "dogs run"), RuleVerdict::ChooseGood);
        let src = "rule b: count_starts(\"wh\") == 1";
        assert_eq!(verdict(src, "who ran", "who saw what"), RuleVerdict::ChooseGood);
        let src = "rule c: index_of(\"the\") < index_of(\"a\")";
        assert_eq!(verdict(src, "the x a", "a x the"), RuleVerdict::ChooseGood);
    }

    #[test]
    fn exists_with_cursor() {
        let src = "rule a: exists(is(here, \"the\") and ends(next, \"s\"))";
        assert_eq!(verdict(src, "see the dogs", "see the dog"), RuleVerdict::ChooseGood);
        let src = "rule b: exists(repeats(here))";
        assert_eq!(verdict(src, "a b", "a b a"), RuleVerdict::ChooseBad);
    }

    #[test]
    fn pairwise_comparators() {
        assert_eq!(verdict("rule a: pairwise shorter", "a b", "a b c"), RuleVerdict::ChooseGood);
        assert_eq!(verdict("rule a: pairwise longer", "a b", "a b c"), RuleVerdict::ChooseBad);
        assert_eq!(verdict("rule a: pairwise shorter", "a b", "c d"), RuleVerdict::Abstain);
        let far = "rule a: pairwise farther_right(\"and\")";
        assert_eq!(verdict(far, "x and y z", "x y and z"), RuleVerdict::ChooseBad);
        assert_eq!(verdict(far, "x and y", "x y z"), RuleVerdict::ChooseGood);
        assert_eq!(verdict(far, "x y", "x z"), RuleVerdict::Abstain);
    }

    #[test]
    fn conditional_and_connectives() {
        let src = "rule a: if contains(\"the\") then ends(w(-1), \"s\") else contains(\"a\")";
        assert_eq!(verdict(src, "the dogs", "the dog"), RuleVerdict::ChooseGood);
        assert_eq!(verdict(src, "a dog", "one dog"), RuleVerdict::ChooseGood);
        let src = "rule b: contains(\"x\") implies contains(\"y\")";
        assert_eq!(verdict(src, "x y", "x z"), RuleVerdict::ChooseGood);
    }

    #[test]
    fn report_and_policies() {
        let pack = parse_rulepack("rule a: contains(\"good\")").unwrap();
        let pairs = vec![
            pair("a", "good one", "bad one"),
            pair("a", "same", "same too"),
            pair("b", "x", "y"),
        ];
        let r = eval_rulepack(&pack, &pairs, RuleEvalConfig::default());
        assert_eq!(r.row("a").unwrap().accuracy, Some(75.0));
        assert_eq!(r.row("b").unwrap().accuracy, None);
        assert_eq!(r.uncovered().collect::<Vec<_>>(), ["b"]);
        assert_eq!(r.macro_average, Some(75.0));

        let s = eval_rulepack(&pack, &pairs, RuleEvalConfig::strict());
        assert_eq!(s.row("a").unwrap().accuracy, Some(50.0));
        assert_eq!(s.row("b").unwrap().accuracy, Some(0.0));
        assert_eq!(s.macro_average, Some(25.0));
        assert!(s.to_tsv().contains("macro_average\t\t\t\t\t25.00"));
    }

    #[test]
    fn empty_pairs_give_empty_report() {
        let pack = parse_rulepack("rule a: contains(\"good\")").unwrap();
        let r = eval_rulepack(&pack, &[], RuleEvalConfig::default());
        assert!(r.rows.is_empty());
        assert_eq!(r.macro_average, None);
    }
}
