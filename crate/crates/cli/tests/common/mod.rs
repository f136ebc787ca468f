//! Synthetic benchmark fixtures and a wrapper around the built binary.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn mpaudit(cwd: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpaudit"))
        .args(args)
        .current_dir(cwd)
        .env_remove("MPAUDIT_DATA_DIR")
        .env_remove("MPAUDIT_CONFIG")
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn mpaudit")
}

/// Runs and asserts success, returning stdout.
pub fn ok(cwd: &Path, args: &[&str]) -> String {
    let out = mpaudit(cwd, args);
    assert!(
        out.status.success(),
        "mpaudit {args:?} failed ({:?}):\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

const NOUNS: [&str; 6] = ["dog", "cat", "bird", "girl", "boy", "horse"];
const VERBS: [&str; 4] = ["sees", "likes", "chases", "finds"];
const ADJS: [&str; 3] = ["big", "small", "red"];

/// Plain training corpus: simple transitive clauses, one per line.
pub fn plain_corpus(n: usize) -> String {
    let mut s = String::new();
    for i in 0..n {
        let a = NOUNS[i % 6];
        let b = NOUNS[(i / 6 + 1) % 6];
        let v = VERBS[(i / 2) % 4];
        if i % 3 == 0 {
            s.push_str(&format!("the {} {a} {v} the {b} .\n", ADJS[i % 3]));
        } else {
            s.push_str(&format!("the {a} {v} the {b} .\n"));
        }
    }
    s
}

/// The same clauses as `token_TAG` items.
pub fn tagged_corpus(n: usize) -> String {
    plain_corpus(n)
        .lines()
        .map(|line| {
            line.split(' ')
                .map(|w| {
                    let tag = if w == "the" {
                        "DT"
                    } else if w == "." {
                        "."
                    } else if ADJS.contains(&w) {
                        "JJ"
                    } else if VERBS.contains(&w) {
                        "VBZ"
                    } else {
                        "NN"
                    };
                    format!("{w}_{tag}")
                })
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// Three Zorro paradigm files, bad sentence first in each pair.
pub fn zorro_dir(root: &Path) -> PathBuf {
    let dir = root.join("zorro");
    std::fs::create_dir_all(&dir).unwrap();
    let mut det = String::new();
    let mut sv = String::new();
    let mut pron = String::new();
    for (i, n) in NOUNS.iter().enumerate() {
        let other = NOUNS[(i + 1) % 6];
        det.push_str(&format!("look at this {n}s .\nlook at this {n} .\n"));
        sv.push_str(&format!(
            "the {n}s near the {other} is big .\nthe {n}s near the {other} are big .\n"
        ));
        pron.push_str(&format!("the {n} hurt herself .\nthe {n} hurt himself .\n"));
    }
    std::fs::write(dir.join("agreement_determiner_noun-between_neighbors.txt"), det).unwrap();
    std::fs::write(dir.join("agreement_subject_verb-across_prepositional_phrase.txt"), sv).unwrap();
    std::fs::write(dir.join("anaphor_agreement-pronoun_gender.txt"), pron).unwrap();
    dir
}

/// Two BLiMP paradigms in JSON lines.
pub fn blimp_dir(root: &Path) -> PathBuf {
    let dir = root.join("blimp");
    std::fs::create_dir_all(&dir).unwrap();
    let mut only = String::new();
    let mut gender = String::new();
    for n in ["Bill", "Sue", "Ann", "Tom"] {
        only.push_str(&format!(
            "{{\"sentence_good\": \"Only {n} would ever complain.\", \"sentence_bad\": \"Even {n} would ever complain.\", \"UID\": \"only_npi_licensor_present\", \"linguistics_term\": \"npi_licensing\"}}\n"
        ));
        gender.push_str(&format!(
            "{{\"sentence_good\": \"{n} can't help herself.\", \"sentence_bad\": \"{n} can't help itself.\", \"UID\": \"anaphor_gender_agreement\", \"linguistics_term\": \"anaphor_agreement\"}}\n"
        ));
    }
    std::fs::write(dir.join("only_npi_licensor_present.jsonl"), only).unwrap();
    std::fs::write(dir.join("anaphor_gender_agreement.jsonl"), gender).unwrap();
    dir
}

/// LI-Adger-style judgments: `phenomena` phenomena, each with one
/// grammatical and one starred type of eight lexicalizations.
pub fn li_adger_dir(root: &Path, phenomena: usize) -> PathBuf {
    let dir = root.join("li_adger");
    std::fs::create_dir_all(&dir).unwrap();
    let mut s = String::from("sentence_id\tsentence\tz\n");
    for k in 0..phenomena {
        for i in 1..=8 {
            let a = NOUNS[(k + i) % 6];
            let b = NOUNS[(k + 2 * i) % 6];
            let v = VERBS[(k + i) % 4];
            let gz = 0.4 + 0.1 * ((k * 7 + i * 3) % 9) as f64;
            let bz = -0.6 - 0.1 * ((k * 5 + i * 2) % 7) as f64;
            s.push_str(&format!("1.{k}.Ex.{k}a.g.{i:02}\tthe {a} {v} the {b} .\t{gz}\n"));
            s.push_str(&format!("1.{k}.Ex.{k}b.*.{i:02}\tthe {a} the {b} {v} .\t{bz}\n"));
        }
    }
    std::fs::write(dir.join("judgments.tsv"), s).unwrap();
    dir
}

/// Bytes of every regular file below `dir`, keyed by relative path.
pub fn snapshot(dir: &Path) -> std::collections::BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut std::collections::BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = std::collections::BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

/// Writes every fixture under `root` and runs the whole pipeline into
/// `root/out`.
pub fn run_pipeline(root: &Path) {
    zorro_dir(root);
    li_adger_dir(root, 6);
    std::fs::write(root.join("corpus.txt"), plain_corpus(120)).unwrap();
    std::fs::write(root.join("tagged.txt"), tagged_corpus(120)).unwrap();
    ok(root, &["normalize", "--source", "zorro", "--input", "zorro", "--out", "out/zorro"]);
    ok(root, &["normalize", "--source", "li_adger", "--input", "li_adger", "--out", "out/li_adger"]);
    ok(root, &["eval-rules", "--rulepack", "builtin:zorro", "--pairs", "out/zorro/pairs.tsv", "--out", "out/rules"]);
    ok(root, &["train-tagger", "--corpus", "tagged.txt", "--out", "out/tagger"]);
    ok(root, &["train-ngram", "--corpus", "corpus.txt", "--order", "3", "--out", "out/word"]);
    ok(root, &[
        "train-ngram", "--corpus", "corpus.txt", "--order", "3", "--level", "tag",
        "--tagger", "out/tagger/tagger.model", "--out", "out/tag",
    ]);
    ok(root, &["score", "--model", "out/word/3word.model", "--sentences", "out/li_adger/sentences.tsv", "--out", "out/score"]);
    ok(root, &[
        "eval-pairs", "--pairs", "out/zorro/pairs.tsv",
        "--ngram", "word=out/word/3word.model", "--ngram", "tag=out/tag/3tag.model",
        "--tagger", "out/tagger/tagger.model", "--rulepack", "builtin:zorro",
        "--oracle", "word,tag", "--reference", "rule", "--out", "out/eval",
    ]);
    ok(root, &[
        "gradient", "--li-adger", "li_adger", "--scores", "out/score/scores.tsv",
        "--slor", "slor=out/word/3word.model", "--out", "out/gradient",
    ]);
    ok(root, &["report", "--run", "out"]);
}
