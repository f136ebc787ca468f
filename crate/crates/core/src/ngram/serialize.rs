//! Versioned plain-text count dump.
//!
//! ```text
//! mpaudit-ngram 1
//! order   <n>
//! level   word|tag
//! smoothing       <json>
//! vocab   <token>           (one line per id, id order)
//! ctx     <h>     <ids>     <next>:<count> ...
//! ```
//!
//! Context lines are sorted, so equal models produce identical files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use super::{Context, Level, NGramModel, SmoothingConfig};
use crate::error::{Error, Result};

pub const MODEL_HEADER: &str = "mpaudit-ngram 1";

impl NGramModel {
    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{MODEL_HEADER}")?;
        writeln!(out, "order\t{}", self.order)?;
        writeln!(out, "level\t{}", self.level)?;
        writeln!(
            out,
            "smoothing\t{}",
            serde_json::to_string(&self.smoothing).expect("plain struct serializes")
        )?;
        for w in &self.vocab {
            writeln!(out, "vocab\t{w}")?;
        }
        for (h, level) in self.levels.iter().enumerate() {
            let mut ctxs: Vec<_> = level.iter().collect();
            ctxs.sort_by(|a, b| a.0.cmp(b.0));
            for (ctx, entry) in ctxs {
                let ids: Vec<String> = ctx.iter().map(u32::to_string).collect();
                let mut next: Vec<_> = entry.next.iter().collect();
                next.sort();
                let mut line = format!("ctx\t{h}\t{}", ids.join(" "));
                for (w, c) in next {
                    let _ = write!(line, "\t{w}:{c}");
                }
                writeln!(out, "{line}")?;
            }
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<NGramModel> {
        let bad = |m: String| Error::schema("n-gram model", m);
        let mut lines = input.lines();
        let header = lines
            .next()
            .transpose()
            .map_err(|e| bad(e.to_string()))?
            .unwrap_or_default();
        if header != MODEL_HEADER {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let mut order = None;
        let mut level = None;
        let mut smoothing: Option<SmoothingConfig> = None;
        let mut vocab = Vec::new();
        let mut raw_ctx: Vec<(usize, Vec<u32>, Context)> = Vec::new();
        for line in lines {
            let line = line.map_err(|e| bad(e.to_string()))?;
            let mut parts = line.split('\t');
            let kind = parts.next().unwrap_or("");
            let rest: Vec<&str> = parts.collect();
            match (kind, rest.as_slice()) {
                ("order", [n]) => order = Some(n.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                ("level", [l]) => level = Some(l.parse::<Level>()?),
                ("smoothing", [json]) => {
                    smoothing = Some(serde_json::from_str(json).map_err(|e| bad(e.to_string()))?)
                }
                ("vocab", [w]) => vocab.push(w.to_string()),
                ("ctx", [h, ids, next @ ..]) => {
                    let h: usize = h.parse().map_err(|_| bad(format!("bad history {h:?}")))?;
                    let ids = ids
                        .split_whitespace()
                        .map(|i| i.parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| bad(e.to_string()))?;
                    if ids.len() != h {
                        return Err(bad(format!("context length {} != {h}", ids.len())));
                    }
                    let mut entry = Context::default();
                    for cell in next {
                        let (w, c) = cell
                            .split_once(':')
                            .ok_or_else(|| bad(format!("bad count {cell:?}")))?;
                        let w: u32 = w.parse().map_err(|_| bad(format!("bad id {w:?}")))?;
                        let c: u64 = c.parse().map_err(|_| bad(format!("bad count {c:?}")))?;
                        if c == 0 {
                            return Err(bad("zero count stored".into()));
                        }
                        entry.total += c;
                        entry.next.insert(w, c);
                    }
                    raw_ctx.push((h, ids, entry));
                }
                ("", []) => {}
                _ => return Err(bad(format!("unrecognized line {line:?}"))),
            }
        }
        let order = order.ok_or_else(|| bad("missing order".into()))?;
        let level = level.ok_or_else(|| bad("missing level".into()))?;
        let smoothing = smoothing.ok_or_else(|| bad("missing smoothing".into()))?;
        smoothing.validate()?;
        if order == 0 || vocab.len() < 3 {
            return Err(bad("degenerate model".into()));
        }
        let mut levels = vec![HashMap::new(); order];
        for (h, ids, entry) in raw_ctx {
            if h >= order || ids.iter().any(|&i| i as usize >= vocab.len()) {
                return Err(bad(format!("context out of range at history {h}")));
            }
            levels[h].insert(ids, entry);
        }
        let index = vocab
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let mut model = NGramModel {
            order,
            level,
            smoothing,
            vocab,
            index,
            levels,
        };
        model.compute_norms();
        Ok(model)
    }
}
