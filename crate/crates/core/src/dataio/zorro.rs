use std::path::Path;

use super::{file_stem, list_files, read_to_string, Ingested, MinimalPair, Source};
use crate::error::{Error, Result};
use crate::text::Sentence;

/// Which member of each consecutive line pair is the acceptable one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZorroLayout {
    #[default]
    BadFirst,
    GoodFirst,
}

/// Loads one `*.txt` file per paradigm, named `<phenomenon>-<paradigm>.txt`.
///
/// Each file holds one sentence per line with the two members of a pair on
/// consecutive lines. Blank lines are ignored. The paradigm key is the full
/// file stem (e.g. `anaphor_agreement-pronoun_gender`) and the phenomenon
/// is the part before the last `-`.
pub fn load_zorro(dir: &Path, layout: ZorroLayout) -> Result<Ingested<MinimalPair>> {
    let mut out = Ingested::default();
    let files = list_files(dir, &["txt"])?;
    if files.is_empty() {
        out.warn(format!("{}: no Zorro paradigm files found", dir.display()));
    }
    for path in files {
        let paradigm = file_stem(&path);
        let phenomenon = match paradigm.rfind('-') {
            Some(i) if i > 0 => paradigm[..i].to_string(),
            _ => paradigm.clone(),
        };
        let text = read_to_string(&path)?;
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        if lines.len() % 2 != 0 {
            return Err(Error::Ingest {
                file: path.display().to_string(),
                record: lines.len() - 1,
                message: "unpaired sentence (odd number of lines)".into(),
            });
        }
        for (k, chunk) in lines.chunks(2).enumerate() {
            let (good, bad) = match layout {
                ZorroLayout::BadFirst => (chunk[1], chunk[0]),
                ZorroLayout::GoodFirst => (chunk[0], chunk[1]),
            };
            let id = format!("zorro.{paradigm}.{k}");
            let good = Sentence::new(format!("{id}.good"), good);
            let bad = Sentence::new(format!("{id}.bad"), bad);
            if good.tokens == bad.tokens {
                out.warn(format!(
                    "{}: pair {k}: identical sentences, skipped",
                    path.display()
                ));
                continue;
            }
            out.items.push(MinimalPair {
                id,
                paradigm: paradigm.clone(),
                phenomenon: phenomenon.clone(),
                good,
                bad,
                source: Source::Zorro,
            });
        }
    }
    Ok(out)
}
