//! A small rule language for surface heuristics over minimal pairs, its
//! evaluator, and the builtin rulepacks.
//!
//! ```
//! use mpaudit::rules::{apply_rule, parse_rulepack, RuleVerdict};
//! use mpaudit::{MinimalPair, Source};
//!
//! let pack = parse_rulepack(r#"rule superlative: contains_any(["more", "fewer"])"#).unwrap();
//! let pair = MinimalPair::new("p1", Source::Zorro, "quantifiers", "superlative",
//!     "no girl saw more than two dogs .", "no girl saw most than two dogs .");
//! assert_eq!(apply_rule(&pack.rules[0], &pair, pack.positions), RuleVerdict::ChooseGood);
//! ```

mod ast;
mod eval;
mod parser;

pub use ast::*;
pub use eval::{
    apply_rule, eval_rulepack, sentence_satisfies, RuleEvalConfig, RuleReport, RuleRow,
    RuleVerdict,
};
pub use parser::parse_rulepack;

use crate::error::{Error, Result};

pub const ZORRO_RULES: &str = include_str!("../../rulepacks/zorro.rules");
pub const BLIMP_RULES: &str = include_str!("../../rulepacks/blimp.rules");
pub const GRAMMAR: &str = include_str!("../../rulepacks/GRAMMAR.ebnf");

/// Source text of a builtin rulepack by name.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    match name {
        "zorro" => Some(ZORRO_RULES),
        "blimp" => Some(BLIMP_RULES),
        _ => None,
    }
}

/// Loads `builtin:<name>` or a rulepack file path.
pub fn load_rulepack(spec: &str) -> Result<Rulepack> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let src = builtin_source(name)
            .ok_or_else(|| Error::Config(format!("unknown builtin rulepack {name:?}")))?;
        return parse_rulepack(src);
    }
    let path = std::path::Path::new(spec);
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_rulepack(&src).map_err(|e| match e {
        Error::RuleSyntax {
            line,
            column,
            message,
        } => Error::Rulepack(format!("{spec}:{line}:{column}: {message}")),
        other => other,
    })
}
