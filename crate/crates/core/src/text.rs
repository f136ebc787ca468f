//! Sentences and the shared tokenizer.

use serde::{Deserialize, Serialize};

/// Characters that are split off the end of a sentence as their own token.
const FINAL_PUNCT: &[char] = &['.', '?', '!'];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub id: String,
    pub raw: String,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<String>>,
}

impl Sentence {
    /// Builds a sentence by tokenizing `raw`.
    pub fn new(id: impl Into<String>, raw: impl Into<String>) -> Self {
        let raw = raw.into();
        let tokens = tokenize(&raw);
        Sentence {
            id: id.into(),
            raw,
            tokens,
            tags: None,
        }
    }

    pub fn from_tokens(id: impl Into<String>, tokens: Vec<String>) -> Self {
        Sentence {
            id: id.into(),
            raw: tokens.join(" "),
            tokens,
            tags: None,
        }
    }

    pub fn with_tags(mut self, tags: Vec<String>) -> Self {
        debug_assert_eq!(tags.len(), self.tokens.len());
        self.tags = Some(tags);
        self
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens that are not pure punctuation, in order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens
            .iter()
            .map(String::as_str)
            .filter(|t| !is_punctuation(t))
    }
}

/// Lowercases, splits on whitespace and detaches a run of sentence-final
/// `.`, `?` or `!` from the last word.
///
/// Joining the output with single spaces and tokenizing again yields the
/// same tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens: Vec<String> = text.split_whitespace().map(str::to_lowercase).collect();
    if let Some(last) = tokens.last_mut() {
        let stem_len = last.trim_end_matches(FINAL_PUNCT).len();
        if stem_len > 0 && stem_len < last.len() {
            let punct = last.split_off(stem_len);
            tokens.push(punct);
        }
    }
    tokens
}

/// True for tokens made only of ASCII punctuation (`.`, `?`, `,`, `--`, ...).
pub fn is_punctuation(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| c.is_ascii_punctuation())
}

/// True for tokens containing at least one alphabetic character.
pub fn is_alphabetic(token: &str) -> bool {
    token.chars().any(char::is_alphabetic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn detaches_final_period() {
        assert_eq!(
            tokenize("Sam ran around some glaciers."),
            ["sam", "ran", "around", "some", "glaciers", "."]
        );
    }

    #[test]
    fn keeps_presplit_punctuation() {
        assert_eq!(
            tokenize("the lie on the foot is flat ."),
            ["the", "lie", "on", "the", "foot", "is", "flat", "."]
        );
    }

    #[test]
    fn internal_apostrophes_survive() {
        assert_eq!(tokenize("Who wasn't there?"), ["who", "wasn't", "there", "?"]);
    }

    #[test]
    fn punctuation_only_token_not_split() {
        assert_eq!(tokenize("wait ..."), ["wait", "..."]);
        assert_eq!(tokenize(""), Vec::<String>::new());
    }

    #[test]
    fn words_skip_punctuation() {
        let s = Sentence::new("x", "Is it flat?");
        assert_eq!(s.words().collect::<Vec<_>>(), ["is", "it", "flat"]);
        assert_eq!(s.len(), 4);
    }

    proptest! {
        #[test]
        fn tokenize_is_idempotent(text in "[A-Za-z'?.! ]{0,40}") {
            let once = tokenize(&text);
            let twice = tokenize(&once.join(" "));
            prop_assert_eq!(once, twice);
        }
    }
}
