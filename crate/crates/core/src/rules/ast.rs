use serde::Serialize;

/// A word position inside one sentence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum WordRef {
    /// 1-based from the start; negative counts from the end (`-1` is last).
    At(i32),
    /// `offset` positions right of the first occurrence of any anchor.
    After { anchors: Vec<String>, offset: i32 },
    /// Relative to the cursor of an enclosing `exists`: `here`, `next`, `prev`.
    Cursor(i32),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum NumExpr {
    Lit(i64),
    /// Alphabetic words ending in any of the suffixes.
    CountEnds(Vec<String>),
    /// Words starting with any of the prefixes.
    CountStarts(Vec<String>),
    /// Words equal to any of the listed words.
    Count(Vec<String>),
    /// 1-based position of the first listed word, 0 when absent.
    IndexOf(Vec<String>),
    Length,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn apply(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Predicate {
    Is(WordRef, Vec<String>),
    Ends(WordRef, Vec<String>),
    Starts(WordRef, Vec<String>),
    /// The referenced word also occurs earlier in the sentence.
    Repeats(WordRef),
    Contains(Vec<String>),
    ContainsPrefix(Vec<String>),
    ContainsSubstring(String),
    /// Some word of the first list immediately precedes a word of the second.
    Adjacent(Vec<String>, Vec<String>),
    /// The first occurrence of the first list comes before that of the second.
    Precedes(Vec<String>, Vec<String>),
    Compare(NumExpr, CmpOp, NumExpr),
    Even(NumExpr),
    Odd(NumExpr),
    /// Some position satisfies the body, with `here`/`next`/`prev` bound to it.
    Exists(Box<Predicate>),
    Not(Box<Predicate>),
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
    Iff(Box<Predicate>, Box<Predicate>),
    Implies(Box<Predicate>, Box<Predicate>),
    IfThenElse(Box<Predicate>, Box<Predicate>, Option<Box<Predicate>>),
}

/// How a pairwise rule compares the two members of a pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Comparator {
    Shorter,
    Longer,
    /// The sentence whose last occurrence of an anchor sits at a larger index.
    FartherRight(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum RuleBody {
    PerSentence(Predicate),
    Pairwise(Comparator),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RuleKind {
    PerSentence,
    Pairwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rule {
    pub paradigm: String,
    pub body: RuleBody,
    /// Source line of the `rule` statement.
    pub line: usize,
}

impl Rule {
    pub fn kind(&self) -> RuleKind {
        match self.body {
            RuleBody::PerSentence(_) => RuleKind::PerSentence,
            RuleBody::Pairwise(_) => RuleKind::Pairwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordSet {
    pub name: String,
    pub members: Vec<String>,
}

/// Which tokens count as positions for indexing and length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Positions {
    /// Every token, punctuation included.
    Tokens,
    /// Only tokens that are not pure punctuation.
    #[default]
    Words,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rulepack {
    pub positions: Positions,
    pub rules: Vec<Rule>,
    pub sets: Vec<WordSet>,
}

impl Rulepack {
    pub fn rule(&self, paradigm: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.paradigm == paradigm)
    }

    pub fn paradigms(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.paradigm.as_str())
    }
}
