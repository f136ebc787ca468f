//! Recursive-descent parser for rulepack files. The grammar lives in
//! `rulepacks/GRAMMAR.ebnf`.

use std::collections::{HashMap, HashSet};

use super::ast::*;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Assign,
    Cmp(CmpOp),
}

fn describe(tok: Option<&Tok>) -> String {
    match tok {
        None => "end of input".into(),
        Some(Tok::Ident(s)) => format!("'{s}'"),
        Some(Tok::Str(s)) => format!("string {s:?}"),
        Some(Tok::Int(n)) => format!("integer {n}"),
        Some(Tok::LParen) => "'('".into(),
        Some(Tok::RParen) => "')'".into(),
        Some(Tok::LBracket) => "'['".into(),
        Some(Tok::RBracket) => "']'".into(),
        Some(Tok::Comma) => "','".into(),
        Some(Tok::Colon) => "':'".into(),
        Some(Tok::Assign) => "'='".into(),
        Some(Tok::Cmp(_)) => "comparison operator".into(),
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(source: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (line_no, line) in source.lines().enumerate() {
        let line_no = line_no + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let err = |message: String| Error::RuleSyntax {
                line: line_no,
                column,
                message,
            };
            let mut push = |tok: Tok| {
                out.push(Spanned {
                    tok,
                    line: line_no,
                    column,
                })
            };
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '(' => (push(Tok::LParen), i += 1).1,
                ')' => (push(Tok::RParen), i += 1).1,
                '[' => (push(Tok::LBracket), i += 1).1,
                ']' => (push(Tok::RBracket), i += 1).1,
                ',' => (push(Tok::Comma), i += 1).1,
                ':' => (push(Tok::Colon), i += 1).1,
                '"' => {
                    let start = i + 1;
                    let end = chars[start..]
                        .iter()
                        .position(|&c| c == '"')
                        .ok_or_else(|| err("unterminated string".into()))?;
                    push(Tok::Str(chars[start..start + end].iter().collect()));
                    i = start + end + 1;
                }
                '=' | '!' | '<' | '>' => {
                    let two = chars.get(i + 1) == Some(&'=');
                    let op = match (c, two) {
                        ('=', true) => Tok::Cmp(CmpOp::Eq),
                        ('=', false) => Tok::Assign,
                        ('!', true) => Tok::Cmp(CmpOp::Ne),
                        ('<', true) => Tok::Cmp(CmpOp::Le),
                        ('<', false) => Tok::Cmp(CmpOp::Lt),
                        ('>', true) => Tok::Cmp(CmpOp::Ge),
                        ('>', false) => Tok::Cmp(CmpOp::Gt),
                        _ => return Err(err(format!("unexpected character {c:?}"))),
                    };
                    push(op);
                    i += if two { 2 } else { 1 };
                }
                c if c.is_ascii_digit()
                    || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) =>
                {
                    let start = i;
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let text: String = chars[start..i].iter().collect();
                    push(Tok::Int(text.parse().map_err(|_| err(format!("bad integer {text}")))?));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-')
                    {
                        i += 1;
                    }
                    push(Tok::Ident(chars[start..i].iter().collect()));
                }
                other => return Err(err(format!("unexpected character {other:?}"))),
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    sets: HashMap<String, Vec<String>>,
    /// Nesting depth of `exists`, where cursor references are legal.
    cursor_depth: usize,
}

const STATEMENT_KEYWORDS: [&str; 3] = ["rule", "set", "option"];

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn err_here(&self, message: impl Into<String>) -> Error {
        let (line, column) = match self.toks.get(self.pos).or(self.toks.last()) {
            Some(s) => (s.line, s.column),
            None => (1, 1),
        };
        Error::RuleSyntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Result<Tok> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.err_here("unexpected end of input"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            other => Err(self.err_here(format!("expected {what}, found {}", describe(other)))),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("expected {what}, found {}", describe(Some(&other)))))
            }
        }
    }

    fn string(&mut self) -> Result<String> {
        match self.next()? {
            Tok::Str(s) => Ok(s),
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("expected string, found {}", describe(Some(&other)))))
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.next()? {
            Tok::Int(n) => Ok(n),
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("expected integer, found {}", describe(Some(&other)))))
            }
        }
    }

    /// A string, a `[..]` list of strings, or the name of a word set.
    fn words(&mut self) -> Result<Vec<String>> {
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(vec![s.to_lowercase()])
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let mut out = Vec::new();
                if self.peek() != Some(&Tok::RBracket) {
                    loop {
                        out.push(self.string()?.to_lowercase());
                        if self.peek() == Some(&Tok::Comma) {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(out)
            }
            Some(Tok::Ident(name)) => {
                let members = self
                    .sets
                    .get(&name)
                    .cloned()
                    .ok_or_else(|| self.err_here(format!("undefined word set {name:?}")))?;
                self.pos += 1;
                Ok(members)
            }
            other => Err(self.err_here(format!("expected word list, found {}", describe(other.as_ref())))),
        }
    }

    fn word_ref(&mut self) -> Result<WordRef> {
        let name = self.ident("word reference")?;
        let cursor = |p: &Parser, d: i32| {
            if p.cursor_depth == 0 {
                Err(p.err_here(format!("{name} is only valid inside exists(...)")))
            } else {
                Ok(WordRef::Cursor(d))
            }
        };
        match name.as_str() {
            "here" => cursor(self, 0),
            "next" => cursor(self, 1),
            "prev" => cursor(self, -1),
            "w" => {
                self.expect(Tok::LParen, "'('")?;
                let i = self.int()?;
                if i == 0 {
                    return Err(self.err_here("word positions start at 1 (or -1 from the end)"));
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(WordRef::At(i as i32))
            }
            "after" => {
                self.expect(Tok::LParen, "'('")?;
                let anchors = self.words()?;
                self.expect(Tok::Comma, "','")?;
                let offset = self.int()? as i32;
                self.expect(Tok::RParen, "')'")?;
                Ok(WordRef::After { anchors, offset })
            }
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("unknown word reference {other:?}")))
            }
        }
    }

    fn num_expr(&mut self) -> Result<NumExpr> {
        if let Some(Tok::Int(n)) = self.peek().cloned() {
            self.pos += 1;
            return Ok(NumExpr::Lit(n));
        }
        let name = self.ident("number")?;
        self.expect(Tok::LParen, "'('")?;
        let e = match name.as_str() {
            "count_ends" => NumExpr::CountEnds(self.words()?),
            "count_starts" => NumExpr::CountStarts(self.words()?),
            "count" => NumExpr::Count(self.words()?),
            "index_of" => NumExpr::IndexOf(self.words()?),
            "length" => NumExpr::Length,
            other => {
                self.pos -= 2;
                return Err(self.err_here(format!("unknown numeric function {other:?}")));
            }
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(e)
    }

    fn starts_numeric(&self) -> bool {
        match self.peek() {
            Some(Tok::Int(_)) => true,
            Some(Tok::Ident(s)) => {
                matches!(
                    s.as_str(),
                    "count_ends" | "count_starts" | "count" | "index_of" | "length"
                ) && self.peek_at(1) == Some(&Tok::LParen)
            }
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Predicate> {
        let lhs = self.or_expr()?;
        if self.eat_kw("iff") {
            let rhs = self.or_expr()?;
            Ok(Predicate::Iff(Box::new(lhs), Box::new(rhs)))
        } else if self.eat_kw("implies") {
            let rhs = self.or_expr()?;
            Ok(Predicate::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn or_expr(&mut self) -> Result<Predicate> {
        let mut terms = vec![self.and_expr()?];
        while self.eat_kw("or") {
            terms.push(self.and_expr()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Predicate::Or(terms)
        })
    }

    fn and_expr(&mut self) -> Result<Predicate> {
        let mut terms = vec![self.unary()?];
        while self.eat_kw("and") {
            terms.push(self.unary()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Predicate::And(terms)
        })
    }

    fn unary(&mut self) -> Result<Predicate> {
        if self.eat_kw("not") {
            return Ok(Predicate::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Predicate> {
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(e);
        }
        if self.eat_kw("if") {
            let cond = self.expr()?;
            if !self.eat_kw("then") {
                return Err(self.err_here("expected 'then'"));
            }
            let then = self.expr()?;
            let otherwise = if self.eat_kw("else") {
                Some(Box::new(self.expr()?))
            } else {
                None
            };
            return Ok(Predicate::IfThenElse(Box::new(cond), Box::new(then), otherwise));
        }
        if self.starts_numeric() {
            let lhs = self.num_expr()?;
            let op = match self.next()? {
                Tok::Cmp(op) => op,
                other => {
                    self.pos -= 1;
                    return Err(self.err_here(format!("expected comparison, found {}", describe(Some(&other)))));
                }
            };
            let rhs = self.num_expr()?;
            return Ok(Predicate::Compare(lhs, op, rhs));
        }
        let name = self.ident("predicate")?;
        if STATEMENT_KEYWORDS.contains(&name.as_str()) {
            self.pos -= 1;
            return Err(self.err_here(format!("expected predicate, found keyword {name:?}")));
        }
        self.expect(Tok::LParen, "'('")?;
        let p = match name.as_str() {
            "is" | "in" => {
                let r = self.word_ref()?;
                self.expect(Tok::Comma, "','")?;
                Predicate::Is(r, self.words()?)
            }
            "ends" => {
                let r = self.word_ref()?;
                self.expect(Tok::Comma, "','")?;
                Predicate::Ends(r, self.words()?)
            }
            "starts" => {
                let r = self.word_ref()?;
                self.expect(Tok::Comma, "','")?;
                Predicate::Starts(r, self.words()?)
            }
            "repeats" => Predicate::Repeats(self.word_ref()?),
            "contains" | "contains_any" => Predicate::Contains(self.words()?),
            "contains_prefix" | "any_starts" => Predicate::ContainsPrefix(self.words()?),
            "contains_substring" => Predicate::ContainsSubstring(self.string()?.to_lowercase()),
            "adjacent" | "precedes" => {
                let a = self.words()?;
                self.expect(Tok::Comma, "','")?;
                let b = self.words()?;
                if name == "adjacent" {
                    Predicate::Adjacent(a, b)
                } else {
                    Predicate::Precedes(a, b)
                }
            }
            "even" => Predicate::Even(self.num_expr()?),
            "odd" => Predicate::Odd(self.num_expr()?),
            "exists" => {
                self.cursor_depth += 1;
                let body = self.expr();
                self.cursor_depth -= 1;
                Predicate::Exists(Box::new(body?))
            }
            other => {
                self.pos -= 2;
                return Err(self.err_here(format!("unknown predicate {other:?}")));
            }
        };
        self.expect(Tok::RParen, "')'")?;
        Ok(p)
    }

    fn comparator(&mut self) -> Result<Comparator> {
        let name = self.ident("comparator")?;
        match name.as_str() {
            "shorter" => Ok(Comparator::Shorter),
            "longer" => Ok(Comparator::Longer),
            "farther_right" => {
                self.expect(Tok::LParen, "'('")?;
                let anchors = self.words()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Comparator::FartherRight(anchors))
            }
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("unknown comparator {other:?}")))
            }
        }
    }
}

/// Parses a rulepack. Rules are kept in source order.
pub fn parse_rulepack(source: &str) -> Result<Rulepack> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
        sets: HashMap::new(),
        cursor_depth: 0,
    };
    let mut pack = Rulepack {
        positions: Positions::default(),
        rules: Vec::new(),
        sets: Vec::new(),
    };
    let mut paradigms = HashSet::new();
    while p.peek().is_some() {
        let line = p.toks[p.pos].line;
        let kw = p.ident("'rule', 'set' or 'option'")?;
        match kw.as_str() {
            "option" => {
                let key = p.ident("option name")?;
                p.expect(Tok::Assign, "'='")?;
                let value = p.ident("option value")?;
                match (key.as_str(), value.as_str()) {
                    ("positions", "tokens") => pack.positions = Positions::Tokens,
                    ("positions", "words") => pack.positions = Positions::Words,
                    _ => {
                        p.pos -= 1;
                        return Err(p.err_here(format!("unknown option {key} = {value}")));
                    }
                }
            }
            "set" => {
                let name = p.ident("set name")?;
                p.expect(Tok::Assign, "'='")?;
                if p.sets.contains_key(&name) {
                    p.pos -= 2;
                    return Err(p.err_here(format!("word set {name:?} defined twice")));
                }
                let members = p.words()?;
                p.sets.insert(name.clone(), members.clone());
                pack.sets.push(WordSet { name, members });
            }
            "rule" => {
                let mut names = vec![p.ident("paradigm name")?];
                while p.peek() == Some(&Tok::Comma) {
                    p.pos += 1;
                    names.push(p.ident("paradigm name")?);
                }
                p.expect(Tok::Colon, "':'")?;
                let body = if p.eat_kw("pairwise") {
                    RuleBody::Pairwise(p.comparator()?)
                } else {
                    RuleBody::PerSentence(p.expr()?)
                };
                for paradigm in names {
                    if !paradigms.insert(paradigm.clone()) {
                        return Err(Error::RuleSyntax {
                            line,
                            column: 1,
                            message: format!("duplicate rule for paradigm {paradigm:?}"),
                        });
                    }
                    pack.rules.push(Rule {
                        paradigm,
                        body: body.clone(),
                        line,
                    });
                }
            }
            other => {
                p.pos -= 1;
                return Err(p.err_here(format!("expected 'rule', 'set' or 'option', found '{other}'")));
            }
        }
    }
    Ok(pack)
}
