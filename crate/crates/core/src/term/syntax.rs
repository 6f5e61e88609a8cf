//! Canonical text syntax for terms, and the tokenizer the grammar file
//! parser shares.
//!
//! Variables start with an uppercase letter or `_`; constants and functors
//! start with a lowercase letter. `_` on its own is anonymous: every
//! occurrence is a distinct variable. `%` starts a comment.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Term, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Atom(String),
    Var(String),
    Int(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Arrow,
    At,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Atom(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Arrow => f.write_str("`-->`"),
            Tok::At => f.write_str("`@`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| {
            out.push(Spanned {
                tok,
                line: l,
                col: k,
            })
        };
        match c {
            _ if c.is_whitespace() => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' | ')' | '[' | ']' | ',' | '.' | '@' => {
                bump!();
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    _ => Tok::At,
                };
                push(&mut out, tok);
            }
            '-' => {
                for _ in 0..3 {
                    let expect = if col - k < 2 { '-' } else { '>' };
                    if bump!() != Some(expect) {
                        return Err(SyntaxError {
                            line: l,
                            col: k,
                            message: "expected `-->`".into(),
                        });
                    }
                }
                push(&mut out, Tok::Arrow);
            }
            _ if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                let n = s.parse().map_err(|_| SyntaxError {
                    line: l,
                    col: k,
                    message: format!("integer `{s}` out of range"),
                })?;
                push(&mut out, Tok::Int(n));
            }
            _ if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                let tok = if c.is_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Atom(s)
                };
                push(&mut out, tok);
            }
            _ => {
                return Err(SyntaxError {
                    line: l,
                    col: k,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Recursive-descent reader over a token stream. Variable names are scoped
/// to the reader until [`Reader::reset_scope`] is called.
pub(crate) struct Reader {
    toks: Vec<Spanned>,
    pos: usize,
    scope: HashMap<String, Var>,
}

impl Reader {
    pub fn new(src: &str) -> Result<Reader, SyntaxError> {
        Ok(Reader {
            toks: tokenize(src)?,
            pos: 0,
            scope: HashMap::new(),
        })
    }

    pub fn reset_scope(&mut self) {
        self.scope.clear();
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error_here(&self, message: impl Into<String>) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    pub fn position(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn expect(&mut self, want: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    pub fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == want {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn atom(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Atom(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.error_here(format!("expected a lowercase name, found {other}"))),
        }
    }

    pub fn term(&mut self) -> Result<Term, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(name) => {
                self.next();
                if name == "_" {
                    return Ok(Term::fresh_var("_"));
                }
                let v = self
                    .scope
                    .entry(name.clone())
                    .or_insert_with(|| Var::fresh(&name))
                    .clone();
                Ok(Term::Var(v))
            }
            Tok::Atom(_) => {
                let (name, args) = self.callable()?;
                Ok(Term::app(&name, args))
            }
            other => Err(self.error_here(format!("expected a term, found {other}"))),
        }
    }

    /// `name` or `name(t1, ..., tn)`.
    pub fn callable(&mut self) -> Result<(String, Vec<Term>), SyntaxError> {
        let name = self.atom()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen)?;
        }
        Ok((name, args))
    }
}

/// Parses one term.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut r = Reader::new(src)?;
    let t = r.term()?;
    r.expect(Tok::Eof)?;
    Ok(t)
}

/// Parses several terms with one variable scope: the same name denotes the
/// same variable in every input.
pub fn parse_terms(srcs: &[&str]) -> Result<Vec<Term>, SyntaxError> {
    let mut scope = HashMap::new();
    let mut out = Vec::with_capacity(srcs.len());
    for src in srcs {
        let mut r = Reader::new(src)?;
        r.scope = std::mem::take(&mut scope);
        out.push(r.term()?);
        r.expect(Tok::Eof)?;
        scope = r.scope;
    }
    Ok(out)
}
