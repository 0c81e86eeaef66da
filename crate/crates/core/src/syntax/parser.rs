//! Recursive-descent parser for terms and types.
//!
//! ```text
//! term   := lam | exists | conj
//! lam    := ("\" | "λ") binder ("," ? binder)* "." term
//! exists := ("EX" | "∃") binder ("," ? binder)* "." term
//! binder := ident (":" type)?
//! conj   := app (("&" | "∧") (app | lam | exists))*
//! app    := atom atom*
//! atom   := primary ("::" atom)?
//! primary:= ident | ident"(" term ("," term)* ")" | "(" term (":" type)? ")"
//! type   := tatom ("->" type)? ; tatom := i | t | v | g | "(" type ")"
//! ```
//!
//! `f(a, b)` is call sugar for `f a b` and only applies when the
//! parenthesis directly follows the identifier.

use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::types::{Atom, SemType};

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Range {
    pub start: usize,
    pub end: usize,
}

impl Range {
    fn join(self, other: Range) -> Range {
        Range {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Binder {
    pub name: String,
    pub ty: Option<SemType>,
}

#[derive(Clone, Debug)]
pub(crate) enum Surface {
    Ident(String, Range),
    Lam(Vec<Binder>, Box<Surface>, Range),
    Exists(Vec<Binder>, Box<Surface>, Range),
    App(Box<Surface>, Box<Surface>, Range),
    And(Box<Surface>, Box<Surface>, Range),
    Cons(Box<Surface>, Box<Surface>, Range),
    Ascribe(Box<Surface>, SemType, Range),
}

impl Surface {
    pub(crate) fn range(&self) -> Range {
        match self {
            Surface::Ident(_, r)
            | Surface::Lam(_, _, r)
            | Surface::Exists(_, _, r)
            | Surface::App(_, _, r)
            | Surface::And(_, _, r)
            | Surface::Cons(_, _, r)
            | Surface::Ascribe(_, _, r) => *r,
        }
    }
}

pub(crate) struct Parser<'s> {
    src: &'s str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'s> Parser<'s> {
    pub(crate) fn new(src: &'s str) -> Result<Self, ParseError> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, tok: &Token, message: impl Into<String>) -> ParseError {
        // End-of-input errors point at the last character so the span stays
        // inside the text.
        if tok.tok == Tok::Eof && !self.src.is_empty() {
            let last = self.src.char_indices().last().map_or(0, |(i, _)| i);
            return ParseError::at(self.src, last, 1, message);
        }
        ParseError::at(self.src, tok.start, tok.end - tok.start, message)
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let tok = self.peek();
        self.error(
            tok,
            format!("expected {what}, found {}", tok.tok.describe()),
        )
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    pub(crate) fn parse_term(&mut self) -> Result<Surface, ParseError> {
        match self.peek().tok {
            Tok::Lambda | Tok::Exists => self.parse_binder_term(),
            _ => self.parse_conj(),
        }
    }

    fn parse_binder_term(&mut self) -> Result<Surface, ParseError> {
        let kw = self.bump();
        let mut binders = Vec::new();
        loop {
            let tok = self.peek().clone();
            match tok.tok {
                Tok::Ident(name) => {
                    self.bump();
                    let ty = if self.peek().tok == Tok::Colon {
                        self.bump();
                        Some(self.parse_type()?)
                    } else {
                        None
                    };
                    binders.push(Binder { name, ty });
                    if self.peek().tok == Tok::Comma {
                        self.bump();
                    }
                }
                Tok::Dot if !binders.is_empty() => {
                    self.bump();
                    break;
                }
                _ => {
                    return Err(self.unexpected(if binders.is_empty() {
                        "a bound variable"
                    } else {
                        "a bound variable or `.`"
                    }))
                }
            }
        }
        let body = self.parse_term()?;
        let range = Range {
            start: kw.start,
            end: body.range().end,
        };
        Ok(match kw.tok {
            Tok::Lambda => Surface::Lam(binders, Box::new(body), range),
            _ => Surface::Exists(binders, Box::new(body), range),
        })
    }

    fn parse_conj(&mut self) -> Result<Surface, ParseError> {
        let first = self.parse_app()?;
        let mut items = vec![first];
        while self.peek().tok == Tok::And {
            self.bump();
            match self.peek().tok {
                Tok::Lambda | Tok::Exists => {
                    // A binder swallows the rest of the conjunction.
                    items.push(self.parse_binder_term()?);
                    break;
                }
                _ => items.push(self.parse_app()?),
            }
        }
        let last = items.pop().expect("at least one conjunct");
        Ok(items.into_iter().rev().fold(last, |acc, item| {
            let range = item.range().join(acc.range());
            Surface::And(Box::new(item), Box::new(acc), range)
        }))
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::LParen)
    }

    fn parse_app(&mut self) -> Result<Surface, ParseError> {
        if !self.starts_atom() {
            return Err(self.unexpected("a term"));
        }
        let mut head = self.parse_atom()?;
        while self.starts_atom() {
            let arg = self.parse_atom()?;
            let range = head.range().join(arg.range());
            head = Surface::App(Box::new(head), Box::new(arg), range);
        }
        Ok(head)
    }

    fn parse_atom(&mut self) -> Result<Surface, ParseError> {
        let head = self.parse_primary()?;
        if self.peek().tok == Tok::DoubleColon {
            self.bump();
            if !self.starts_atom() {
                return Err(self.unexpected("a context after `::`"));
            }
            let tail = self.parse_atom()?;
            let range = head.range().join(tail.range());
            return Ok(Surface::Cons(Box::new(head), Box::new(tail), range));
        }
        Ok(head)
    }

    fn parse_primary(&mut self) -> Result<Surface, ParseError> {
        if !self.starts_atom() {
            return Err(self.unexpected("a term"));
        }
        let tok = self.bump();
        match tok.tok {
            Tok::Ident(name) => {
                let range = Range {
                    start: tok.start,
                    end: tok.end,
                };
                let ident = Surface::Ident(name, range);
                let next = self.peek();
                if next.tok == Tok::LParen && next.start == tok.end {
                    let open = self.bump();
                    let mut out = ident;
                    loop {
                        let arg = self.parse_term()?;
                        let range = out.range().join(arg.range());
                        out = Surface::App(Box::new(out), Box::new(arg), range);
                        match self.peek().tok {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RParen => {
                                let close = self.bump();
                                let range = out.range().join(Range {
                                    start: close.start,
                                    end: close.end,
                                });
                                return Ok(with_range(out, range));
                            }
                            Tok::Eof => return Err(self.error(&open, "unclosed `(`")),
                            _ => return Err(self.unexpected("`,` or `)`")),
                        }
                    }
                }
                Ok(ident)
            }
            Tok::LParen => {
                let inner = self.parse_term()?;
                let inner = if self.peek().tok == Tok::Colon {
                    self.bump();
                    let ty = self.parse_type()?;
                    let range = inner.range();
                    Surface::Ascribe(Box::new(inner), ty, range)
                } else {
                    inner
                };
                match self.peek().tok {
                    Tok::RParen => {
                        let close = self.bump();
                        Ok(with_range(
                            inner,
                            Range {
                                start: tok.start,
                                end: close.end,
                            },
                        ))
                    }
                    Tok::Eof => Err(self.error(&tok, "unclosed `(`")),
                    _ => Err(self.unexpected("`)`")),
                }
            }
            _ => unreachable!("checked by starts_atom"),
        }
    }

    pub(crate) fn parse_type(&mut self) -> Result<SemType, ParseError> {
        if !matches!(self.peek().tok, Tok::Ident(_) | Tok::LParen) {
            return Err(self.unexpected("a type"));
        }
        let tok = self.bump();
        let dom = match &tok.tok {
            Tok::Ident(name) => match Atom::from_name(name) {
                Some(a) => SemType::Atom(a),
                None => {
                    return Err(self.error(
                        &tok,
                        format!("unknown type `{name}` (expected i, t, v or g)"),
                    ))
                }
            },
            Tok::LParen => {
                let inner = self.parse_type()?;
                match self.peek().tok {
                    Tok::RParen => {
                        self.bump();
                    }
                    Tok::Eof => return Err(self.error(&tok, "unclosed `(`")),
                    _ => return Err(self.unexpected("`)`")),
                }
                inner
            }
            _ => unreachable!("checked above"),
        };
        if self.peek().tok == Tok::Arrow {
            self.bump();
            let cod = self.parse_type()?;
            return Ok(SemType::arrow(dom, cod));
        }
        Ok(dom)
    }
}

fn with_range(s: Surface, r: Range) -> Surface {
    match s {
        Surface::Ident(n, _) => Surface::Ident(n, r),
        Surface::Lam(b, body, _) => Surface::Lam(b, body, r),
        Surface::Exists(b, body, _) => Surface::Exists(b, body, r),
        Surface::App(f, a, _) => Surface::App(f, a, r),
        Surface::And(f, a, _) => Surface::And(f, a, r),
        Surface::Cons(f, a, _) => Surface::Cons(f, a, r),
        Surface::Ascribe(t, ty, _) => Surface::Ascribe(t, ty, r),
    }
}

pub(crate) fn parse_surface(src: &str) -> Result<Surface, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.parse_term()?;
    p.finish()?;
    Ok(t)
}

pub(crate) fn parse_type_text(src: &str) -> Result<SemType, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.parse_type()?;
    p.finish()?;
    Ok(t)
}
