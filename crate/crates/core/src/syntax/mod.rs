//! Concrete syntax for terms, types and lexicon files.

mod elaborate;
mod lexer;
mod lexfile;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

use crate::term::Term;
use crate::types::SemType;
use crate::typing::TypingEnv;

pub use elaborate::Signature;
pub use lexfile::{parse_lexicon, LexiconError, LexiconFile, LexiconLine};
pub use render::{render, render_with};

/// Location in source text. Lines and columns are 1-based; columns and
/// lengths count characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    /// Moves the span by `lines` lines; when it is on the first line, also
    /// by `columns` columns.
    pub(crate) fn shifted(mut self, lines: usize, columns: usize) -> Self {
        self.span = shift(self.span, lines, columns);
        self
    }
}

fn shift(mut span: SourceSpan, lines: usize, columns: usize) -> SourceSpan {
    if span.line == 1 {
        span.column += columns;
    }
    span.line += lines;
    span
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{span}: type mismatch: expected {expected}, found {found}")]
    TypeMismatch {
        span: SourceSpan,
        expected: String,
        found: String,
    },
}

impl SyntaxError {
    pub fn span(&self) -> SourceSpan {
        match self {
            SyntaxError::Parse(e) => e.span,
            SyntaxError::TypeMismatch { span, .. } => *span,
        }
    }

    pub(crate) fn shifted(self, lines: usize, columns: usize) -> Self {
        match self {
            SyntaxError::Parse(e) => SyntaxError::Parse(e.shifted(lines, columns)),
            SyntaxError::TypeMismatch {
                span,
                expected,
                found,
            } => SyntaxError::TypeMismatch {
                span: shift(span, lines, columns),
                expected,
                found,
            },
        }
    }
}

/// Parses a closed term against the core signature.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut sig = Signature::core();
    parse_term_with(text, &mut sig, None, &TypingEnv::new()).map(|(t, _)| t)
}

/// Parses a term with an explicit signature, an optional expected type and
/// a set of free variables. Constants not yet in `sig` are added with
/// their inferred types.
pub fn parse_term_with(
    text: &str,
    sig: &mut Signature,
    expected: Option<&SemType>,
    free: &TypingEnv,
) -> Result<(Term, SemType), SyntaxError> {
    let surface = parser::parse_surface(text)?;
    elaborate::elaborate(text, &surface, sig, expected, free)
}

pub fn parse_type(text: &str) -> Result<SemType, ParseError> {
    parser::parse_type_text(text)
}

/// True if `name` reads back as a single identifier.
pub fn is_identifier(name: &str) -> bool {
    lexer::is_identifier(name)
}
