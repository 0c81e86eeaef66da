//! Line-oriented lexicon files.
//!
//! ```text
//! # comment
//! mode: event
//! smile : i -> v -> g -> (g -> t) -> t = \s e a b. Smile(e) & Ag(e,s) & b(e::a)
//! ```
//!
//! Constant types are shared across the whole file, so a predicate used
//! at two different types is reported at its second use.

use thiserror::Error;

use super::{elaborate::Signature, parser, ParseError, SourceSpan, SyntaxError};
use crate::lexicon::Mode;
use crate::term::Term;
use crate::types::SemType;
use crate::typing::TypingEnv;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconLine {
    pub word: String,
    pub ty: SemType,
    pub term: Term,
    /// 1-based line number in the file.
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LexiconFile {
    pub mode: Option<Mode>,
    pub entries: Vec<LexiconLine>,
    /// Constant types seen in the file, core constants included.
    pub signature: Signature,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{span}: entry `{word}`: type mismatch: expected {expected}, found {found}")]
    TypeMismatch {
        word: String,
        span: SourceSpan,
        expected: String,
        found: String,
    },
    #[error("line {line}: duplicate entry `{word}`")]
    DuplicateWord { word: String, line: usize },
}

impl LexiconError {
    pub fn span(&self) -> SourceSpan {
        match self {
            LexiconError::Parse(e) => e.span,
            LexiconError::TypeMismatch { span, .. } => *span,
            LexiconError::DuplicateWord { line, .. } => SourceSpan {
                line: *line,
                column: 1,
                length: 0,
            },
        }
    }
}

fn line_error(
    line: usize,
    column: usize,
    length: usize,
    message: impl Into<String>,
) -> LexiconError {
    LexiconError::Parse(ParseError {
        span: SourceSpan {
            line,
            column,
            length,
        },
        message: message.into(),
    })
}

/// Character column (1-based) of byte offset `at` in `line`.
fn column(line: &str, at: usize) -> usize {
    line[..at].chars().count() + 1
}

pub fn parse_lexicon(text: &str) -> Result<LexiconFile, LexiconError> {
    let mut file = LexiconFile {
        mode: None,
        entries: Vec::new(),
        signature: Signature::core(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if content.trim().is_empty() {
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let body = content.trim_end();

        if let Some(rest) = body[lead..].strip_prefix("mode:") {
            let name = rest.trim();
            let at = body.len() - rest.trim_start().len();
            let mode = match name {
                "event" => Mode::Event,
                "baseline" => Mode::Baseline,
                _ => {
                    return Err(line_error(
                        lineno,
                        column(body, at),
                        name.chars().count(),
                        format!("unknown mode `{name}` (expected event or baseline)"),
                    ))
                }
            };
            if file.mode.is_some() || !file.entries.is_empty() {
                return Err(line_error(
                    lineno,
                    lead + 1,
                    5,
                    "`mode:` must come once, before any entry",
                ));
            }
            file.mode = Some(mode);
            continue;
        }

        let Some(colon) = body.find(':') else {
            return Err(line_error(
                lineno,
                column(body, lead),
                body[lead..].chars().count(),
                "expected `word : TYPE = TERM`",
            ));
        };
        let word = body[lead..colon].trim();
        if !super::is_identifier(word) {
            return Err(line_error(
                lineno,
                column(body, lead),
                word.chars().count().max(1),
                format!("invalid word `{word}`"),
            ));
        }
        let Some(eq) = body[colon..].find('=').map(|p| p + colon) else {
            return Err(line_error(
                lineno,
                column(body, colon),
                1,
                "missing `=` before the term",
            ));
        };

        let ty_text = &body[colon + 1..eq];
        let ty = parser::parse_type_text(ty_text)
            .map_err(|e| e.shifted(idx, column(body, colon + 1) - 1))?;

        let term_start = eq + 1;
        let term_text = &body[term_start..];
        let shift_cols = column(body, term_start) - 1;
        let surface = parser::parse_surface(term_text).map_err(|e| e.shifted(idx, shift_cols))?;
        let (term, _) = super::elaborate::elaborate(
            term_text,
            &surface,
            &mut file.signature,
            Some(&ty),
            &TypingEnv::new(),
        )
        .map_err(|e| match e.shifted(idx, shift_cols) {
            SyntaxError::Parse(p) => LexiconError::Parse(p),
            SyntaxError::TypeMismatch {
                span,
                expected,
                found,
            } => LexiconError::TypeMismatch {
                word: word.to_string(),
                span,
                expected,
                found,
            },
        })?;

        if file.entries.iter().any(|e| e.word == word) {
            return Err(LexiconError::DuplicateWord {
                word: word.to_string(),
                line: lineno,
            });
        }
        file.entries.push(LexiconLine {
            word: word.to_string(),
            ty,
            term,
            line: lineno,
        });
    }
    Ok(file)
}
