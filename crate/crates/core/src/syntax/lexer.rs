use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    Exists,
    Dot,
    Comma,
    Colon,
    DoubleColon,
    LParen,
    RParen,
    And,
    Arrow,
    Ident(String),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lambda => "`λ`".into(),
            Tok::Exists => "`∃`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::DoubleColon => "`::`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::And => "`∧`".into(),
            Tok::Arrow => "`→`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// A token with its byte range in the source.
#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    (c.is_alphabetic() || c == '_') && c != 'λ'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    (c.is_alphanumeric() || c == '_' || c == '\'') && c != 'λ'
}

/// True for names the lexer reads back as a single identifier token.
pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if is_ident_start(c) => chars.all(is_ident_continue) && s != "EX",
        _ => false,
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(i, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = |tok| Token {
            tok,
            start: i,
            end: i + c.len_utf8(),
        };
        match c {
            '\\' | 'λ' => {
                out.push(single(Tok::Lambda));
                it.next();
            }
            '∃' => {
                out.push(single(Tok::Exists));
                it.next();
            }
            '.' => {
                out.push(single(Tok::Dot));
                it.next();
            }
            ',' => {
                out.push(single(Tok::Comma));
                it.next();
            }
            '(' => {
                out.push(single(Tok::LParen));
                it.next();
            }
            ')' => {
                out.push(single(Tok::RParen));
                it.next();
            }
            '&' | '∧' => {
                out.push(single(Tok::And));
                it.next();
            }
            '→' => {
                out.push(single(Tok::Arrow));
                it.next();
            }
            ':' => {
                it.next();
                if let Some(&(_, ':')) = it.peek() {
                    it.next();
                    out.push(Token {
                        tok: Tok::DoubleColon,
                        start: i,
                        end: i + 2,
                    });
                } else {
                    out.push(single(Tok::Colon));
                }
            }
            '-' => {
                it.next();
                if let Some(&(_, '>')) = it.peek() {
                    it.next();
                    out.push(Token {
                        tok: Tok::Arrow,
                        start: i,
                        end: i + 2,
                    });
                } else {
                    return Err(ParseError::at(src, i, 1, "expected `->`"));
                }
            }
            c if is_ident_start(c) => {
                let mut end = i;
                while let Some(&(j, d)) = it.peek() {
                    if j == i || is_ident_continue(d) {
                        end = j + d.len_utf8();
                        it.next();
                    } else {
                        break;
                    }
                }
                let word = &src[i..end];
                let tok = if word == "EX" {
                    Tok::Exists
                } else {
                    Tok::Ident(word.to_string())
                };
                out.push(Token { tok, start: i, end });
            }
            other => {
                return Err(ParseError::at(
                    src,
                    i,
                    other.len_utf8(),
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        start: src.len(),
        end: src.len(),
    });
    Ok(out)
}

impl SourceSpan {
    /// Converts a byte range into a line/column span (both 1-based, columns
    /// counted in characters).
    pub(crate) fn from_bytes(src: &str, start: usize, len: usize) -> SourceSpan {
        let start = start.min(src.len());
        let before = &src[..start];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |p| p + 1);
        let column = src[line_start..start].chars().count() + 1;
        let end = (start + len).min(src.len());
        let length = src.get(start..end).map_or(0, |s| s.chars().count());
        SourceSpan {
            line,
            column,
            length,
        }
    }
}
