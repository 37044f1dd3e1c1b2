//! Line-oriented text formats.
//!
//! Structure files (`.isgd`):
//!
//! ```text
//! [objects]
//! u v
//! [arrows]
//! a : u -> v
//! a* : v -> u
//! [mul]
//! a a* = aa*
//! [inverse]
//! a = a*
//! ```
//!
//! Action files (`.pact`):
//!
//! ```text
//! structure = demo_s.isgd
//! [carrier]
//! 1 2 3 4
//! [domain a] = 4
//! [map a] = 1->4
//! ```
//!
//! Names are whitespace-free tokens; `*` is an ordinary character. `#` starts
//! a comment.

mod action_file;
mod render;
mod structure;

use std::fmt;

pub use action_file::{action_header, parse_action, print_action};
pub use render::{render_dot, render_json, render_table, GlobalizationJson};
pub use structure::{parse_structure, print_structure, ParsedStructure};

/// A positioned parse error; `line` and `column` are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A whitespace-delimited token with its 1-based column.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

/// One significant line: comments stripped, blank lines skipped.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub raw: &'a str,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    /// 1-based character column of `sub`, which must be a subslice of the line.
    pub fn column_of(&self, sub: &str) -> usize {
        let start = sub.as_ptr() as usize - self.raw.as_ptr() as usize;
        self.raw[..start].chars().count() + 1
    }

    pub fn tokens(&self, sub: &'a str) -> Vec<Token<'a>> {
        sub.split_whitespace()
            .map(|t| Token {
                text: t,
                column: self.column_of(t),
            })
            .collect()
    }

    pub fn error(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, column, message)
    }
}

pub(crate) fn significant_lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some(Line {
            number: i + 1,
            raw,
            text: body,
        })
    })
}

/// `[name]` or `[kind arg]` at the start of a line, with whatever follows.
pub(crate) struct Header<'a> {
    pub words: Vec<Token<'a>>,
    pub rest: &'a str,
}

pub(crate) fn header<'a>(line: &Line<'a>) -> Result<Option<Header<'a>>, ParseError> {
    let Some(inner) = line.text.strip_prefix('[') else {
        return Ok(None);
    };
    let close = inner
        .find(']')
        .ok_or_else(|| line.error(1, "unterminated section header"))?;
    let words = line.tokens(&inner[..close]);
    if words.is_empty() {
        return Err(line.error(1, "empty section header"));
    }
    Ok(Some(Header {
        words,
        rest: &inner[close + 1..],
    }))
}
