//! Parsers for the three input formats: the design text format (`.sfd`),
//! the hardware circuit format (`.qhc`) and the JSON mirror of a design.
//!
//! Both text formats are line oriented. A line holds one statement or a
//! `#` comment; statements never span lines. Parsing reports 1-based line
//! numbers, and syntax errors also carry a 1-based column.

use thiserror::Error;

use crate::model::ModelError;

mod circuit;
mod design;
mod json;

pub use circuit::{
    lower_circuit, parse_circuit, parse_circuit_design, CircuitBox, CircuitDocument, Coupling,
};
pub use design::{
    parse_design, parse_design_document, to_design_text, DesignDocument, DesignLine, Statement,
};
pub use json::{design_from_json, design_to_json};

#[derive(Debug, Error)]
pub enum ParseError {
    /// The line does not match the grammar.
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// The line parses but refers to something it must not (unknown id,
    /// duplicate declaration, repeated edge).
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: ModelError,
    },
    /// A format-specific rule is broken (qubit counts, spans, couplings).
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
    /// Whole-document validation failed with no single line to blame.
    #[error(transparent)]
    Model(#[from] ModelError),
    /// The JSON mirror could not be read.
    #[error("invalid design JSON: {0}")]
    Json(String),
}

/// A lexical token: either a bare word or a quoted string, with the 1-based
/// column where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub column: usize,
    pub quoted: bool,
}

/// Splits one line into tokens. Quotes group words into a single token and
/// may contain `#`; outside quotes `#` starts a comment running to the end
/// of the line. The returned bool is true when the line carried a comment.
pub(crate) fn tokenize(
    line_no: usize,
    line: &str,
) -> Result<(Vec<Token>, Option<String>), ParseError> {
    let mut tokens = Vec::new();
    let mut chars = line.chars().enumerate().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            let comment: String = line.chars().skip(i + 1).collect();
            return Ok((tokens, Some(comment.trim().to_string())));
        } else if c == '"' {
            chars.next();
            let mut text = String::new();
            let mut closed = false;
            for (_, qc) in chars.by_ref() {
                if qc == '"' {
                    closed = true;
                    break;
                }
                text.push(qc);
            }
            if !closed {
                return Err(ParseError::Syntax {
                    line: line_no,
                    column: i + 1,
                    message: "unterminated quoted string".into(),
                });
            }
            tokens.push(Token {
                text,
                column: i + 1,
                quoted: true,
            });
        } else {
            let mut text = String::new();
            while let Some(&(_, wc)) = chars.peek() {
                if wc.is_whitespace() || wc == '"' || wc == '#' {
                    break;
                }
                text.push(wc);
                chars.next();
            }
            tokens.push(Token {
                text,
                column: i + 1,
                quoted: false,
            });
        }
    }
    Ok((tokens, None))
}
