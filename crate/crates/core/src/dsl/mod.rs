//! Text formats: infix expressions and INI-style case files.

use std::fmt;

pub mod casefile;
pub mod lexer;
pub mod parser;

pub use casefile::{parse_case, print_case, CaseFile};
pub use parser::{parse_expr, parse_expr_at};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    UnknownFunction,
    /// Well-formed text that does not describe a valid case.
    Semantic,
}

impl ErrorKind {
    fn label(self) -> &'static str {
        match self {
            ErrorKind::Lexical => "lexical error",
            ErrorKind::Syntax => "syntax error",
            ErrorKind::UnknownFunction => "unknown function",
            ErrorKind::Semantic => "invalid case",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    pub kind: ErrorKind,
    pub message: String,
    pub span: Span,
    /// The offending source line, for the caret excerpt.
    pub source_line: Option<String>,
}

impl DslError {
    pub fn new(kind: ErrorKind, message: impl Into<String>, span: Span) -> DslError {
        DslError {
            kind,
            message: message.into(),
            span,
            source_line: None,
        }
    }

    pub fn with_source(mut self, line: &str) -> DslError {
        self.source_line = Some(line.to_string());
        self
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.span.line, self.span.col, self.kind.label(), self.message)?;
        if let Some(src) = &self.source_line {
            let pad: String = src
                .chars()
                .take(self.span.col.saturating_sub(1))
                .map(|c| if c == '\t' { '\t' } else { ' ' })
                .collect();
            write!(f, "\n  {src}\n  {pad}^")?;
        }
        Ok(())
    }
}

impl std::error::Error for DslError {}
