//! Text format for theories and structured output for extensions.
//!
//! ```text
//! # comment
//! fact f1.
//! r1: f1, O[a], -O[~b], O[c & d] =O> a * b.
//! r2: ~a ~> ~b.
//! r1 > r2.
//! ```

mod emit;
mod lexer;
mod parser;

use std::fmt;

use crate::theory::Theory;

pub use emit::{emit_extension, ingest_extension, ExtensionFormat, IngestError};

/// Location of a parsed element: 1-based line and column of its first
/// character plus its byte range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    /// Smallest span covering `self` and `other`.
    pub fn join(self, other: SourceSpan) -> SourceSpan {
        let (first, _) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        SourceSpan {
            line: first.line,
            column: first.column,
            start: first.start,
            end: self.end.max(other.end),
        }
    }

    fn at_end(src: &str) -> SourceSpan {
        let line = src.matches('\n').count() + 1;
        let column = src.len() - src.rfind('\n').map_or(0, |i| i + 1) + 1;
        SourceSpan {
            line,
            column,
            start: src.len(),
            end: src.len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span,
        }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}: {sev}: {}",
            self.span.line, self.span.column, self.message
        )
    }
}

/// A parsed theory with its validation warnings.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub theory: Theory,
    pub warnings: Vec<Diagnostic>,
}

/// Parses a theory. On failure every error found is returned, sorted by
/// position.
pub fn parse_theory(text: &str) -> Result<Parsed, Vec<Diagnostic>> {
    parser::parse(text)
}

/// Canonical text of `t`: facts, then rules by label, then superiority.
pub fn serialize_theory(t: &Theory) -> String {
    let mut out = String::from("# defeasible deontic theory\n");
    for f in t.facts() {
        out.push_str(&format!("fact {f}.\n"));
    }
    for r in t.rules() {
        out.push_str(&format!("{r}.\n"));
    }
    for (a, b) in t.superiority() {
        out.push_str(&format!("{a} > {b}.\n"));
    }
    out
}
