//! Source diagnostics: `line:col: message`.

use crate::ast::Pos;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            pos,
            message: message.into(),
        }
    }

    /// Format with a file name prefix, the shape stderr diagnostics use.
    pub fn with_file(&self, file: &str) -> String {
        format!("{file}:{}: {}", self.pos, self.message)
    }
}
