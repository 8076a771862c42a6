use thiserror::Error;

use crate::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("line {}, column {}: expected {expected}, found {found}", .span.line, .span.column)]
    Parse { span: Span, expected: String, found: String },

    #[error("line {}, column {}: undefined identifier `{name}`", .span.line, .span.column)]
    UndefinedIdentifier { span: Span, name: String },

    #[error("line {}, column {}: `{name}` is {actual}, expected {expected}", .span.line, .span.column)]
    TypeMismatch { span: Span, name: String, expected: String, actual: String },

    #[error("invalid scenario parameters: {0}")]
    InvalidParameters(String),
}

impl DslError {
    pub fn span(&self) -> Option<Span> {
        match self {
            DslError::Parse { span, .. }
            | DslError::UndefinedIdentifier { span, .. }
            | DslError::TypeMismatch { span, .. } => Some(*span),
            DslError::InvalidParameters(_) => None,
        }
    }
}
