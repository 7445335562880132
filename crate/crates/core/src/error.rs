use thiserror::Error;

use crate::Poly;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("ambient context mismatch: {0}")]
    ContextMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("substitution has a nonzero constant term; base change must be local")]
    NotLocal,

    #[error("augmentation is not invertible; localize at s = {s}")]
    NotInvertible { s: Poly },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("index {index} out of range 1..={max} at line {line}, column {column}")]
    IndexOutOfRange {
        index: usize,
        max: usize,
        line: usize,
        column: usize,
    },

    #[error("arity mismatch: operator takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: i32, got: i32 },

    #[error("valuation {got} is below the required {required}")]
    Valuation { required: usize, got: usize },

    #[error("matrix is not antisymmetric at ({row}, {col})")]
    NotAntisymmetric { row: usize, col: usize },

    #[error("test degree {d_test} is too small; need at least {required}")]
    InsufficientTestDegree { d_test: u32, required: u32 },

    #[error("morphism does not respect the DG Lie structure: {0}")]
    MorphismInvalid(String),

    #[error("morphisms are not composable: {0}")]
    NonComposable(String),

    #[error("sample elements live in different hosts")]
    MixedHosts,

    #[error("wrong kind: {0}")]
    KindMismatch(String),
}

impl Error {
    /// Shift the reported line/column of a located error, for expressions
    /// embedded in a larger document.
    pub fn relocate(self, line_offset: usize, column_offset: usize) -> Error {
        let shift = |line: usize, column: usize| {
            let column = if line == 1 { column + column_offset } else { column };
            (line + line_offset, column)
        };
        match self {
            Error::Syntax {
                line,
                column,
                message,
            } => {
                let (line, column) = shift(line, column);
                Error::Syntax {
                    line,
                    column,
                    message,
                }
            }
            Error::UnknownVariable { name, line, column } => {
                let (line, column) = shift(line, column);
                Error::UnknownVariable { name, line, column }
            }
            Error::IndexOutOfRange {
                index,
                max,
                line,
                column,
            } => {
                let (line, column) = shift(line, column);
                Error::IndexOutOfRange {
                    index,
                    max,
                    line,
                    column,
                }
            }
            other => other,
        }
    }

    /// True for errors that carry a source location.
    pub fn is_located(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::IndexOutOfRange { .. }
        )
    }
}
