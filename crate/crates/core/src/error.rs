//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by constructors and checked operations.
///
/// Arithmetic on values that were validated at construction time panics on
/// structural misuse (e.g. adding polynomials of different widths via `+`)
/// rather than returning `Err`; the checked entry points used at API and I/O
/// boundaries return these errors instead.
#[derive(Debug, Error)]
pub enum OiError {
    /// A morphism image vector is not strictly increasing or escapes its target.
    #[error("invalid OI-morphism: {0}")]
    InvalidMorphism(String),

    /// Two widths that must agree do not.
    #[error("width mismatch: {0}")]
    WidthMismatch(String),

    /// A variable, basis key, or generator index does not belong to the
    /// structure it is used with.
    #[error("invalid reference: {0}")]
    InvalidReference(String),

    /// Textual input (polynomials, keys, signatures, CLI values) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A point evaluation was missing a coordinate, or a matrix shape is wrong.
    #[error("evaluation error: {0}")]
    Evaluation(String),

    /// The requested construction is not defined for the given input
    /// (e.g. dualizing a module with positive-width generators).
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A resource guard was exceeded (width caps and similar).
    #[error("limit exceeded: {0}")]
    Limit(String),
}

impl OiError {
    pub fn parse(msg: impl Into<String>) -> Self {
        OiError::Parse(msg.into())
    }
}
