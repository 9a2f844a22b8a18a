use thiserror::Error;

/// Errors reported by the library.
///
/// Variants mirror the failure modes of the public operations; the CLI maps
/// all of them to exit code 1 except [`Error::VerificationFailed`], which maps
/// to exit code 2 (an internally produced certificate failed its re-check,
/// which must never happen).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no top simplices")]
    EmptyInput,

    #[error("top simplices have mixed dimensions ({0} vs {1})")]
    MixedDimension(usize, usize),

    #[error("simplex {0:?} repeats a vertex")]
    DegenerateSimplex(Vec<String>),

    #[error("face {0:?} lies in more than two top simplices")]
    NonPseudomanifold(Vec<String>),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("operation requires a closed, oriented complex")]
    NotOrientedClosed,

    #[error("degree {degree} out of range for dimension {dimension}")]
    DegreeOutOfRange { degree: usize, dimension: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("cochain is not closed")]
    NotClosed,

    #[error("chain is not a cycle")]
    NotACycle,

    #[error("cup product degree {0} + {1} exceeds dimension {2}")]
    DegreeOverflow(usize, usize, usize),

    #[error("cochain fails the nonvanishing predicate: {0}")]
    VanishingInput(String),

    #[error("intrinsic-harmonicity decision supports degrees 1 and n-1 only, got {0}")]
    UnsupportedDegree(usize),

    #[error("certificate coverage gap at dual edge {0}")]
    CoverageGap(usize),

    #[error("flux has empty support")]
    EmptySupport,

    #[error("operation requires an orientable base")]
    NonOrientableBase,

    #[error("operation requires a non-orientable base")]
    OrientableBase,

    #[error("Euler cocycle is not closed")]
    NotClosedCocycle,

    #[error("bad degrees: expected 1 <= k < n, got k={0}, n={1}")]
    BadDegrees(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
