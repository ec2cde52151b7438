use thiserror::Error;

/// Errors surfaced by the exact pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid degree {0}: n must be odd and > 1")]
    InvalidDegree(usize),

    #[error("input matrix must have determinant 1")]
    NotUnimodular,

    #[error("element is not hyperbolic: trace^2 - 4 <= 0")]
    NotHyperbolic,

    #[error("element is not loxodromic: trace^2 - 4 <= 0")]
    NotLoxodromic,

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("bending conjugator t*rho(gamma) + I is singular")]
    SingularConjugator,

    #[error("det(t*rho(gamma)+I) has no exact {0}-th root; normalized conjugator is irrational")]
    IrrationalNormalization(usize),

    #[error("bend parameter must be >= 0, got {0}")]
    NegativeBendParameter(String),

    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    #[error("representation is not absolutely irreducible (commutant dimension {0})")]
    NotIrreducible(usize),

    #[error("trace of word {0} lies outside Q; Galois descent impossible")]
    NonRationalTrace(String),

    #[error("norm equation search exhausted (bound {bound})")]
    NormSearchExhausted { bound: u64 },

    #[error("lattice saturation diverged: denominator exceeded bound {bound}")]
    SaturationDiverged { bound: u64 },

    #[error("deeper quadratic towers are not supported")]
    UnsupportedTower,

    #[error("word syntax error: {0}")]
    WordSyntax(String),

    #[error("JSON decode error: {0}")]
    JsonDecode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
