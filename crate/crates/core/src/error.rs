//! Crate-wide error type.

use crate::freemonoid::Word;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("letter {letter} outside alphabet 1..={d}")]
    InvalidLetter { letter: u8, d: u8 },

    #[error("alphabet size must be in 1..=255, got {0}")]
    InvalidAlphabet(usize),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },

    #[error("shortlex index overflows u64")]
    IndexOverflow,

    #[error("the empty word has no predecessor")]
    NoPredecessor,

    #[error("word {word} exceeds the stored horizon {horizon}")]
    HorizonExceeded { word: Word, horizon: Word },

    #[error("moment for {word} is within the horizon but not stored")]
    MissingMoment { word: Word },

    #[error("moment family is not normalised: c(∅) = {got}")]
    NotNormalized { got: String },

    #[error("kernel block at {word} is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotNontrivial { word: Word, row: usize, pivot: f64 },

    #[error("Verblunsky coefficient at {word} has modulus {modulus} >= 1")]
    InvalidVerblunsky { word: Word, modulus: f64 },

    #[error("word {word} is outside the family range {upto}")]
    OutOfRange { word: Word, upto: Word },

    #[error("matrix tuple dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("quadrature density is not normalised: total mass {mass}")]
    NormalizationFailure { mass: f64 },

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
