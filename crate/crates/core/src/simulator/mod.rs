//! Recall evaluation on synthetic omissions.
//!
//! Each trial builds a clean gold map, deletes spans from the translation,
//! degrades the resulting map with parametric noise, runs detection, and
//! walks the sorted report the way a translator would: from the top, until
//! they run into `k` false alarms in a row.
//!
//! The noise model is synthetic. Recall figures depend on it and are only
//! meaningful relative to each other.

mod experiment;
mod gold;
mod inject;
mod noise;
mod scoring;

pub use experiment::{
    replay_trial, run_experiment, run_sweep, write_sweep_text, BlockResult, ExperimentConfig,
    ExperimentResult, GoldConfig, OneOrMany, PatienceSummary, TrialResult,
};
pub use gold::generate_gold_map;
pub use inject::{inject_at, inject_omissions, Omission, ANCHOR_CLEARANCE, MAX_PLACEMENT_ATTEMPTS};
pub use noise::{synthesize_noisy_map, NoiseParams, SPURIOUS_LENGTH};
pub use scoring::{patience_recall, precision, score, Mark, Pattern};

use thiserror::Error;

use crate::bitext_map::MapError;
use crate::detector::DetectError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("could only place {placed} of {requested} omissions of length {length} with gaps of {min_gap}")]
    Placement {
        placed: usize,
        requested: usize,
        length: u64,
        min_gap: u64,
    },
    #[error(
        "omissions at {first} and {second} are {gap} characters apart, need at least {min_gap}"
    )]
    TooClose {
        first: u64,
        second: u64,
        gap: u64,
        min_gap: u64,
    },
    #[error("omission at {start} with length {length} does not fit a translation of {height} characters")]
    OutOfBounds {
        start: u64,
        length: u64,
        height: u64,
    },
    #[error("omission at {start} projects onto less than one character of the original")]
    Degenerate { start: u64 },
    #[error("patience must be at least 1")]
    ZeroPatience,
    #[error("recall needs at least one true omission")]
    NoTruth,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Detect(#[from] DetectError),
}

/// Derive an independent seed for a sub-stream from a parent seed.
pub(crate) fn derive_seed(parent: u64, tag: u64) -> u64 {
    // splitmix64 finalizer over the combined words
    let mut z = parent ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
