//! Generic-case experiments: random words, Dyck pairings, back-to-base walks
//! in HNN extensions and seeded Monte-Carlo estimators.

mod base;
mod dyck;
mod estimate;
mod measure;
mod pairing;
mod walk;

pub use base::{Baumslag, Bs, Bs12OverZ, BS_SPAN_CAP, HnnInstance, HybridInt, Regime, SmallBs, Z2};
pub use dyck::{catalan, enumerate_dyck, DyckWord, DYCK_CAP};
pub use estimate::{
    back_to_base_reference, chunk_rng, estimate_back_to_base, estimate_back_to_base_given_m,
    estimate_back_to_base_smc, estimate_in_h, estimate_no_pinch, estimate_pairing_bounds,
    format_sig6, in_h_bound, match_bound, success_bound, no_pinch_bound, back_to_base_bound, read_csv,
    wilson, write_csv, ExperimentReport, PairingReport, SmcConfig, MIN_SAMPLES, PAIRING_CAP, Z_99,
};
pub use measure::{sample_mu_sigma, Measure, REDUCED_ALPHABET};
pub use pairing::{matches, successful};
pub use walk::{hnn_walk_trace, walk_in_base, Trace, WalkState};

use thiserror::Error;

use crate::baumslag::BetaFactorization;
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenericError {
    #[error("{samples} samples is below the minimum {min}")]
    TooFewSamples { samples: u64, min: u64 },
    #[error("{0}")]
    BadParameter(String),
    #[error("Dyck enumeration is capped at n = {cap}, got {n}")]
    DyckCap { n: usize, cap: usize },
    #[error("not a Dyck word")]
    NotDyck,
    #[error("word has {betas} β-letters, Dyck word has length {expected}")]
    LengthMismatch { betas: usize, expected: usize },
}

/// Whether `w` lies in `BS(1,2)`, by full Britton reduction.
pub fn in_h(w: &Word) -> bool {
    BetaFactorization::from_word(w).britton_reduce().beta_length() == 0
}
