//! Monte Carlo laboratory for random sequences of pseudo s-th powers.
//!
//! A pseudo s-th power sequence `A` contains each integer `n >= 1`
//! independently with probability `n^{-1+1/s} / s`. This crate samples such
//! sequences reproducibly, computes their s-fold sumsets with word-parallel
//! bitmaps, evaluates the weighted composition sums that govern expected
//! representation counts, and drives seeded scans for exceptional integers.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitmap;
pub mod constants;
pub mod error;
pub mod experiments;
pub mod io;
pub mod lemmasums;
pub mod model;
pub mod sumset;

pub use bitmap::Bitmap;
pub use constants::{gamma, lambda, thm1_threshold, SParams, ThresholdTable};
pub use error::{Error, Result};
pub use model::{
    build_complement, inclusion_probability, sample_sequence, ComplementSequence, ComplementSpec,
    CountingFunction, SequenceSample,
};
pub use sumset::{
    count_representations, density, gap_stats, naive_sumset, s_fold_sumset, SumsetBitmap,
};
