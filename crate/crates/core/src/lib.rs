//! Boosted phoneme classification toolkit.
//!
//! - [`dataset`]: labeled feature vectors, CSV I/O, seeded splits, synthetic
//!   Gaussian-mixture data.
//! - [`mfcc`] and [`wav`]: 39-dimensional MFCC+Δ+ΔΔ features from 16-bit PCM.
//! - [`c45`]: gain-ratio decision trees with sample weights.
//! - [`svm`]: RBF SVMs trained by SMO, combined one-against-one.
//! - [`adaboost`]: AdaBoost.M1 over any [`classifier::WeakLearner`].
//! - [`harness`]: config-driven experiment runner and result tables.

// Validation deliberately uses `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adaboost;
pub mod c45;
pub mod classifier;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod mfcc;
pub mod svm;
pub mod wav;

pub use classifier::{Classifier, WeakLearner};
pub use dataset::Dataset;
pub use error::{Error, Result};
