//! Granular-ball resampling engine for noisy imbalanced datasets.
//!
//! The crate decomposes a dataset into granular balls (hyperspheres built by
//! adaptive Lloyd splitting), ranks minority balls by a density entropy,
//! spreads the class deficit across informative seed balls by their log-space
//! sparsity, and draws synthetic samples from isotropic Gaussians clipped to
//! each ball's support sphere. Classic SMOTE, ENN and Tomek-link stages plus a
//! small cross-validated harness round out the toolkit.

pub mod baselines;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod generators;
pub mod geometry;
pub mod granular;
pub mod informed;
pub mod seeding;

pub use error::{Error, Result};
