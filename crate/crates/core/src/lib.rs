//! Quantum k-nearest-neighbor image classification.
//!
//! The pipeline extracts an 80-component color+texture descriptor per image,
//! amplitude-encodes the descriptors into simulated quantum registers, measures
//! pairwise similarity with a swap test, transfers the distances into a register
//! superposition via amplitude estimation, and finds the k nearest training
//! images with a Grover-based minimum search before a majority vote.
//!
//! Modules:
//! - [`features`]: classical descriptor extraction (HSB histogram + GLCM texture).
//! - [`qsim`]: dense statevector simulator (registers, gates, measurement).
//! - [`qknn`]: state preparation, swap-test distances, amplitude estimation,
//!   threshold search and k-minimum search, majority vote.
//! - [`pipeline`]: dataset handling, orchestration, classical oracle, reports.

pub mod config;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod qknn;
pub mod qsim;

pub use config::SimConfig;
pub use error::{Error, Result};
