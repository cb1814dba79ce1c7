//! Throughput-oriented polar coded modulation.
//!
//! Polar encoding and SC/SCL decoding, set-partitioned QAM with multistage
//! demapping, Gaussian-approximation code design that maximizes HARQ
//! throughput rather than minimizing FER, Monte-Carlo simulation of
//! level-dependent and level-independent HARQ, and golden-section rate
//! matching for list decoding.

pub mod construction;
pub mod error;
pub mod harq;
pub mod mlpcm;
pub mod modem;
pub mod par;
pub mod polar;
pub mod ratematch;
pub mod rng;

pub use error::{Error, Result};
pub use par::Execution;
