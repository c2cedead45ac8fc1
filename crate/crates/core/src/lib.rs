//! Goodness-of-fit tests for Haar measure on compact classical groups.
//!
//! The crate samples random rotations (Haar, Kac's walk, products of random
//! reflections and the Jones–Osipov–Rokhlin transform), computes test
//! statistics on samples of them, and provides the null distributions needed
//! to turn those statistics into decisions.

pub mod error;
pub mod kernels;
pub mod linalg;
pub mod nulldist;
pub mod rng;
pub mod samplers;
pub mod special;
pub mod statistics;

pub use error::{Error, Result};
