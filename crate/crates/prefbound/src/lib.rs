//! Expressiveness bounds for Euclidean ideal-point preference models.
//!
//! When individuals and alternatives live in a d-dimensional Euclidean
//! space and "closer means preferred", not every collection of rankings is
//! realizable. This crate computes three theoretical bounds on that gap
//! and verifies each against brute-force oracles at desk scale:
//!
//! * [`bounds::pathology_probability_lower_bound`]: a lower bound on the
//!   probability that a uniformly random profile contains a circulant
//!   sub-profile, which rules out a d-dimensional representation;
//! * [`bounds::representable_count_bound`]: an upper bound on how many of
//!   the A! rankings can be simultaneously representable;
//! * [`bounds::info_loss_lower_bound`]: a lower bound on the expected
//!   adjacent-swap distance between a random ranking and its nearest
//!   representable approximation.
//!
//! Module map: [`perm`] holds the permutation/preference types and the
//! Kendall tau metric; [`permutohedron`] the adjacent-swap graph and its
//! ball sizes; [`pathology`] the circulant detector and the banned
//! preference test; [`bounds`] the log-space bound evaluation; [`oracles`]
//! exhaustive and Monte Carlo ground truth plus the [`oracles::verify_all`]
//! harness; [`logspace`] the shared numeric kernel.

pub mod bounds;
pub mod error;
pub mod logspace;
pub mod oracles;
pub mod pathology;
pub mod perm;
pub mod permutohedron;

pub use error::{Error, Result};
