//! Exact and asymptotic counting of non-interacting Bose-gas states.
//!
//! Given a positive integer spectrum with multiplicities (the harmonic
//! ladder, round spheres, or a user-supplied list), this crate computes
//! exact microcanonical counts with big-integer arithmetic, evaluates the
//! grand potential and its analytic decomposition on the half-plane, and
//! compares the exact counts against saddle-point and Meinardus-type
//! asymptotics with explicit error diagnostics.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod gpf;
pub mod specfun;
pub mod spectrum;
pub mod util;

pub use error::{Error, Result};
