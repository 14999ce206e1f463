//! Permutative orthogonal coins and the periodicity of three-state lively
//! quantum walks on cycles.
//!
//! * [`coins`] builds, decomposes and classifies every 3×3 orthogonal matrix
//!   that is a linear sum of permutation matrices.
//! * [`walk`] assembles the walk operator `S(C ⊗ I)` on the cycle `C_n`,
//!   evolves states and exposes the momentum-space blocks `D_k C`.
//! * [`period`] finds the period three ways: closed-form case analysis,
//!   the lcm of eigenvalue orders, and brute-force powering.

pub mod cli;
pub mod coins;
pub mod error;
pub mod exactnum;
pub mod period;
pub mod walk;

pub use error::{Error, Result};
