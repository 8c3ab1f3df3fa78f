//! Simulation and verification library for collective quantum state
//! tomography built on Schur-Weyl duality.
//!
//! The crate covers three layers:
//!
//! * **Measurement simulation** — sampling Young diagrams from the
//!   Schur-Weyl distribution of rho^(x)n, drawing the rotated
//!   highest-weight estimate U lambda-bar U' from the continuous POVM,
//!   the pretty-good-measurement variant over the uniform-spectrum
//!   ensemble, and the exact qubit outcome densities.
//! * **Bound verification** — the Schur-polynomial character bounds, irrep
//!   dimension identities, failure-probability tails, and the projector
//!   overlap concentration inequalities, each checked against independent
//!   oracles (exact tensor-space projectors, brute-force tableau sums,
//!   quadrature, Monte Carlo).
//! * **Lower-bound apparatus** — packing-net state families with greedy
//!   probabilistic construction, analytic trace-distance lower bounds,
//!   Holevo information, and the Fano sample-complexity calculator.
//!
//! All randomized routines take a caller-owned RNG; results are
//! reproducible given a seed.

#![allow(clippy::needless_range_loop)]

pub mod concentration;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod packing;
pub mod partitions;
pub mod pgm;
pub mod schur;
pub mod special;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
