//! Schmidt-restricted operator norms `‖X‖_{S(k)}` and cone norms `‖X‖_C` of
//! bipartite operators.
//!
//! Upper bounds come from a family of semidefinite programs built on
//! `k`-positive maps and solved by an embedded primal-dual interior-point
//! method; lower bounds come from a truncated power iteration over
//! Schmidt-rank-`k` vectors. The [`states`] module provides Werner states,
//! Bures-random states and the recursive projection family together with their
//! closed-form norms and the `r`-undistillability thresholds.

pub mod cli;
pub mod error;
pub mod norms;
pub mod qops;
pub mod rng;
pub mod schmidt;
pub mod sdp;
pub mod states;

pub use error::{Error, Result};
pub use qops::{BipartiteDims, HermitianOperator, MapRep};
