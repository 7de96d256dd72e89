//! Entanglement of superpositions of two bipartite pure states.
//!
//! Given `|Γ⟩ = α|Ψ⟩ + β|Φ⟩`, this crate computes the exact entropy of
//! entanglement of `|Γ⟩` and the family of bounds that relate it to the
//! entanglement of `|Ψ⟩` and `|Φ⟩`:
//!
//! * the closed form for one-sided orthogonal pairs,
//! * the LPS upper bound and its refinement using the reduced entropies,
//! * the `f(t)` upper-bound family obtained from alternative convex
//!   decompositions of a rank-two mixture, optimized over `t`,
//! * the `L1(t)`/`L2(t)` lower-bound family, optimized over `t`,
//! * a grid-minimized lower bound on the entanglement of a two-dimensional
//!   subspace.
//!
//! All entropies use base-2 logarithms, so results are in ebits.
//!
//! Module layout:
//!
//! * [`qmath`]: dense complex matrices, Jacobi eigen/singular value solvers,
//!   entropies.
//! * [`states`]: sparse bipartite pure states, reduced density matrices,
//!   Schmidt decompositions, orthogonality classification.
//! * [`optimize`]: grid + golden-section scalar optimization and bisection.
//! * [`bounds`]: every bound and the aggregated [`bounds::BoundReport`].
//! * [`harness`]: state files, random ensembles, reproduction of the worked
//!   examples, dimension sweeps, Monte Carlo audit and the CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod optimize;
pub mod qmath;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
