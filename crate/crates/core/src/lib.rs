//! # finchain
//!
//! A small toolkit for **finite-state Markov chains**: exact stochastic-matrix
//! algebra, structural analysis (irreducibility, period, primitivity
//! certificates), stationary-distribution solving, total-variation convergence
//! diagnostics, and seeded Gibbs / Metropolis–Hastings samplers that can be
//! validated against brute-force enumeration.
//!
//! Everything is dense and double-precision by design: the intended state
//! spaces are desk-scale (up to a few thousand states, or product spaces small
//! enough to enumerate), where dense matrices keep oracle comparisons exact and
//! cheap.
//!
//! ## Quick tour
//!
//! ```rust
//! use finchain::{Distribution, TransitionKernel};
//! use finchain::structure;
//! use finchain::stationary::solve_stationary;
//!
//! let k = TransitionKernel::from_rows(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
//! assert!(structure::check_aperiodic(&k));
//!
//! let result = solve_stationary(&k).unwrap();
//! assert!((result.pi.mass()[0] - 2.0 / 3.0).abs() < 1e-12);
//! assert!(result.pi.is_invariant_under(&k, 1e-12).unwrap());
//! # let _ = Distribution::uniform(2);
//! ```
//!
//! ## Conventions
//!
//! - Kernels are **row-stochastic**: row `z` is the conditional distribution of
//!   the next state given current state `z`. Distributions act on the left,
//!   `push_forward(pi, k) = pi^t k`.
//! - States are indexed `0..k` throughout the library API. The CLI and the
//!   serialized trace format use 1-based state numbers; conversion happens at
//!   that boundary only.
//! - All validation happens at construction time; operations may assume their
//!   inputs are valid. Values are immutable once built, so everything is safe
//!   to share across threads.

// Indexed loops over square matrices, and negated comparisons as
// NaN-rejecting validation guards, are both deliberate here.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod convergence;
pub mod dist;
pub mod error;
pub mod generate;
pub mod io;
pub mod kernel;
pub mod sampler;
pub mod space;
pub mod stationary;
pub mod structure;
pub mod targets;
mod util;

pub use codec::ProductSpaceCodec;
pub use dist::{Distribution, UnnormalizedWeights};
pub use error::{Error, Result};
pub use kernel::TransitionKernel;
pub use sampler::{ChainTrace, ProposalKernel, RandomStream};
pub use space::StateSpace;

/// Absolute tolerance for "sums to one" checks on probability vectors and
/// kernel rows. Exact arithmetic would give 1; this absorbs accumulated
/// double-precision rounding at desk scale.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Maximum residual `max_s |(pi^t k)_s - pi_s|` accepted from the stationary
/// solver before it reports a singular system.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;
