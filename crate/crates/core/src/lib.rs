//! Spectral analysis toolkit for the fractional thermoelastic plate system.
//!
//! With hinged plate / Dirichlet temperature boundary conditions the abstract
//! generator decomposes into independent 3x3 blocks, one per Laplacian
//! eigenvalue. Everything observable about the semigroup then reduces to
//! closed-form per-mode computations that this crate assembles:
//!
//! - [`modal`]: eigenvalue sequences, generator blocks, the weighted
//!   phase-space norm, dissipativity and stationary solves;
//! - [`resolvent`]: per-mode and global resolvent norms on the imaginary
//!   axis, truncated scans over lambda grids, frequency-domain diagnostics;
//! - [`regularity`]: Gevrey exponent bands, the non-analyticity witness
//!   sequence, decay-exponent fits, the spectral abscissa;
//! - [`simulator`]: exact time evolution by per-mode matrix exponentials
//!   with energy and dissipation traces;
//! - [`cli`]: the `thermoplate` binary (scan, fit, witness, abscissa,
//!   simulate, check);
//! - [`checks`] and [`oracle`]: the verification suite and the independent
//!   reference implementations it compares against.

// index loops mirror the matrix algebra; `!(a < b)` in validations must
// reject NaN, which the suggested `a >= b` would let through
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod cli;
pub mod csvio;
pub mod error;
pub mod linalg;
pub mod modal;
pub mod oracle;
pub mod regularity;
pub mod resolvent;
pub mod simulator;

pub use error::{Error, Result};
