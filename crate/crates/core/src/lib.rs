//! Numerical spectral theory of canonical differential systems.
//!
//! The crate computes fundamental solutions and monodromy matrices of
//! piecewise-constant canonical systems `𝒥u' + Fu = zℋu`, the Weyl functions
//! and γ-fields of three boundary triples, resolvent matrices and their
//! linear-fractional transforms, L-resolvents for Nevanlinna parameters, and
//! spectral functions recovered by Stieltjes inversion, together with the
//! generalized Fourier transform and its Parseval check.

// Negated comparisons such as `!(tol > 0.0)` are used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cansys;
pub mod cli;
pub mod error;
pub mod herglotz;
pub mod jmoebius;
pub mod linalg;
pub mod linrel;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
