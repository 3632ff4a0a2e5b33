//! Numerical core for continuous-time dynamical sampling.
//!
//! Given a diagonal (or Riesz-diagonalizable) operator `A` with
//! `A e_j = -λ_j e_j`, `λ_j` in the right half plane, and sampling vectors
//! `g^1..g^m`, this crate computes at finite truncation `N`:
//!
//! * the closed-form quadratic forms of `Σ_i ∫ |<e^{tA} g^i, c>|^2 dt` and of
//!   the discrete orbit `Σ_i Σ_n |<h(A)^n a^i, c>|^2`, and checks that the
//!   Cayley map `h(z) = (1 - z)/(1 + z)` carries one exactly onto the other
//!   ([`frame`]);
//! * frame bounds, quadrature and power-sum oracles ([`frame`]);
//! * time grids, discretization certificates and finite-horizon reduction
//!   ([`discretization`]);
//! * the structural frame conditions: `d/α` factorization, Carleson-measure
//!   test, pseudo-hyperbolic separation and cluster-matrix bounds
//!   ([`conditions`]).
//!
//! Sign convention: a [`Spectrum`](operators::Spectrum) stores `λ_j` with
//! positive real part and the semigroup acts as `e^{-t λ_j}` on coordinate
//! `j`.
//!
//! The crate is `no_std` and only needs `alloc`. Float math goes through
//! `num_traits::Float` (libm); when `std` is linked elsewhere in the build its
//! inherent methods take over, hence the `allow(unused_imports)` on those
//! imports.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![no_std]

extern crate alloc;
#[cfg(test)]
#[macro_use]
extern crate std;

mod compensated;
pub mod conditions;
pub mod discretization;
pub mod error;
pub mod frame;
pub mod hardy;
pub mod linalg;
pub mod operators;
pub mod quadrature;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use frame::{FrameBounds, QuadForm, VectorSet};
pub use hardy::{DiscPoint, HalfPlanePoint};
pub use linalg::CMatrix;
pub use operators::Spectrum;
