//! Numerical core for twisted second moments of the Riemann zeta function.
//!
//! Everything in this crate is allocation-only (`no_std` + `alloc`): exact
//! integer arithmetic and multiplicative coefficients ([`arith`]), complex
//! ζ and log Γ ([`special`]), the smooth weights and Mellin kernels used by
//! the approximate functional equation ([`weights`]), Dirichlet polynomials
//! ([`dirichlet`]), the moment integrals themselves ([`moments`]) and
//! trilinear sums of Kloosterman fractions ([`kloosterman`]).
//!
//! Parallel evaluation is delegated through the [`exec::Executor`] trait so
//! a host crate can plug in a thread pool; every reduction is an ordered
//! pairwise sum, so results do not depend on the executor.
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod exec;
pub mod kloosterman;
pub mod moments;
pub mod quad;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
