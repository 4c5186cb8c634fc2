//! Exact and numerical kernels for modular parametrizations of rational
//! elliptic curves.
//!
//! The crate is `no_std` (with `alloc`). It provides
//!
//! - [`series`]: truncated Laurent series in `q^{1/w}` with exact rational
//!   coefficients,
//! - [`modforms`]: eta quotients, Eisenstein series, the forms `Δ_{N,k}`,
//!   the Ramanujan–Serre operator, numerical evaluation and slash checks,
//! - [`ode`]: verification, recursive solution and curve fitting for the
//!   Weierstrass-type equations `∂(Q)² = cubic(Q, Δ)`,
//! - [`periods`]: newform coefficients by point counting, Eichler integrals,
//!   period lattices, lattice invariants and the Weierstrass `℘` function,
//! - [`bounds`]: degree and genus bounds behind the finiteness argument.
//!
//! File formats, parallel drivers and the command-line tool live in the
//! companion `modparam` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arith;
pub mod bounds;
pub mod catalog;
pub mod modforms;
pub mod ode;
pub mod periods;
pub mod series;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::{BigRational, Ratio};

pub use series::{Exponent, FracSeries, SeriesError};
