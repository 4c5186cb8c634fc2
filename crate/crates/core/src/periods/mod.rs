//! Periods of the newform and the curve they cut out: coefficients from
//! point counting, the Eichler integral `Ψ`, the period lattice `Λ`, its
//! invariants `g₂, g₃`, the Weierstrass `℘` function, and the
//! Manin–Drinfeld gcd.

mod coeffs;
mod curve;
mod eichler;
mod lattice;
mod weierstrass;

pub use coeffs::{build_coeff_table, local_coefficient, manin_drinfeld_gcd, CoeffSource, CoeffTable};
pub use curve::{ap_point_count, IntegralModel, RationalCubic};
pub use eichler::{
    eichler_integral, eichler_series, level_group_elements, period_of, required_terms, EichlerValue,
};
pub use lattice::{direct_lattice_sums, lattice_from_periods, lattice_invariants, PeriodLattice};
pub use weierstrass::{curve_q_series, weierstrass_p, weierstrass_p_with, wp_laurent_coefficients};

use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PeriodsError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("curve is singular (4A³ + 27B² = 0)")]
    Singular,
    #[error("p = {0} is bad for every integral model tried")]
    BadPrime(u64),
    #[error("a_{p} = {ap} violates the Hasse bound")]
    Hasse { p: u64, ap: i64 },
    #[error("no value supplied for a_{0} at a prime dividing the level once")]
    MissingBadPrime(u64),
    #[error("need coefficients up to n = {required}; table stops at {available}")]
    InsufficientCoefficients { required: u64, available: u64 },
    #[error("τ must lie in the upper half-plane (Im τ = {0})")]
    InvalidTau(f64),
    #[error("period needs a matrix with nonzero lower-left entry")]
    LowerLeftZero,
    #[error("periods are all collinear or zero; sample more group elements")]
    Degenerate,
    #[error("periods are {quality:e} away from the lattice, above tolerance {tol:e}")]
    NotALattice { quality: f64, tol: f64 },
    #[error("periods accumulate (basis vector of length {0:e}); they span no discrete lattice")]
    NotDiscrete(f64),
    #[error("z lies on the lattice")]
    OnLattice,
    #[error("invalid coefficient table: {0}")]
    Table(alloc::string::String),
}
