//! Modular forms as exact q-series: eta quotients, level-one Eisenstein
//! series and their dilations, the weight-`k` forms `Δ_{N,k}`, the
//! Ramanujan–Serre operator `∂_{N,k}`, plus numerical evaluation and slash
//! checks against congruence-subgroup elements.

mod delta;
mod eisenstein;
mod eta;
mod group;
mod numeric;

use alloc::vec::Vec;

pub use delta::{make_delta, ramanujan_serre, DeltaNk, Weight};
pub use eisenstein::eisenstein_e;
pub use eta::{eta_quotient, euler_function, EtaQuotientSpec};
pub use group::{fricke_matrix, group_membership, GroupElement, Subgroup};
pub use numeric::{
    eval_series, fricke_eigenvalue, slash_check, NumericSeries, SeriesValue, SlashReport,
    DEFAULT_SAMPLES,
};

use crate::series::{Exponent, SeriesError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModformError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("k must be one of 4, 6, 8, 12; got {0}")]
    InvalidK(u32),
    #[error("Eisenstein weight must be 4 or 6; got {0}")]
    InvalidEisensteinWeight(u32),
    #[error("newform expansion must start with 1·q^1")]
    NotNormalized,
    #[error("Δ has nonzero coefficients at non-integer exponents: {0:?}")]
    NonIntegralDelta(Vec<Exponent>),
    #[error("requested precision {requested} but only {available} is available")]
    InsufficientPrecision {
        requested: Exponent,
        available: Exponent,
    },
    #[error("τ must lie in the upper half-plane (Im τ = {0})")]
    InvalidTau(f64),
    #[error("series tail estimate {tail:e} exceeds tolerance {tol:e}; extend the truncation order")]
    TailTooLarge { tail: f64, tol: f64 },
    #[error("matrix determinant must be 1")]
    Determinant,
    #[error("matrix entries must be integers for congruence tests")]
    NonIntegralMatrix,
    #[error("invalid eta-quotient spec {0:?}")]
    EtaSpec(alloc::string::String),
}
