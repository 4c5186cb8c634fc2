use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::ModformError;
use crate::series::{Exponent, FracSeries, SeriesError};

/// The weight `k ∈ {4, 6, 8, 12}` of `Δ_{N,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Weight {
    K4,
    K6,
    K8,
    K12,
}

impl Weight {
    pub fn new(k: u32) -> Result<Self, ModformError> {
        match k {
            4 => Ok(Weight::K4),
            6 => Ok(Weight::K6),
            8 => Ok(Weight::K8),
            12 => Ok(Weight::K12),
            _ => Err(ModformError::InvalidK(k)),
        }
    }

    pub fn k(self) -> u32 {
        match self {
            Weight::K4 => 4,
            Weight::K6 => 6,
            Weight::K8 => 8,
            Weight::K12 => 12,
        }
    }

    /// `k/2`: the newform coefficients are supported on `n ≡ 1 (mod k/2)`.
    pub fn half(self) -> u32 {
        self.k() / 2
    }

    /// Level of the newform `f` for a given `N`: `(k²/4)·N`.
    pub fn newform_level(self, n: u64) -> u64 {
        let h = self.half() as u64;
        h * h * n
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k())
    }
}

/// `Δ_{N,k}(τ) = f(2τ/k)^{k/2}` together with `F = f(2τ/k)` and the
/// logarithmic derivative `θΔ/Δ`.
#[derive(Debug, Clone)]
pub struct DeltaNk {
    n: u64,
    k: Weight,
    f_rescaled: FracSeries,
    delta: FracSeries,
    log_derivative: FracSeries,
    /// Fricke eigenvalue `λ_{k,N}` once measured.
    pub fricke: Option<i8>,
}

impl DeltaNk {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> Weight {
        self.k
    }

    /// `F = f(2τ/k)`, on the grid `(k/2)`-fold finer than `f`.
    pub fn f_rescaled(&self) -> &FracSeries {
        &self.f_rescaled
    }

    pub fn delta(&self) -> &FracSeries {
        &self.delta
    }

    /// `θΔ/Δ = 1 + O(q)`.
    pub fn log_derivative(&self) -> &FracSeries {
        &self.log_derivative
    }

    /// `Δ^{1/2} = F^{k/4}` for `k ∈ {4, 8, 12}`; weight `k/2`.
    pub fn sqrt_delta(&self) -> Option<FracSeries> {
        match self.k {
            Weight::K4 => Some(self.f_rescaled.clone()),
            Weight::K8 => Some(self.f_rescaled.pow(2)),
            Weight::K12 => Some(self.f_rescaled.pow(3)),
            Weight::K6 => None,
        }
    }

    /// `F^j`, used for the right-hand sides of the Weierstrass equations.
    pub fn f_power(&self, j: u32) -> FracSeries {
        if j == 0 {
            FracSeries::one(self.f_rescaled.trunc_order())
        } else {
            self.f_rescaled.pow(j)
        }
    }
}

/// Builds `Δ_{N,k}` from the integer-grid expansion of the newform `f` of
/// level `(k²/4)N`, truncated to `trunc`.
///
/// `f` must start with `1·q`. `Δ` must land on the integer grid; otherwise
/// the coefficients of `f` are not supported on `n ≡ 1 (mod k/2)`.
pub fn make_delta(f: &FracSeries, n: u64, k: u32, trunc: Exponent) -> Result<DeltaNk, ModformError> {
    let k = Weight::new(k)?;
    let f = f.coerce_integer_grid()?;
    match f.leading_term() {
        Some((e, c)) if e == Exponent::one() && c.is_one() => {}
        _ => return Err(ModformError::NotNormalized),
    }
    let mut f_rescaled = f.rescale(Exponent::new(2, k.k() as i64));
    // F = q^{2/k}(1 + …), so F^{k/2} stays known below trunc
    if f_rescaled.trunc_order() > trunc {
        f_rescaled = f_rescaled.truncate(trunc);
    }
    let delta = match f_rescaled.pow(k.half()).coerce_integer_grid() {
        Ok(d) => d,
        Err(SeriesError::NonIntegerExponents(es)) => return Err(ModformError::NonIntegralDelta(es)),
        Err(e) => return Err(e.into()),
    };
    if delta.trunc_order() < trunc {
        return Err(ModformError::InsufficientPrecision {
            requested: trunc,
            available: delta.trunc_order(),
        });
    }
    let delta = delta.truncate(trunc);
    let log_derivative = delta.theta().mul(&delta.invert()?);
    Ok(DeltaNk {
        n,
        k,
        f_rescaled,
        delta,
        log_derivative,
        fricke: None,
    })
}

/// `∂_{N,k}(f) = (k/8πi) f′ − (1/2πi) f Δ′/Δ = (k/4)·θf − f·θΔ/Δ` for a
/// weight-4 form `f`.
pub fn ramanujan_serre(f: &FracSeries, d: &DeltaNk) -> FracSeries {
    let factor = BigRational::new(BigInt::from(d.k.k()), BigInt::from(4));
    f.theta().scale(&factor).sub(&f.mul(&d.log_derivative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::{eta_quotient, EtaQuotientSpec};

    fn f20(trunc: i64) -> FracSeries {
        let spec: EtaQuotientSpec = "2^2 10^2".parse().unwrap();
        eta_quotient(&spec, Exponent::from_integer(trunc))
            .coerce_integer_grid()
            .unwrap()
    }

    #[test]
    fn delta_5_4_integral_and_normalized() {
        let d = make_delta(&f20(61), 5, 4, Exponent::from_integer(30)).unwrap();
        assert_eq!(d.delta().grid(), 1);
        assert_eq!(d.delta().order(), Some(Exponent::one()));
        assert_eq!(d.delta().trunc_order(), Exponent::from_integer(30));
        assert_eq!(d.f_rescaled().grid(), 2);
        let ld = d.log_derivative();
        assert_eq!(ld.coeff_at(0), Some(BigRational::one()));
    }

    #[test]
    fn precision_shortfall_reported() {
        let err = make_delta(&f20(21), 5, 4, Exponent::from_integer(30)).unwrap_err();
        assert_eq!(
            err,
            ModformError::InsufficientPrecision {
                requested: Exponent::from_integer(30),
                available: Exponent::from_integer(11),
            }
        );
    }

    #[test]
    fn unsupported_k_and_unnormalized_input() {
        assert_eq!(
            make_delta(&f20(10), 5, 5, Exponent::from_integer(3)).unwrap_err(),
            ModformError::InvalidK(5)
        );
        let g = f20(10).scale(&BigRational::from_integer(2.into()));
        assert_eq!(
            make_delta(&g, 5, 4, Exponent::from_integer(3)).unwrap_err(),
            ModformError::NotNormalized
        );
    }

    #[test]
    fn even_support_breaks_integrality() {
        // q + q^2 is not supported on odd exponents, so F^2 has half-integer terms.
        let g = FracSeries::from_integer_coeffs(1, [1, 1], 10);
        assert!(matches!(
            make_delta(&g, 1, 4, Exponent::from_integer(3)),
            Err(ModformError::NonIntegralDelta(_))
        ));
    }

    #[test]
    fn operator_kills_delta_for_k4() {
        let d = make_delta(&f20(61), 5, 4, Exponent::from_integer(30)).unwrap();
        let r = ramanujan_serre(d.delta(), &d);
        assert!(r.is_zero());
    }

    #[test]
    fn operator_on_constant() {
        let d = make_delta(&f20(41), 5, 4, Exponent::from_integer(20)).unwrap();
        let r = ramanujan_serre(&FracSeries::one(Exponent::from_integer(20)), &d);
        assert_eq!(r.coeff_at(0), Some(-BigRational::one()));
    }
}
