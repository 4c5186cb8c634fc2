use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::PeriodsError;
use crate::arith::{divisors, legendre};

/// `y² = x³ + Ax + B` over `ℚ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalCubic {
    a: BigRational,
    b: BigRational,
}

/// An integral model `Y² = X³ + e₂X² + e₄X + e₆` of a [`RationalCubic`],
/// reached by `x = X/w² + r`, `y = Y/w³`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralModel {
    pub w: u64,
    pub r: BigRational,
    pub e: [BigInt; 3],
}

impl IntegralModel {
    /// Discriminant of the cubic `X³ + e₂X² + e₄X + e₆`.
    pub fn cubic_discriminant(&self) -> BigInt {
        let [e2, e4, e6] = &self.e;
        let c = |n: i64| BigInt::from(n);
        c(18) * e2 * e4 * e6 - c(4) * e2.pow(3) * e6 + e2.pow(2) * e4.pow(2)
            - c(4) * e4.pow(3)
            - c(27) * e6.pow(2)
    }

    /// Good reduction at `p` for this model.
    pub fn is_good(&self, p: u64) -> bool {
        p > 2 && !(self.cubic_discriminant() % BigInt::from(p)).is_zero()
    }

    /// `p + 1 − #E(𝔽_p) = −Σ_X (f(X)/p)` for a good odd prime.
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        let pi = BigInt::from(p);
        let red = |x: &BigInt| -> i64 {
            let r = x % &pi;
            let r = if r.is_negative() { r + &pi } else { r };
            r.to_i64().expect("reduced")
        };
        let [e2, e4, e6] = [red(&self.e[0]), red(&self.e[1]), red(&self.e[2])];
        let m = p as i128;
        let mut sum = 0i64;
        for x in 0..p as i128 {
            let v = (((x + e2 as i128) * x % m + e4 as i128) * x % m + e6 as i128) % m;
            sum += legendre(v as i64, p) as i64;
        }
        -sum
    }
}

impl RationalCubic {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, PeriodsError> {
        let four = BigRational::from_integer(4.into());
        let tw7 = BigRational::from_integer(27.into());
        if (four * &a * &a * &a + tw7 * &b * &b).is_zero() {
            return Err(PeriodsError::Singular);
        }
        Ok(RationalCubic { a, b })
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// `(g₂, g₃) = (−4A, −4B)` of `y² = 4x³ − g₂x − g₃` after `y ↦ 2y`.
    pub fn g2_g3(&self) -> (BigRational, BigRational) {
        let m4 = BigRational::from_integer((-4).into());
        (&m4 * &self.a, &m4 * &self.b)
    }

    /// Least `u` with `u⁴A, u⁶B` integral, and that short model.
    pub fn short_integral_model(&self) -> IntegralModel {
        let l = self.a.denom() * self.b.denom();
        let l = l.to_u64().expect("denominators fit in u64");
        for u in divisors(l) {
            let ub = BigRational::from_integer(u.into());
            let a4 = &self.a * num_traits::pow(ub.clone(), 4);
            let a6 = &self.b * num_traits::pow(ub, 6);
            if a4.is_integer() && a6.is_integer() {
                return IntegralModel {
                    w: u,
                    r: BigRational::zero(),
                    e: [BigInt::zero(), a4.to_integer(), a6.to_integer()],
                };
            }
        }
        unreachable!("u = l clears both denominators")
    }

    /// The short integral model followed by integral models translated by
    /// `r ∈ (1/u²)ℤ ∩ [0, 1)`, for `w | u`. Primes dividing `u` are bad for
    /// the short model but may be good for a translated one.
    pub fn integral_models(&self) -> Vec<IntegralModel> {
        let short = self.short_integral_model();
        let u = short.w;
        let mut out = alloc::vec![short];
        if u == 1 {
            return out;
        }
        let uu = (u * u) as i64;
        for w in divisors(u) {
            let wb = BigRational::from_integer(w.into());
            let w2 = &wb * &wb;
            for s in 0..uu {
                let r = BigRational::new(s.into(), uu.into());
                // (X/w² + r)³ + A(X/w² + r) + B, times w⁶.
                let e2 = BigRational::from_integer(3.into()) * &r * &w2;
                let e4 = (BigRational::from_integer(3.into()) * &r * &r + &self.a) * &w2 * &w2;
                let e6 = (&r * &r * &r + &self.a * &r + &self.b) * &w2 * &w2 * &w2;
                if e2.is_integer() && e4.is_integer() && e6.is_integer() && !(w == u && s == 0) {
                    out.push(IntegralModel {
                        w,
                        r,
                        e: [e2.to_integer(), e4.to_integer(), e6.to_integer()],
                    });
                }
            }
        }
        out
    }
}

/// `a_p` by counting points on the first integral model with good
/// reduction at `p`; the Hasse bound is enforced.
pub fn ap_point_count(c: &RationalCubic, p: u64) -> Result<i64, PeriodsError> {
    ap_with_models(&c.integral_models(), p)
}

pub(crate) fn ap_with_models(models: &[IntegralModel], p: u64) -> Result<i64, PeriodsError> {
    // Any model with good reduction at p reduces to the same curve over 𝔽_p
    // up to isomorphism.
    let model = models
        .iter()
        .find(|m| m.is_good(p))
        .ok_or(PeriodsError::BadPrime(p))?;
    let ap = model.trace_of_frobenius(p);
    if (ap * ap) as u64 > 4 * p {
        return Err(PeriodsError::Hasse { p, ap });
    }
    Ok(ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn level76() -> RationalCubic {
        RationalCubic::new(r(-64, 3), r(-1028, 27)).unwrap()
    }

    #[test]
    fn integral_models_of_level76_curve() {
        let c = level76();
        let s = c.short_integral_model();
        assert_eq!(s.w, 3);
        assert_eq!(s.e, [BigInt::zero(), BigInt::from(-1728), BigInt::from(-27756)]);
        let models = c.integral_models();
        let t = models.iter().find(|m| m.w == 1).unwrap();
        // x = X + 2/3
        assert_eq!(t.e, [BigInt::from(2), BigInt::from(-20), BigInt::from(-52)]);
        assert!(t.is_good(3));
        assert!(!s.is_good(3));
    }

    #[test]
    fn small_traces() {
        let c = level76();
        let want = [(3, 2), (5, -1), (7, -3), (11, 5), (13, -4), (17, -3), (23, 8)];
        for (p, ap) in want {
            assert_eq!(ap_point_count(&c, p).unwrap(), ap, "p = {p}");
        }
        assert_eq!(ap_point_count(&c, 19), Err(PeriodsError::BadPrime(19)));
        assert_eq!(ap_point_count(&c, 2), Err(PeriodsError::BadPrime(2)));
    }

    #[test]
    fn cm_curve_supersingular() {
        let c = RationalCubic::new(r(1, 1), r(0, 1)).unwrap();
        for p in [3, 7, 11, 19, 23] {
            assert_eq!(ap_point_count(&c, p).unwrap(), 0);
        }
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(
            RationalCubic::new(r(-3, 1), r(2, 1)),
            Err(PeriodsError::Singular)
        );
    }
}
