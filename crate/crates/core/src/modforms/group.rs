use core::fmt;
use core::ops::Mul;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{ModformError, Weight};
use crate::series::Exponent;

/// A 2×2 matrix with rational entries and determinant exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupElement {
    a: Exponent,
    b: Exponent,
    c: Exponent,
    d: Exponent,
}

impl GroupElement {
    pub fn new(a: Exponent, b: Exponent, c: Exponent, d: Exponent) -> Result<Self, ModformError> {
        if a * d - b * c != Exponent::one() {
            return Err(ModformError::Determinant);
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self, ModformError> {
        let r = Exponent::from_integer;
        GroupElement::new(r(a), r(b), r(c), r(d))
    }

    pub fn identity() -> Self {
        GroupElement::from_integers(1, 0, 0, 1).expect("det 1")
    }

    /// `T = (1 1; 0 1)`.
    pub fn translation() -> Self {
        GroupElement::from_integers(1, 1, 0, 1).expect("det 1")
    }

    /// `A = (1 0; N 1)`.
    pub fn lower(n: i64) -> Self {
        GroupElement::from_integers(1, 0, n, 1).expect("det 1")
    }

    pub fn entries(&self) -> [Exponent; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn to_integers(&self) -> Option<[i64; 4]> {
        let e = self.entries();
        if e.iter().all(|x| x.is_integer()) {
            Some(e.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub(crate) fn to_f64(self) -> [f64; 4] {
        self.entries().map(|x| x.to_f64().unwrap_or(f64::NAN))
    }

    /// Möbius action `(aτ + b)/(cτ + d)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        let [a, b, c, d] = self.to_f64();
        (tau * a + b) / (tau * c + d)
    }

    /// `cτ + d`.
    pub fn automorphy(&self, tau: Complex64) -> Complex64 {
        let [_, _, c, d] = self.to_f64();
        tau * c + d
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;
    fn mul(self, o: GroupElement) -> GroupElement {
        GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// `B = (0 −k/2; (k/2)N 0)`; determinant `(k²/4)N`, so it is not a
/// [`GroupElement`].
pub fn fricke_matrix(k: Weight, n: u64) -> [i64; 4] {
    let h = k.half() as i64;
    [0, -h, h * n as i64, 0]
}

/// Congruence subgroups of `SL₂(ℤ)` used here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subgroup {
    /// `c ≡ 0 (mod M)`.
    Gamma0(u64),
    /// `b ≡ 0 (mod m)`.
    GammaUpper0(u64),
    /// `Γ_k = Γ₀((k/2)N) ∩ Γ⁰(k/2)`.
    GammaK { n: u64, k: Weight },
}

pub fn group_membership(g: &GroupElement, spec: Subgroup) -> Result<bool, ModformError> {
    let [_, b, c, _] = g.to_integers().ok_or(ModformError::NonIntegralMatrix)?;
    let divides = |m: u64, x: i64| m != 0 && (x % m as i64).is_zero();
    Ok(match spec {
        Subgroup::Gamma0(m) => divides(m, c),
        Subgroup::GammaUpper0(m) => divides(m, b),
        Subgroup::GammaK { n, k } => {
            let h = k.half() as u64;
            divides(h * n, c) && divides(h, b)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_enforced() {
        assert_eq!(GroupElement::from_integers(1, 1, 1, 1).unwrap_err(), ModformError::Determinant);
        let half = Exponent::new(1, 2);
        let g = GroupElement::new(half, Exponent::zero(), Exponent::zero(), Exponent::from_integer(2)).unwrap();
        assert_eq!(group_membership(&g, Subgroup::Gamma0(2)), Err(ModformError::NonIntegralMatrix));
    }

    #[test]
    fn membership_examples() {
        let g = GroupElement::lower(76);
        assert!(group_membership(&g, Subgroup::Gamma0(76)).unwrap());
        let t = GroupElement::translation();
        assert!(!group_membership(&t, Subgroup::GammaUpper0(2)).unwrap());
        let gk = Subgroup::GammaK { n: 19, k: Weight::K4 };
        let g = GroupElement::from_integers(1, 2, 38, 77).unwrap();
        assert!(group_membership(&g, gk).unwrap());
        assert!(!group_membership(&GroupElement::lower(19), gk).unwrap());
    }

    #[test]
    fn inverse_and_product() {
        let g = GroupElement::from_integers(3, 2, 4, 3).unwrap();
        assert_eq!(g * g.inverse(), GroupElement::identity());
        let tau = Complex64::new(0.2, 0.7);
        let lhs = (g * GroupElement::translation()).act(tau);
        let rhs = g.act(GroupElement::translation().act(tau));
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn fricke_entries() {
        assert_eq!(fricke_matrix(Weight::K4, 19), [0, -2, 38, 0]);
    }
}
