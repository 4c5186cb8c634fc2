use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::{eichler_series, lattice_invariants, CoeffTable, PeriodLattice, PeriodsError};
use crate::series::{Exponent, FracSeries};

/// `c_2, …, c_n` of `℘(z) = z⁻² + Σ_{j≥2} c_j z^{2j−2}`, stored at their
/// own index: `c₂ = g₂/20`, `c₃ = g₃/28` and
/// `c_j = 3/((2j+1)(j−3)) Σ_{m=2}^{j−2} c_m c_{j−m}`.
pub fn wp_laurent_coefficients<T>(g2: &T, g3: &T, n: usize, int: impl Fn(i64) -> T) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T> + Div<Output = T>,
{
    let mut c = vec![T::zero(); n.max(3) + 1];
    c[2] = g2.clone() / int(20);
    c[3] = g3.clone() / int(28);
    for j in 4..=n {
        let mut s = T::zero();
        for m in 2..=j - 2 {
            s = s + c[m].clone() * c[j - m].clone();
        }
        c[j] = s * int(3) / int(((2 * j + 1) * (j - 3)) as i64);
    }
    c.truncate(n + 1);
    c
}

const LAURENT_TERMS: usize = 64;

fn laurent(w: Complex64, c: &[Complex64]) -> (Complex64, Complex64) {
    let w2 = w * w;
    let mut p = w2.inv();
    let mut dp = -w2.inv() * w.inv() * 2.0;
    // w^{2j−2} and w^{2j−3}
    let mut pw = w2;
    for (j, cj) in c.iter().enumerate().skip(2) {
        p += cj * pw;
        dp += cj * pw / w * (2 * j - 2) as f64;
        pw *= w2;
    }
    (p, dp)
}

/// `(℘(z), ℘′(z))` for the lattice `l`, with `(g₂, g₃)` supplied.
///
/// `z` is moved to its shortest translate. The Laurent series is used on
/// `|z| ≤ 0.7|ω₁|`, where its terms shrink at least like `0.49^j`;
/// larger `z` are halved into that disc and brought back by duplication.
pub fn weierstrass_p_with(
    z: Complex64,
    l: &PeriodLattice,
    g2: Complex64,
    g3: Complex64,
) -> Result<(Complex64, Complex64), PeriodsError> {
    let z = l.reduce_point(z);
    let r = l.omega1.norm();
    if z.norm() <= 1e-13 * r {
        return Err(PeriodsError::OnLattice);
    }
    let mut halvings = 0;
    let mut w = z;
    while w.norm() > 0.7 * r {
        w /= 2.0;
        halvings += 1;
    }
    let c = wp_laurent_coefficients(&g2, &g3, LAURENT_TERMS, |n| Complex64::new(n as f64, 0.0));
    let (mut p, mut dp) = laurent(w, &c);
    for _ in 0..halvings {
        // Tangent at (℘, ℘′) on y² = 4x³ − g₂x − g₃.
        let m = (p * p * 12.0 - g2) / (dp * 2.0);
        let x3 = m * m / 4.0 - p * 2.0;
        let y3 = -(m * (x3 - p) + dp);
        p = x3;
        dp = y3;
    }
    Ok((p, dp))
}

/// `(℘(z, Λ), ℘′(z, Λ))` with invariants from [`lattice_invariants`].
pub fn weierstrass_p(z: Complex64, l: &PeriodLattice) -> Result<(Complex64, Complex64), PeriodsError> {
    let (g2, g3) = lattice_invariants(l);
    weierstrass_p_with(z, l, g2, g3)
}

/// `Q = F²·℘(Ψ)` as an exact series through `q^through`, with `F = f(2τ/k)`,
/// `Ψ` from [`eichler_series`] and `℘` taken for the rational invariants
/// `g₂, g₃`. For `k = 4`, `F² = Δ`.
pub fn curve_q_series(
    t: &CoeffTable,
    k: u32,
    g2: &BigRational,
    g3: &BigRational,
    through: i64,
) -> Result<FracSeries, PeriodsError> {
    let need = Exponent::from_integer(through + 1);
    let h = (k / 2) as i64;
    // Ψ and F below q^{through+2} suffice: Ψ⁻² costs 6/k of precision.
    let cut = Exponent::from_integer(through + 2);
    let psi = eichler_series(t, k).truncate(cut);
    let f = t
        .to_series()
        .rescale(Exponent::new(1, h))
        .truncate(cut);
    let f2 = f.pow(2);
    let psi2 = psi.pow(2);
    let mut acc = f2.mul(&psi2.invert()?);
    // The c_j term starts at q^{4j/k}.
    let jmax = ((through + 1) * k as i64 / 4) as usize + 1;
    let c = wp_laurent_coefficients(g2, g3, jmax, |n| BigRational::from_integer(BigInt::from(n)));
    let mut pw = psi2.clone();
    for cj in c.iter().skip(2) {
        acc = acc.add(&f2.mul(&pw).scale(cj));
        pw = pw.mul(&psi2);
    }
    if acc.trunc_order() < need {
        return Err(PeriodsError::InsufficientCoefficients {
            required: ((through + 3) * h) as u64,
            available: t.n_max(),
        });
    }
    let acc = acc.truncate(need);
    Ok(acc.coerce_integer_grid().unwrap_or(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn lattice() -> PeriodLattice {
        PeriodLattice::new(Complex64::new(1.1104197465122, 0.0), Complex64::new(0.5552098732561, 2.1752061725591))
            .unwrap()
    }

    #[test]
    fn laurent_coefficients_exact() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let c = wp_laurent_coefficients(&q(256, 3), &q(4112, 27), 5, |n| q(n, 1));
        assert_eq!(c[2], q(64, 15));
        assert_eq!(c[3], q(1028, 189));
        // c₄ = c₂²/3
        assert_eq!(c[4], &c[2] * &c[2] / q(3, 1));
    }

    #[test]
    fn differential_equation_holds() {
        let l = lattice();
        let (g2, g3) = lattice_invariants(&l);
        for i in 0..12 {
            let z = Complex64::new(0.13 + 0.21 * i as f64, 0.4 - 0.17 * i as f64);
            let (p, dp) = weierstrass_p_with(z, &l, g2, g3).unwrap();
            let lhs = dp * dp;
            let rhs = p * p * p * 4.0 - g2 * p - g3;
            assert!((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()), "z = {z}");
        }
    }

    #[test]
    fn two_torsion() {
        let l = lattice();
        let (g2, g3) = lattice_invariants(&l);
        for half in [l.omega1 / 2.0, l.omega2 / 2.0, (l.omega1 + l.omega2) / 2.0] {
            let (p, dp) = weierstrass_p_with(half, &l, g2, g3).unwrap();
            assert!((p * p * p * 4.0 - g2 * p - g3).norm() < 1e-8);
            assert!(dp.norm() < 1e-6);
        }
    }

    #[test]
    fn periodic_and_pole() {
        let l = lattice();
        let z = Complex64::new(0.2, 0.1);
        let (a, _) = weierstrass_p(z, &l).unwrap();
        let (b, _) = weierstrass_p(z + l.omega1 * 3.0 - l.omega2, &l).unwrap();
        assert!((a - b).norm() < 1e-9 * a.norm());
        assert_eq!(weierstrass_p(l.omega2, &l), Err(PeriodsError::OnLattice));
        // ℘(z) ≈ z⁻² near 0.
        let w = Complex64::new(1e-4, 0.0);
        assert!((weierstrass_p(w, &l).unwrap().0 * w * w - 1.0).norm() < 1e-6);
        let _ = PI;
    }
}
