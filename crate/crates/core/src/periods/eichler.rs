use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{CoeffTable, PeriodsError};
use crate::arith::inverse_mod;
use crate::modforms::GroupElement;
use crate::series::{Exponent, FracSeries};

/// A value of `Ψ` with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EichlerValue {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Number of coefficients summed.
    pub terms: u64,
}

/// Least `N` with `2rᴺ⁺¹/(1 − r) < tol` for `r = e^{−4π Im τ/k}`; since
/// `|a(n)| ≤ d(n)√n ≤ 2n`, that bounds the tail of `Ψ` after `N` terms.
pub fn required_terms(k: u32, im_tau: f64, tol: f64) -> u64 {
    let log_r = -4.0 * PI * im_tau / k as f64;
    let r = libm::exp(log_r);
    // 2r^{N+1}/(1 − r) < tol  ⇔  N + 1 > ln(tol(1 − r)/2)/ln r
    let x = libm::log(tol * (1.0 - r) / 2.0) / log_r;
    let n = libm::floor(x).max(0.0) as u64;
    n.max(1)
}

fn tail_bound(k: u32, im_tau: f64, n: u64) -> f64 {
    let log_r = -4.0 * PI * im_tau / k as f64;
    let r = libm::exp(log_r);
    2.0 * libm::exp(log_r * (n + 1) as f64) / (1.0 - r)
}

/// `Ψ(τ) = Σ_{n≥1} (a(n)/n) e^{4πinτ/k}`, the Eichler integral
/// `πi ∫_{i∞}^τ f(2z/k) dz` for `k = 4`, summed until the tail bound drops
/// below `tol`.
pub fn eichler_integral(t: &CoeffTable, k: u32, tau: Complex64, tol: f64) -> Result<EichlerValue, PeriodsError> {
    if !(tau.im > 0.0) {
        return Err(PeriodsError::InvalidTau(tau.im));
    }
    let n = required_terms(k, tau.im, tol);
    if n > t.n_max() {
        return Err(PeriodsError::InsufficientCoefficients {
            required: n,
            available: t.n_max(),
        });
    }
    let s = 4.0 * PI / k as f64;
    let mut value = Complex64::new(0.0, 0.0);
    for (i, &a) in t.values()[..n as usize].iter().enumerate() {
        if a == 0 {
            continue;
        }
        let m = (i + 1) as f64;
        let mag = libm::exp(-s * m * tau.im) * a as f64 / m;
        let arg = s * m * tau.re;
        value += Complex64::new(libm::cos(arg), libm::sin(arg)) * mag;
    }
    Ok(EichlerValue {
        value,
        tail_bound: tail_bound(k, tau.im, n),
        terms: n,
    })
}

/// `Ψ` as an exact series `Σ (a(n)/n) q^{2n/k}` from every stored
/// coefficient.
pub fn eichler_series(t: &CoeffTable, k: u32) -> FracSeries {
    let h = (k / 2) as i64;
    let terms = t.values().iter().enumerate().map(|(i, &a)| {
        let n = (i + 1) as i64;
        (Exponent::new(n, h), BigRational::new(BigInt::from(a), BigInt::from(n)))
    });
    FracSeries::from_terms(h, Exponent::new(t.n_max() as i64 + 1, h), terms.filter(|(_, c)| !c.is_zero()))
        .expect("terms lie on the grid")
}

/// `ω(γ) = Ψ(γτ*) − Ψ(τ*)` at `τ* = (−d + i)/c`, where `cτ* + d = i` and
/// `γτ* = (a + i)/c` share imaginary part `1/|c|`.
pub fn period_of(g: &GroupElement, t: &CoeffTable, k: u32, tol: f64) -> Result<Complex64, PeriodsError> {
    let [a, _, c, d] = g.entries().map(|x| x.to_f64().unwrap_or(f64::NAN));
    if c == 0.0 {
        return Err(PeriodsError::LowerLeftZero);
    }
    // −γ acts identically; take c > 0.
    let (a, c, d) = if c < 0.0 { (-a, -c, -d) } else { (a, c, d) };
    let tau = Complex64::new(-d / c, 1.0 / c);
    let g_tau = Complex64::new(a / c, 1.0 / c);
    let hi = eichler_integral(t, k, g_tau, tol / 2.0)?;
    let lo = eichler_integral(t, k, tau, tol / 2.0)?;
    Ok(hi.value - lo.value)
}

/// Integer matrices `(a, s·b; C, d)` of determinant 1 with `s = k/2`,
/// `C = c·level/s` for `c ∈ cs` and `|a| ≤ max_a`; these preserve
/// `f(τ/s)` when `f` has the given level.
pub fn level_group_elements(level: u64, k: u32, cs: &[i64], max_a: i64) -> Vec<GroupElement> {
    let s = (k / 2) as i64;
    let mut out = Vec::new();
    for &c in cs {
        let cc = c * level as i64 / s;
        let m = s * cc;
        for a in -max_a..=max_a {
            if a.gcd(&m) != 1 {
                continue;
            }
            let Some(d) = inverse_mod(a, m) else {
                continue;
            };
            let b = (a * d - 1) / m;
            if let Ok(g) = GroupElement::from_integers(a, s * b, cc, d) {
                out.push(g);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periods::{build_coeff_table, RationalCubic};
    use alloc::collections::BTreeMap;

    fn table() -> CoeffTable {
        let c = RationalCubic::new(
            BigRational::new((-64).into(), 3.into()),
            BigRational::new((-1028).into(), 27.into()),
        )
        .unwrap();
        build_coeff_table(&c, 76, 2000, &BTreeMap::from([(19, -1)])).unwrap()
    }

    #[test]
    fn vanishes_at_the_cusp() {
        let v = eichler_integral(&table(), 4, Complex64::new(0.0, 1e6), 1e-12).unwrap();
        assert!(v.value.norm() < 1e-100);
    }

    #[test]
    fn derivative_is_the_newform() {
        let t = table();
        let tau = Complex64::new(0.0, 1.0);
        let h = 1e-5;
        let dh = Complex64::new(h, 0.0);
        let fd = (eichler_integral(&t, 4, tau + dh, 1e-15).unwrap().value
            - eichler_integral(&t, 4, tau - dh, 1e-15).unwrap().value)
            / (2.0 * h);
        // f(τ/2) = Σ a(n) e^{πinτ}
        let f: Complex64 = t
            .values()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let n = (i + 1) as f64;
                Complex64::new(0.0, PI * n * tau.re).exp() * (a as f64 * libm::exp(-PI * n * tau.im))
            })
            .sum();
        assert!((fd - Complex64::new(0.0, PI) * f).norm() < 1e-8);
    }

    #[test]
    fn period_independent_of_tau() {
        let t = table();
        let g = level_group_elements(76, 4, &[1], 5)[0];
        let [_, _, c, d] = g.to_integers().unwrap();
        let base = Complex64::new(-d as f64 / c as f64, 1.0 / c as f64);
        let vals: Vec<Complex64> = [(0.0, 0.0), (0.003, 0.001), (-0.002, 0.004), (0.001, -0.002), (0.004, 0.003)]
            .iter()
            .map(|&(x, y)| {
                let tau = base + Complex64::new(x, y);
                let tol = 1e-13;
                eichler_integral(&t, 4, g.act(tau), tol).unwrap().value
                    - eichler_integral(&t, 4, tau, tol).unwrap().value
            })
            .collect();
        for v in &vals {
            assert!((v - vals[0]).norm() < 1e-8);
        }
    }

    #[test]
    fn group_elements_have_the_right_shape() {
        let gs = level_group_elements(76, 4, &[1, 2], 40);
        assert!(gs.len() > 40);
        for g in gs {
            let [a, b, c, d] = g.to_integers().unwrap();
            assert_eq!(a * d - b * c, 1);
            assert_eq!(b % 2, 0);
            assert_eq!(c % 38, 0);
        }
    }

    #[test]
    fn cocycle_and_antisymmetry() {
        let t = table();
        let gs = level_group_elements(76, 4, &[1], 80);
        let g = gs[1];
        let tol = 1e-12;
        let w = |x: &GroupElement| period_of(x, &t, 4, tol).unwrap();
        assert!((w(&g.inverse()) + w(&g)).norm() < 1e-8);
        // Pick h so that g·h keeps a small lower-left entry.
        let d = g.to_integers().unwrap()[3];
        let h = gs
            .iter()
            .find(|h| {
                let a = h.to_integers().unwrap()[0];
                (38 * (a + d)).abs() == 76
            })
            .copied()
            .unwrap();
        let gh = g * h;
        assert!((w(&gh) - w(&g) - w(&h)).norm() < 1e-8);
        assert_eq!(period_of(&GroupElement::identity(), &t, 4, tol), Err(PeriodsError::LowerLeftZero));
    }

    #[test]
    fn short_table_reports_requirement() {
        let t = table();
        let err = eichler_integral(&t, 4, Complex64::new(0.0, 1e-3), 1e-10).unwrap_err();
        assert!(matches!(err, PeriodsError::InsufficientCoefficients { available: 2000, .. }));
    }

    #[test]
    fn exact_series_matches_table() {
        let s = eichler_series(&table(), 4);
        assert_eq!(s.grid(), 2);
        assert_eq!(s.coeff(Exponent::new(3, 2)), Some(BigRational::new(2.into(), 3.into())));
        assert!(alloc::format!("{s}").starts_with("q^(1/2) + (2/3)*q^(3/2)"));
    }
}
