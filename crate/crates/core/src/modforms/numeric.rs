use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{fricke_matrix, DeltaNk, GroupElement, ModformError};
use crate::series::FracSeries;

/// Generic sample points in the upper half-plane for slash checks.
pub const DEFAULT_SAMPLES: [Complex64; 5] = [
    Complex64::new(0.1, 0.9),
    Complex64::new(-0.3, 1.1),
    Complex64::new(0.5, 0.7),
    Complex64::new(0.05, 1.3),
    Complex64::new(-0.45, 0.85),
];

/// Value of a truncated series at a point, with the tail estimate that
/// justified it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail: f64,
}

/// Floating-point snapshot of a [`FracSeries`] for repeated evaluation.
#[derive(Debug, Clone)]
pub struct NumericSeries {
    terms: Vec<(f64, f64)>,
    trunc: f64,
    grid: f64,
    tail_coeff: f64,
}

impl NumericSeries {
    pub fn new(a: &FracSeries) -> Self {
        let terms: Vec<(f64, f64)> = a
            .terms()
            .map(|(e, c)| {
                (
                    e.to_f64().unwrap_or(f64::NAN),
                    c.to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect();
        let trunc = a.trunc_order().to_f64().unwrap_or(f64::NAN);
        // Heuristic size of the first omitted coefficient: twice the largest
        // coefficient in the top quarter of the known exponent range.
        let tail_coeff = match (terms.first(), terms.last()) {
            (Some(&(lo, _)), Some(_)) => {
                let cut = lo + 0.75 * (trunc - lo);
                let top = terms
                    .iter()
                    .filter(|(e, _)| *e >= cut)
                    .map(|(_, c)| c.abs())
                    .fold(0.0, f64::max);
                let all = terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max);
                2.0 * if terms.len() < 8 { all } else { top.max(all * 1e-3) }
            }
            _ => 0.0,
        };
        NumericSeries {
            terms,
            trunc,
            grid: a.grid() as f64,
            tail_coeff,
        }
    }

    /// Tail estimate `C·e^{−2π t Im τ}/(1 − e^{−2π Im τ/w})`.
    pub fn tail_estimate(&self, im: f64) -> f64 {
        let r = libm::exp(-2.0 * PI * im / self.grid);
        self.tail_coeff * libm::exp(-2.0 * PI * self.trunc * im) / (1.0 - r)
    }

    pub fn eval(&self, tau: Complex64, tail_tol: f64) -> Result<SeriesValue, ModformError> {
        if !(tau.im > 0.0) {
            return Err(ModformError::InvalidTau(tau.im));
        }
        let tail = self.tail_estimate(tau.im);
        if tail > tail_tol {
            return Err(ModformError::TailTooLarge { tail, tol: tail_tol });
        }
        let mut value = Complex64::new(0.0, 0.0);
        for &(e, c) in &self.terms {
            let mag = libm::exp(-2.0 * PI * e * tau.im);
            let arg = 2.0 * PI * e * tau.re;
            value += Complex64::new(libm::cos(arg), libm::sin(arg)) * (c * mag);
        }
        Ok(SeriesValue { value, tail })
    }
}

/// `Σ c_e e^{2πi e τ}` with a heuristic tail check.
pub fn eval_series(a: &FracSeries, tau: Complex64, tail_tol: f64) -> Result<SeriesValue, ModformError> {
    NumericSeries::new(a).eval(tau, tail_tol)
}

/// Outcome of comparing `a|_w g` with `a` at sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlashReport {
    /// Least-squares `λ` with `a|_w g ≈ λ·a`.
    pub eigenvalue: Complex64,
    /// `max |a(gτ)(cτ+d)^{−w} − λ·a(τ)|` over the samples.
    pub max_deviation: f64,
    /// `max |a(τ)|` over the samples, for scale.
    pub max_value: f64,
}

fn slash_report(
    a: &FracSeries,
    weight: i32,
    m: [f64; 4],
    samples: &[Complex64],
    tol: f64,
) -> Result<SlashReport, ModformError> {
    let ns = NumericSeries::new(a);
    let [ma, mb, mc, md] = m;
    let mut pairs = Vec::with_capacity(samples.len());
    for &tau in samples {
        let j = tau * mc + md;
        let g_tau = (tau * ma + mb) / j;
        let lhs = ns.eval(g_tau, tol)?.value * j.powi(-weight);
        let rhs = ns.eval(tau, tol)?.value;
        pairs.push((lhs, rhs));
    }
    let num: Complex64 = pairs.iter().map(|(l, r)| r.conj() * l).sum();
    let den: f64 = pairs.iter().map(|(_, r)| r.norm_sqr()).sum();
    let eigenvalue = if den > 0.0 { num / den } else { Complex64::new(1.0, 0.0) };
    let max_deviation = pairs
        .iter()
        .map(|(l, r)| (l - eigenvalue * r).norm())
        .fold(0.0, f64::max);
    let max_value = pairs.iter().map(|(_, r)| r.norm()).fold(0.0, f64::max);
    Ok(SlashReport {
        eigenvalue,
        max_deviation,
        max_value,
    })
}

/// Numerically estimates `λ` with `a|_w g = λ·a`; `tol` bounds the series
/// tail at every evaluation point.
pub fn slash_check(
    a: &FracSeries,
    weight: i32,
    g: &GroupElement,
    samples: &[Complex64],
    tol: f64,
) -> Result<SlashReport, ModformError> {
    slash_report(a, weight, g.to_f64(), samples, tol)
}

/// Measures the Fricke eigenvalue `λ_{k,N}` of `F = f(2τ/k)` under the
/// determinant-normalized matrix `B/√det B`.
pub fn fricke_eigenvalue(d: &DeltaNk, samples: &[Complex64], tol: f64) -> Result<SlashReport, ModformError> {
    let [a, b, c, dd] = fricke_matrix(d.k(), d.n());
    let s = libm::sqrt((b * c).unsigned_abs() as f64);
    let m = [a as f64 / s, b as f64 / s, c as f64 / s, dd as f64 / s];
    slash_report(d.f_rescaled(), 2, m, samples, tol)
}
