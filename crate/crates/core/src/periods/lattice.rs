use alloc::collections::VecDeque;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::PeriodsError;
use crate::arith::divisors;

/// A lattice `ω₁ℤ + ω₂ℤ` with a Gauss-reduced, positively oriented basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodLattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    /// Largest distance from an input period to the lattice.
    pub quality: f64,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    (a.conj() * b).im
}

fn gauss_reduce(mut w1: Complex64, mut w2: Complex64) -> (Complex64, Complex64) {
    loop {
        if w2.norm_sqr() < w1.norm_sqr() {
            core::mem::swap(&mut w1, &mut w2);
        }
        let mu = libm::round((w2 * w1.conj()).re / w1.norm_sqr());
        w2 -= w1 * mu;
        if w2.norm_sqr() >= w1.norm_sqr() {
            break;
        }
    }
    // ω₁ in the right half-plane, then Im(ω₂/ω₁) > 0.
    if w1.re < 0.0 || (w1.re == 0.0 && w1.im < 0.0) {
        w1 = -w1;
    }
    if cross(w1, w2) < 0.0 {
        w2 = -w2;
    }
    (w1, w2)
}

impl PeriodLattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self, PeriodsError> {
        if cross(w1, w2).abs() <= 1e-300 {
            return Err(PeriodsError::Degenerate);
        }
        let (omega1, omega2) = gauss_reduce(w1, w2);
        Ok(PeriodLattice {
            omega1,
            omega2,
            quality: 0.0,
        })
    }

    /// `τ_Λ = ω₂/ω₁`, in the upper half-plane.
    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    pub fn covolume(&self) -> f64 {
        cross(self.omega1, self.omega2)
    }

    /// Real `(x, y)` with `z = xω₁ + yω₂`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let det = self.covolume();
        (-cross(self.omega2, z) / det, cross(self.omega1, z) / det)
    }

    /// The translate of `z` closest to the origin.
    pub fn reduce_point(&self, z: Complex64) -> Complex64 {
        let (x, y) = self.coordinates(z);
        let base = z - self.omega1 * libm::round(x) - self.omega2 * libm::round(y);
        let mut best = base;
        for i in -1..=1 {
            for j in -1..=1 {
                let c = base + self.omega1 * i as f64 + self.omega2 * j as f64;
                if c.norm() < best.norm() {
                    best = c;
                }
            }
        }
        best
    }

    pub fn distance(&self, z: Complex64) -> f64 {
        self.reduce_point(z).norm()
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        self.distance(z) <= tol
    }

    /// Equal as lattices: each basis lies in the other, so the bases differ
    /// by a unimodular change of basis.
    pub fn same_as(&self, other: &PeriodLattice, tol: f64) -> bool {
        self.contains(other.omega1, tol)
            && self.contains(other.omega2, tol)
            && other.contains(self.omega1, tol)
            && other.contains(self.omega2, tol)
    }
}

enum Basis {
    Empty,
    One(Complex64),
    Two(Complex64, Complex64),
}

fn real_gcd(mut a: Complex64, mut b: Complex64, tol: f64) -> Complex64 {
    while b.norm() > tol {
        let q = libm::round((a / b).re);
        let r = a - b * q;
        a = b;
        b = r;
    }
    a
}

/// The lattice generated by `periods`, treating anything within `tol` of
/// the current lattice as already in it.
///
/// A basis vector shorter than `1000·tol` means the inputs are not
/// commensurable at this tolerance, and is reported instead of returned.
pub fn lattice_from_periods(periods: &[Complex64], tol: f64) -> Result<PeriodLattice, PeriodsError> {
    let mut queue: VecDeque<Complex64> = periods.iter().copied().filter(|z| z.norm() > tol).collect();
    let mut basis = Basis::Empty;
    let mut steps = 0usize;
    while let Some(z) = queue.pop_front() {
        steps += 1;
        if steps > 100_000 {
            return Err(PeriodsError::NotALattice {
                quality: f64::INFINITY,
                tol,
            });
        }
        basis = match basis {
            Basis::Empty => Basis::One(z),
            Basis::One(v) => {
                if cross(v, z).abs() / v.norm() <= tol {
                    Basis::One(real_gcd(v, z, tol))
                } else {
                    let (a, b) = gauss_reduce(v, z);
                    Basis::Two(a, b)
                }
            }
            Basis::Two(v1, v2) => {
                let l = PeriodLattice {
                    omega1: v1,
                    omega2: v2,
                    quality: 0.0,
                };
                let (x, y) = l.coordinates(z);
                let (fx, fy) = (x - libm::round(x), y - libm::round(y));
                let r = l.reduce_point(z);
                if r.norm() <= tol {
                    Basis::Two(v1, v2)
                } else {
                    // r halves the covolume at least; the displaced vector
                    // is re-queued so nothing is lost.
                    let zr = z - v1 * libm::round(x) - v2 * libm::round(y);
                    let (a, b) = if fy.abs() >= fx.abs() {
                        queue.push_back(v2);
                        gauss_reduce(v1, zr)
                    } else {
                        queue.push_back(v1);
                        gauss_reduce(zr, v2)
                    };
                    if a.norm() < 1e3 * tol {
                        return Err(PeriodsError::NotDiscrete(a.norm()));
                    }
                    Basis::Two(a, b)
                }
            }
        };
    }
    let Basis::Two(w1, w2) = basis else {
        return Err(PeriodsError::Degenerate);
    };
    let mut l = PeriodLattice::new(w1, w2)?;
    l.quality = periods.iter().map(|&z| l.distance(z)).fold(0.0, f64::max);
    if l.quality > tol {
        return Err(PeriodsError::NotALattice { quality: l.quality, tol });
    }
    Ok(l)
}

fn sigma_f64(k: i32, n: u64) -> f64 {
    divisors(n).into_iter().map(|d| libm::pow(d as f64, k as f64)).sum()
}

fn eisenstein_at(tau: Complex64) -> (Complex64, Complex64) {
    let q = Complex64::new(0.0, 2.0 * PI * tau.re).exp() * libm::exp(-2.0 * PI * tau.im);
    let mut e4 = Complex64::new(1.0, 0.0);
    let mut e6 = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    for n in 1..200u64 {
        qn *= q;
        let t4 = qn * (240.0 * sigma_f64(3, n));
        let t6 = qn * (-504.0 * sigma_f64(5, n));
        e4 += t4;
        e6 += t6;
        if t6.norm() < 1e-20 * e6.norm() && t4.norm() < 1e-20 * e4.norm() {
            break;
        }
    }
    (e4, e6)
}

/// `g₂ = (4π⁴/3)E₄(τ_Λ)/ω₁⁴` and `g₃ = (8π⁶/27)E₆(τ_Λ)/ω₁⁶`.
pub fn lattice_invariants(l: &PeriodLattice) -> (Complex64, Complex64) {
    let (e4, e6) = eisenstein_at(l.tau());
    let pi4 = libm::pow(PI, 4.0);
    let pi6 = libm::pow(PI, 6.0);
    let g2 = e4 * (4.0 * pi4 / 3.0) / l.omega1.powi(4);
    let g3 = e6 * (8.0 * pi6 / 27.0) / l.omega1.powi(6);
    (g2, g3)
}

/// `60Σ′ω⁻⁴` and `140Σ′ω⁻⁶` over `|m|, |n| ≤ radius`; slow and only
/// accurate to about `radius⁻²`, used as an independent check.
pub fn direct_lattice_sums(l: &PeriodLattice, radius: i64) -> (Complex64, Complex64) {
    let mut s4 = Complex64::new(0.0, 0.0);
    let mut s6 = Complex64::new(0.0, 0.0);
    for m in -radius..=radius {
        for n in -radius..=radius {
            if m == 0 && n == 0 {
                continue;
            }
            let w = l.omega1 * m as f64 + l.omega2 * n as f64;
            let w2 = (w * w).inv();
            s4 += w2 * w2;
            s6 += w2 * w2 * w2;
        }
    }
    (s4 * 60.0, s6 * 140.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_square() {
        let l = lattice_from_periods(&[c(1.0, 0.0), c(0.0, 1.0)], 1e-12).unwrap();
        assert!((l.omega1 - c(1.0, 0.0)).norm() < 1e-15);
        assert!((l.omega2 - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn collinear_gcd_then_second_direction() {
        let l = lattice_from_periods(&[c(2.0, 0.0), c(3.0, 0.0), c(0.0, 1.0)], 1e-12).unwrap();
        assert!((l.omega1.norm() - 1.0).abs() < 1e-12);
        assert!((l.omega2 - c(0.0, 1.0)).norm() < 1e-12);
        assert!(l.same_as(&PeriodLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap(), 1e-12));
    }

    #[test]
    fn finer_lattice_from_three_vectors() {
        // 2Z + 2iZ refined by 1 + i.
        let l = lattice_from_periods(&[c(2.0, 0.0), c(0.0, 2.0), c(1.0, 1.0), c(3.0, -1.0)], 1e-12).unwrap();
        assert!((l.covolume() - 2.0).abs() < 1e-12);
        assert!(l.contains(c(1.0, -1.0), 1e-12));
    }

    #[test]
    fn degenerate_and_off_lattice_inputs() {
        assert_eq!(
            lattice_from_periods(&[c(1.0, 0.0), c(2.0, 0.0)], 1e-12),
            Err(PeriodsError::Degenerate)
        );
        assert_eq!(lattice_from_periods(&[], 1e-12), Err(PeriodsError::Degenerate));
    }

    #[test]
    fn incommensurable_inputs_rejected() {
        let err = lattice_from_periods(&[c(1.0, 0.0), c(0.0, 1.0), c(core::f64::consts::SQRT_2, 0.0)], 1e-9);
        assert!(matches!(err, Err(PeriodsError::NotDiscrete(_))));
    }

    #[test]
    fn gauss_reduced_and_oriented() {
        let l = PeriodLattice::new(c(5.0, 1.0), c(7.0, 2.0)).unwrap();
        let (a, b) = (l.omega1, l.omega2);
        assert!(a.norm() <= b.norm() + 1e-12);
        assert!(b.norm() <= (a + b).norm() + 1e-12);
        assert!(b.norm() <= (a - b).norm() + 1e-12);
        assert!(l.tau().im > 0.0);
    }

    #[test]
    fn symmetric_lattices() {
        let sq = PeriodLattice::new(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        let (g2, g3) = lattice_invariants(&sq);
        assert!(g3.norm() < 1e-12 * g2.norm());
        let rho = Complex64::new(0.0, 2.0 * PI / 3.0).exp();
        let hex = PeriodLattice::new(c(1.0, 0.0), rho).unwrap();
        let (g2, g3) = lattice_invariants(&hex);
        assert!(g2.norm() < 1e-12 * g3.norm());
    }

    #[test]
    fn eisenstein_route_matches_direct_sums() {
        let ls: Vec<PeriodLattice> = [
            (c(1.0, 0.0), c(0.3, 1.2)),
            (c(1.1104197465122, 0.0), c(0.5552098732561, 2.1752061725591)),
        ]
        .iter()
        .map(|&(a, b)| PeriodLattice::new(a, b).unwrap())
        .collect();
        for l in ls {
            let (g2, g3) = lattice_invariants(&l);
            let (d2, d3) = direct_lattice_sums(&l, 200);
            assert!((g2 - d2).norm() < 1e-4 * g2.norm());
            assert!((g3 - d3).norm() < 1e-4 * g3.norm());
        }
    }
}
