//! Truncated Laurent series in `q^{1/w}` with exact rational coefficients.
//!
//! A [`FracSeries`] stores its exponents on the grid `(1/w)·ℤ` and carries a
//! truncation order `t`: every coefficient at an exponent `< t` is known
//! exactly, nothing at or beyond `t` is. Operations propagate `t`
//! pessimistically, so a residual that is zero below its truncation order is
//! an honest statement about the first `t` coefficients.

mod ops;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

/// Exponents of `q` are rationals with machine-sized parts.
pub type Exponent = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series is zero below its truncation order {0}")]
    ZeroSeries(Exponent),
    #[error("non-integer exponents carry nonzero coefficients: {}", join_exponents(.0))]
    NonIntegerExponents(Vec<Exponent>),
    #[error("exponent {exponent} does not lie on the grid (1/{grid})Z")]
    OffGrid { exponent: Exponent, grid: i64 },
    #[error("exponent {exponent} is not below the truncation order {trunc}")]
    BeyondTruncation { exponent: Exponent, trunc: Exponent },
    #[error("grid denominator must be positive, got {0}")]
    InvalidGrid(i64),
}

fn join_exponents(es: &[Exponent]) -> String {
    use core::fmt::Write;
    let mut out = String::new();
    for (i, e) in es.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{e}");
    }
    out
}

/// A truncated series `Σ c_e q^e + O(q^t)` with `e ∈ (1/w)ℤ`.
///
/// Internally exponents are stored as integers `e·w`; no stored coefficient
/// is zero and every stored key is below the truncation key.
#[derive(Clone, Debug)]
pub struct FracSeries {
    grid: i64,
    coeffs: BTreeMap<i64, BigRational>,
    trunc: i64,
}

impl FracSeries {
    pub(crate) fn from_raw(grid: i64, coeffs: BTreeMap<i64, BigRational>, trunc: i64) -> Self {
        debug_assert!(grid > 0);
        debug_assert!(coeffs.keys().all(|&k| k < trunc));
        debug_assert!(coeffs.values().all(|c| !c.is_zero()));
        FracSeries {
            grid,
            coeffs,
            trunc,
        }
    }

    /// The zero series, known below `trunc`.
    pub fn zero(trunc: Exponent) -> Self {
        let grid = *trunc.denom();
        FracSeries::from_raw(grid, BTreeMap::new(), *trunc.numer())
    }

    pub fn one(trunc: Exponent) -> Self {
        FracSeries::constant(BigRational::one(), trunc)
    }

    pub fn constant(c: BigRational, trunc: Exponent) -> Self {
        FracSeries::monomial(c, Exponent::zero(), trunc)
    }

    /// `c·q^e + O(q^trunc)`; the term is dropped if `e >= trunc`.
    pub fn monomial(c: BigRational, e: Exponent, trunc: Exponent) -> Self {
        let grid = lcm(*e.denom(), *trunc.denom());
        let mut coeffs = BTreeMap::new();
        let key = to_key(e, grid);
        let tkey = to_key(trunc, grid);
        if !c.is_zero() && key < tkey {
            coeffs.insert(key, c);
        }
        FracSeries::from_raw(grid, coeffs, tkey)
    }

    /// Builds a series from explicit terms on the grid `(1/grid)ℤ`.
    ///
    /// Repeated exponents are summed; zero coefficients are dropped.
    pub fn from_terms<I>(grid: i64, trunc: Exponent, terms: I) -> Result<Self, SeriesError>
    where
        I: IntoIterator<Item = (Exponent, BigRational)>,
    {
        if grid <= 0 {
            return Err(SeriesError::InvalidGrid(grid));
        }
        let tkey = exact_key(trunc, grid)?;
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            let key = exact_key(e, grid)?;
            if key >= tkey {
                return Err(SeriesError::BeyondTruncation { exponent: e, trunc });
            }
            let slot = coeffs.entry(key).or_insert_with(BigRational::zero);
            *slot += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(FracSeries::from_raw(grid, coeffs, tkey))
    }

    /// Integer-grid series `Σ_i coeffs[i] q^{offset+i} + O(q^trunc)`.
    ///
    /// Entries at or beyond `trunc` are ignored.
    pub fn from_integer_coeffs<I, T>(offset: i64, coeffs: I, trunc: i64) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs.into_iter().enumerate() {
            let key = offset + i as i64;
            if key >= trunc {
                break;
            }
            let c: BigInt = c.into();
            if !c.is_zero() {
                map.insert(key, BigRational::from_integer(c));
            }
        }
        FracSeries::from_raw(1, map, trunc)
    }

    /// Grid denominator `w`: exponents live in `(1/w)ℤ`.
    pub fn grid(&self) -> i64 {
        self.grid
    }

    /// Coefficients are known exactly for every exponent below this value.
    pub fn trunc_order(&self) -> Exponent {
        Exponent::new(self.trunc, self.grid)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Least exponent with a nonzero stored coefficient.
    pub fn order(&self) -> Option<Exponent> {
        self.coeffs
            .keys()
            .next()
            .map(|&k| Exponent::new(k, self.grid))
    }

    pub fn leading_term(&self) -> Option<(Exponent, &BigRational)> {
        self.coeffs
            .iter()
            .next()
            .map(|(&k, c)| (Exponent::new(k, self.grid), c))
    }

    /// Coefficient at `e`, or `None` when `e` is at or beyond the
    /// truncation order. Exponents off the grid have coefficient zero.
    pub fn coeff(&self, e: Exponent) -> Option<BigRational> {
        if e >= self.trunc_order() {
            return None;
        }
        let scaled = e * self.grid;
        if !scaled.is_integer() {
            return Some(BigRational::zero());
        }
        Some(
            self.coeffs
                .get(scaled.numer())
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// Coefficient at an integer exponent.
    pub fn coeff_at(&self, n: i64) -> Option<BigRational> {
        self.coeff(Exponent::from_integer(n))
    }

    /// Stored terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &BigRational)> + '_ {
        let w = self.grid;
        self.coeffs.iter().map(move |(&k, c)| (Exponent::new(k, w), c))
    }

    /// Lowers the truncation order to `min(trunc_order, t)`.
    pub fn truncate(&self, t: Exponent) -> Self {
        if t >= self.trunc_order() {
            return self.clone();
        }
        let grid = lcm(self.grid, *t.denom());
        let s = grid / self.grid;
        let tkey = to_key(t, grid);
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k * s, c))
            .filter(|&(k, _)| k < tkey)
            .map(|(k, c)| (k, c.clone()))
            .collect();
        FracSeries::from_raw(grid, coeffs, tkey)
    }

    /// Re-expresses the series on the finer grid `(1/grid)ℤ`.
    pub fn on_grid(&self, grid: i64) -> Result<Self, SeriesError> {
        if grid <= 0 || grid % self.grid != 0 {
            return Err(SeriesError::InvalidGrid(grid));
        }
        Ok(self.regrid(grid))
    }

    pub(crate) fn regrid(&self, grid: i64) -> Self {
        debug_assert!(grid % self.grid == 0);
        if grid == self.grid {
            return self.clone();
        }
        let s = grid / self.grid;
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k * s, c.clone())).collect();
        FracSeries::from_raw(grid, coeffs, self.trunc * s)
    }

    /// Smallest grid that still holds every stored exponent and the
    /// truncation order.
    pub fn minimal_grid(&self) -> i64 {
        let g = self
            .coeffs
            .keys()
            .fold(self.trunc.gcd(&self.grid), |g, &k| g.gcd(&k));
        self.grid / g
    }

    /// Same series on its minimal grid.
    pub fn canonical(&self) -> Self {
        let w = self.minimal_grid();
        if w == self.grid {
            return self.clone();
        }
        let s = self.grid / w;
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k / s, c.clone())).collect();
        FracSeries::from_raw(w, coeffs, self.trunc / s)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Largest absolute value among stored coefficients.
    pub fn max_abs_coeff(&self) -> BigRational {
        self.coeffs
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// `e·grid`, assuming the grid is fine enough.
pub(crate) fn to_key(e: Exponent, grid: i64) -> i64 {
    let scaled = e * grid;
    debug_assert!(scaled.is_integer());
    *scaled.numer()
}

fn exact_key(e: Exponent, grid: i64) -> Result<i64, SeriesError> {
    let scaled = e * grid;
    if scaled.is_integer() {
        Ok(*scaled.numer())
    } else {
        Err(SeriesError::OffGrid { exponent: e, grid })
    }
}

impl PartialEq for FracSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.trunc_order() != other.trunc_order() || self.coeffs.len() != other.coeffs.len() {
            return false;
        }
        self.terms()
            .zip(other.terms())
            .all(|((ea, ca), (eb, cb))| ea == eb && ca == cb)
    }
}

impl Eq for FracSeries {}

impl fmt::Display for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            if e.is_zero() {
                write!(f, "{mag}")?;
                continue;
            }
            if !unit {
                if mag.is_integer() {
                    write!(f, "{mag}*")?;
                } else {
                    write!(f, "({mag})*")?;
                }
            }
            if e.is_one() {
                f.write_str("q")?;
            } else if e.is_integer() {
                write!(f, "q^{e}")?;
            } else {
                write!(f, "q^({e})")?;
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        let t = self.trunc_order();
        if t.is_integer() {
            write!(f, "O(q^{t})")
        } else {
            write!(f, "O(q^({t}))")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn e(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn constructors_keep_invariants() {
        let s = FracSeries::from_terms(
            2,
            e(5, 1),
            vec![(e(1, 2), q(1)), (e(1, 2), q(-1)), (e(3, 2), q(4))],
        )
        .unwrap();
        assert_eq!(s.num_terms(), 1);
        assert_eq!(s.coeff(e(3, 2)), Some(q(4)));
        assert_eq!(s.coeff(e(1, 3)), Some(q(0)));
        assert_eq!(s.coeff(e(5, 1)), None);
        assert_eq!(s.order(), Some(e(3, 2)));
    }

    #[test]
    fn off_grid_and_beyond_truncation_rejected() {
        let err = FracSeries::from_terms(2, e(3, 1), vec![(e(1, 3), q(1))]).unwrap_err();
        assert!(matches!(err, SeriesError::OffGrid { .. }));
        let err = FracSeries::from_terms(1, e(3, 1), vec![(e(3, 1), q(1))]).unwrap_err();
        assert!(matches!(err, SeriesError::BeyondTruncation { .. }));
        assert!(matches!(
            FracSeries::from_terms(0, e(1, 1), vec![]),
            Err(SeriesError::InvalidGrid(0))
        ));
    }

    #[test]
    fn equality_ignores_grid() {
        let a = FracSeries::from_integer_coeffs(0, [1, 2, 3], 3);
        let b = a.regrid(6);
        assert_eq!(a, b);
        assert_eq!(b.canonical().grid(), 1);
        assert_ne!(a, a.truncate(e(2, 1)));
    }

    #[test]
    fn display_is_readable() {
        let s = FracSeries::from_terms(
            2,
            e(3, 1),
            vec![(e(0, 1), q(1)), (e(1, 2), q(-2)), (e(2, 1), BigRational::new(1.into(), 3.into()))],
        )
        .unwrap();
        assert_eq!(s.to_string(), "1 - 2*q^(1/2) + (1/3)*q^2 + O(q^3)");
    }
}
