use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{lcm, to_key, Exponent, FracSeries, SeriesError};

/// Dense accumulation is used for products whose exponent window holds at
/// most this many grid points.
const DENSE_WINDOW: i64 = 1 << 18;

impl FracSeries {
    /// Effective order for truncation bookkeeping: the least stored key, or
    /// the truncation key when nothing is stored.
    fn order_key(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(self.trunc)
    }

    fn combine(&self, other: &FracSeries, negate_other: bool) -> FracSeries {
        let grid = lcm(self.grid, other.grid);
        let (sa, sb) = (grid / self.grid, grid / other.grid);
        let trunc = (self.trunc * sa).min(other.trunc * sb);
        let mut coeffs: BTreeMap<i64, BigRational> = self
            .coeffs
            .iter()
            .map(|(&k, c)| (k * sa, c))
            .filter(|&(k, _)| k < trunc)
            .map(|(k, c)| (k, c.clone()))
            .collect();
        for (&k, c) in &other.coeffs {
            let k = k * sb;
            if k >= trunc {
                break;
            }
            let slot = coeffs.entry(k).or_insert_with(BigRational::zero);
            if negate_other {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        FracSeries::from_raw(grid, coeffs, trunc)
    }

    pub fn add(&self, other: &FracSeries) -> FracSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &FracSeries) -> FracSeries {
        self.combine(other, true)
    }

    pub fn neg(&self) -> FracSeries {
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k, -c)).collect();
        FracSeries::from_raw(self.grid, coeffs, self.trunc)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> FracSeries {
        if c.is_zero() {
            return FracSeries::from_raw(self.grid, BTreeMap::new(), self.trunc);
        }
        let coeffs = self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect();
        FracSeries::from_raw(self.grid, coeffs, self.trunc)
    }

    /// Multiplication by `q^e`; the truncation order shifts with it.
    pub fn shift(&self, e: Exponent) -> FracSeries {
        let grid = lcm(self.grid, *e.denom());
        let s = grid / self.grid;
        let de = to_key(e, grid);
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k * s + de, c.clone())).collect();
        FracSeries::from_raw(grid, coeffs, self.trunc * s + de)
    }

    /// Exact product. The result is known below
    /// `min(t_a + ord(b), t_b + ord(a))`.
    pub fn mul(&self, other: &FracSeries) -> FracSeries {
        let grid = lcm(self.grid, other.grid);
        let (sa, sb) = (grid / self.grid, grid / other.grid);
        let (oa, ob) = (self.order_key() * sa, other.order_key() * sb);
        let trunc = (self.trunc * sa + ob).min(other.trunc * sb + oa);
        if self.is_zero() || other.is_zero() || oa + ob >= trunc {
            return FracSeries::from_raw(grid, BTreeMap::new(), trunc);
        }

        // Clear denominators so the convolution runs over big integers.
        let (na, la) = integer_terms(self, sa);
        let (nb, lb) = integer_terms(other, sb);
        let den = la * lb;
        let lo = oa + ob;
        let window = trunc - lo;

        let mut coeffs = BTreeMap::new();
        if window <= DENSE_WINDOW {
            let mut acc = vec![BigInt::zero(); window as usize];
            for (ka, ca) in &na {
                if ka + ob >= trunc {
                    break;
                }
                for (kb, cb) in &nb {
                    let k = ka + kb;
                    if k >= trunc {
                        break;
                    }
                    acc[(k - lo) as usize] += ca * cb;
                }
            }
            for (i, v) in acc.into_iter().enumerate() {
                if !v.is_zero() {
                    coeffs.insert(lo + i as i64, BigRational::new(v, den.clone()));
                }
            }
        } else {
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (ka, ca) in &na {
                if ka + ob >= trunc {
                    break;
                }
                for (kb, cb) in &nb {
                    let k = ka + kb;
                    if k >= trunc {
                        break;
                    }
                    *acc.entry(k).or_insert_with(BigInt::zero) += ca * cb;
                }
            }
            for (k, v) in acc {
                if !v.is_zero() {
                    coeffs.insert(k, BigRational::new(v, den.clone()));
                }
            }
        }
        FracSeries::from_raw(grid, coeffs, trunc)
    }

    /// `a^n` by repeated squaring, `n >= 1`.
    ///
    /// # Panics
    /// Panics if `n == 0`; the truncation order of `a^0` is not determined
    /// by `a`.
    pub fn pow(&self, n: u32) -> FracSeries {
        assert!(n >= 1, "FracSeries::pow requires a positive exponent");
        let mut base = self.clone();
        let mut acc: Option<FracSeries> = None;
        let mut n = n;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul(&base);
        }
        acc.expect("n >= 1")
    }

    /// Multiplicative inverse. For `a = c·q^{e0}(1 + …)` known below `t`,
    /// the inverse starts at `q^{-e0}` and is known below `t − 2·e0`.
    pub fn invert(&self) -> Result<FracSeries, SeriesError> {
        let Some((&k0, c0)) = self.coeffs.iter().next() else {
            return Err(SeriesError::ZeroSeries(self.trunc_order()));
        };
        let rel = self.trunc - k0;
        let inv_c0 = c0.recip();
        let tail: Vec<(usize, &BigRational)> = self
            .coeffs
            .iter()
            .skip(1)
            .map(|(&k, c)| ((k - k0) as usize, c))
            .collect();
        let mut b: Vec<BigRational> = Vec::with_capacity(rel as usize);
        b.push(inv_c0.clone());
        for n in 1..rel as usize {
            let mut s = BigRational::zero();
            for &(j, c) in &tail {
                if j > n {
                    break;
                }
                let bj = &b[n - j];
                if !bj.is_zero() {
                    s += c * bj;
                }
            }
            b.push(-(s * &inv_c0));
        }
        let coeffs = b
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 - k0, c))
            .collect();
        Ok(FracSeries::from_raw(self.grid, coeffs, self.trunc - 2 * k0))
    }

    /// Substitution `q ↦ q^r` for a positive rational `r`.
    ///
    /// # Panics
    /// Panics if `r <= 0`.
    pub fn rescale(&self, r: Exponent) -> FracSeries {
        assert!(r > Exponent::zero(), "rescale factor must be positive");
        let (p, s) = (*r.numer(), *r.denom());
        let grid = self.grid * s;
        let g = p.gcd(&grid);
        let (p, grid) = (p / g, grid / g);
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k * p, c.clone())).collect();
        FracSeries::from_raw(grid, coeffs, self.trunc * p)
    }

    /// `θ = q·d/dq`: the coefficient at `e` is multiplied by `e`.
    pub fn theta(&self) -> FracSeries {
        let w = BigInt::from(self.grid);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&k, _)| k != 0)
            .map(|(&k, c)| (k, c * BigRational::new(BigInt::from(k), w.clone())))
            .collect();
        FracSeries::from_raw(self.grid, coeffs, self.trunc)
    }

    /// Moves the series onto the integer grid, failing if any nonzero
    /// coefficient sits at a non-integer exponent. The truncation order
    /// becomes `⌈t⌉`, which bounds the same set of integer exponents.
    pub fn coerce_integer_grid(&self) -> Result<FracSeries, SeriesError> {
        let w = self.grid;
        let offending: Vec<Exponent> = self
            .coeffs
            .keys()
            .filter(|&&k| k % w != 0)
            .map(|&k| Exponent::new(k, w))
            .collect();
        if !offending.is_empty() {
            return Err(SeriesError::NonIntegerExponents(offending));
        }
        let coeffs = self.coeffs.iter().map(|(&k, c)| (k / w, c.clone())).collect();
        Ok(FracSeries::from_raw(1, coeffs, Integer::div_ceil(&self.trunc, &w)))
    }
}

/// Terms scaled to integers: returns `(key·s, c·L)` pairs and `L`.
fn integer_terms(a: &FracSeries, s: i64) -> (Vec<(i64, BigInt)>, BigInt) {
    let l = a.denominator_lcm();
    let terms = a
        .coeffs
        .iter()
        .map(|(&k, c)| {
            let n = if l.is_one() {
                c.numer().clone()
            } else {
                c.numer() * (&l / c.denom())
            };
            (k * s, n)
        })
        .collect();
    (terms, l)
}

impl Add for &FracSeries {
    type Output = FracSeries;
    fn add(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::add(self, rhs)
    }
}

impl Sub for &FracSeries {
    type Output = FracSeries;
    fn sub(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::sub(self, rhs)
    }
}

impl Mul for &FracSeries {
    type Output = FracSeries;
    fn mul(self, rhs: &FracSeries) -> FracSeries {
        FracSeries::mul(self, rhs)
    }
}

impl Neg for &FracSeries {
    type Output = FracSeries;
    fn neg(self) -> FracSeries {
        FracSeries::neg(self)
    }
}
