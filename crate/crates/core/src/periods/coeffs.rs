use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_rational::BigRational;

use super::curve::{ap_with_models, IntegralModel};
use super::{PeriodsError, RationalCubic};
use crate::arith::{primes_up_to, smallest_prime_factors};
use crate::series::FracSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffSource {
    /// Counted on `y² = x³ + Ax + B`.
    PointCount { a: BigRational, b: BigRational },
    File,
    Given,
}

/// Newform coefficients `a(1), …, a(n_max)` of a given level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    level: u64,
    /// `a[n]` for `0 ≤ n ≤ n_max`; `a[0]` is unused and zero.
    a: Vec<i64>,
    source: CoeffSource,
}

impl CoeffTable {
    /// Extends prime values to all `n ≤ n_max`: Hecke recursion at primes
    /// not dividing the level, `a(p^r) = a(p)^r` at those that do, and
    /// multiplicativity.
    pub fn from_prime_values(
        level: u64,
        n_max: u64,
        primes: &BTreeMap<u64, i64>,
        source: CoeffSource,
    ) -> Result<Self, PeriodsError> {
        let n = n_max as usize;
        let spf = smallest_prime_factors(n);
        let mut a = vec![0i64; n + 1];
        if n >= 1 {
            a[1] = 1;
        }
        for m in 2..=n {
            let p = spf[m] as u64;
            let mut pe = 1usize;
            let mut rest = m;
            while rest % p as usize == 0 {
                rest /= p as usize;
                pe *= p as usize;
            }
            if rest > 1 {
                a[m] = a[pe] * a[rest];
                continue;
            }
            // m is a prime power p^e.
            let ap = *primes.get(&p).ok_or(PeriodsError::MissingBadPrime(p))?;
            a[m] = if pe == p as usize {
                ap
            } else if level % p == 0 {
                ap * a[pe / p as usize]
            } else {
                let (prev, prev2) = (pe / p as usize, pe / (p * p) as usize);
                ap * a[prev] - p as i64 * a[prev2]
            };
        }
        let t = CoeffTable { level, a, source };
        Ok(t)
    }

    /// A table from explicit values `a(1), …, a(n_max)`, checked against
    /// the structural identities.
    pub fn from_values(level: u64, values: &[i64], source: CoeffSource) -> Result<Self, PeriodsError> {
        let mut a = Vec::with_capacity(values.len() + 1);
        a.push(0);
        a.extend_from_slice(values);
        let t = CoeffTable { level, a, source };
        t.check_invariants()?;
        Ok(t)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn n_max(&self) -> u64 {
        (self.a.len() - 1) as u64
    }

    pub fn source(&self) -> &CoeffSource {
        &self.source
    }

    pub fn get(&self, n: u64) -> Option<i64> {
        if n == 0 {
            return None;
        }
        self.a.get(n as usize).copied()
    }

    /// `a(1), …, a(n_max)`.
    pub fn values(&self) -> &[i64] {
        &self.a[1..]
    }

    /// `a(1) = 1`, the prime-power recursions and multiplicativity on every
    /// stored coprime pair.
    pub fn check_invariants(&self) -> Result<(), PeriodsError> {
        let n = self.n_max();
        let bad = |msg: alloc::string::String| Err(PeriodsError::Table(msg));
        if n == 0 {
            return bad("empty table".into());
        }
        if self.a[1] != 1 {
            return bad(alloc::format!("a(1) = {}", self.a[1]));
        }
        for p in primes_up_to(n) {
            let ap = self.a[p as usize];
            let mut prev2 = 1i64;
            let mut prev = ap;
            let mut pe = p * p;
            while pe <= n {
                let want = if self.level % p == 0 {
                    ap * prev
                } else {
                    ap * prev - p as i64 * prev2
                };
                if self.a[pe as usize] != want {
                    return bad(alloc::format!("a({pe}) = {} breaks the recursion (expected {want})", self.a[pe as usize]));
                }
                prev2 = prev;
                prev = want;
                pe *= p;
            }
        }
        for m in 2..=n {
            for k in (m + 1)..=(n / m) {
                if m.gcd(&k) == 1 && self.a[(m * k) as usize] != self.a[m as usize] * self.a[k as usize] {
                    return bad(alloc::format!("a({}) is not a({m})·a({k})", m * k));
                }
            }
        }
        for p in primes_up_to(n) {
            let ap = self.a[p as usize];
            if self.level % p != 0 && (ap * ap) as u64 > 4 * p {
                return Err(PeriodsError::Hasse { p, ap });
            }
        }
        Ok(())
    }

    /// `f = Σ a(n) qⁿ`, known below `q^{n_max+1}`.
    pub fn to_series(&self) -> FracSeries {
        FracSeries::from_integer_coeffs(0, self.a.iter().copied(), self.a.len() as i64)
    }
}

/// `a_p` for one prime: zero when `p²` divides the level, the supplied
/// value when `p` divides it once, otherwise a point count (falling back to
/// `bad_values` when no integral model has good reduction at `p`).
pub fn local_coefficient(
    models: &[IntegralModel],
    level: u64,
    p: u64,
    bad_values: &BTreeMap<u64, i64>,
) -> Result<i64, PeriodsError> {
    if level % (p * p) == 0 {
        return Ok(0);
    }
    if level % p == 0 {
        return bad_values.get(&p).copied().ok_or(PeriodsError::MissingBadPrime(p));
    }
    match ap_with_models(models, p) {
        Err(PeriodsError::BadPrime(_)) if bad_values.contains_key(&p) => Ok(bad_values[&p]),
        r => r,
    }
}

/// Counts points for every prime up to `n_max` and extends to a table.
pub fn build_coeff_table(
    c: &RationalCubic,
    level: u64,
    n_max: u64,
    bad_values: &BTreeMap<u64, i64>,
) -> Result<CoeffTable, PeriodsError> {
    let models = c.integral_models();
    let mut primes = BTreeMap::new();
    for p in primes_up_to(n_max) {
        primes.insert(p, local_coefficient(&models, level, p, bad_values)?);
    }
    let source = CoeffSource::PointCount {
        a: c.a().clone(),
        b: c.b().clone(),
    };
    CoeffTable::from_prime_values(level, n_max, &primes, source)
}

/// `gcd{p + 1 − a(p) : p prime, p ≡ 1 (mod m), p ≤ bound}`, or 0 when no
/// such prime exists.
pub fn manin_drinfeld_gcd(t: &CoeffTable, m: u64, bound: u64) -> Result<u64, PeriodsError> {
    if bound > t.n_max() {
        return Err(PeriodsError::InsufficientCoefficients {
            required: bound,
            available: t.n_max(),
        });
    }
    let mut g = 0u64;
    for p in primes_up_to(bound) {
        if m > 0 && p % m == 1 {
            let v = (p as i64 + 1 - t.a[p as usize]).unsigned_abs();
            g = g.gcd(&v);
        }
    }
    Ok(g)
}
