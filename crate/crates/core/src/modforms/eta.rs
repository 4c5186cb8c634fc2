use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use super::ModformError;
use crate::series::{Exponent, FracSeries};

/// `∏ η(dτ)^{r_d}` as a list of `(d, r_d)`; written `"1^4 5^4"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaQuotientSpec {
    factors: Vec<(u64, i64)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: Vec<(u64, i64)>) -> Result<Self, ModformError> {
        if factors.is_empty() {
            return Err(ModformError::EtaSpec("no factors".into()));
        }
        for (i, &(d, _)) in factors.iter().enumerate() {
            if d == 0 {
                return Err(ModformError::EtaSpec("dilation must be positive".into()));
            }
            if factors[..i].iter().any(|&(e, _)| e == d) {
                return Err(ModformError::EtaSpec(alloc::format!("repeated dilation {d}")));
            }
        }
        Ok(EtaQuotientSpec { factors })
    }

    pub fn factors(&self) -> &[(u64, i64)] {
        &self.factors
    }

    /// `Σ d·r_d / 24`, the exponent of the leading `q` power.
    pub fn leading_exponent(&self) -> Exponent {
        let s: i64 = self.factors.iter().map(|&(d, r)| d as i64 * r).sum();
        Exponent::new(s, 24)
    }

    /// Half the total eta exponent.
    pub fn weight(&self) -> Exponent {
        Exponent::new(self.factors.iter().map(|&(_, r)| r).sum(), 2)
    }

    /// Least `L` with every `d | L` and `L·Σ r_d/d ≡ 0 (mod 24)`.
    pub fn level(&self) -> u64 {
        let base = self.factors.iter().fold(1u64, |acc, &(d, _)| acc.lcm(&d));
        let s = self
            .factors
            .iter()
            .fold(Exponent::zero(), |acc, &(d, r)| acc + Exponent::new(r, d as i64));
        (1..=24u64)
            .map(|m| base * m)
            .find(|&l| (s * l as i64 / 24).is_integer())
            .expect("24·lcm always works")
    }

    /// Reads a weight-`k` quotient as `Δ(τ) = f(2τ/k)^{k/2}` and returns the
    /// spec of `f`: dilations scale by `k/2`, exponents by `2/k`.
    pub fn newform_from_delta(&self, k: u32) -> Option<EtaQuotientSpec> {
        let h = (k / 2) as i64;
        if h == 0 || self.weight() != Exponent::from_integer(k as i64) {
            return None;
        }
        let mut factors = Vec::with_capacity(self.factors.len());
        for &(d, r) in &self.factors {
            if r % h != 0 {
                return None;
            }
            factors.push((d * h as u64, r / h));
        }
        EtaQuotientSpec::new(factors).ok()
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = ModformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModformError::EtaSpec(s.to_string());
        let mut factors = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (d, r) = match tok.split_once('^') {
                Some((d, r)) => (d, r),
                None => (tok, "1"),
            };
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            let r: i64 = r.trim().parse().map_err(|_| bad())?;
            factors.push((d, r));
        }
        EtaQuotientSpec::new(factors)
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(d, r)| alloc::format!("{d}^{r}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `∏_{n≥1}(1 − q^n)` below `q^m`, from the pentagonal number theorem.
pub fn euler_function(m: i64) -> FracSeries {
    let mut coeffs = alloc::vec![0i64; m.max(0) as usize];
    let mut k: i64 = 0;
    loop {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let p1 = k * (3 * k - 1) / 2;
        let p2 = k * (3 * k + 1) / 2;
        if p1 >= m {
            break;
        }
        coeffs[p1 as usize] = sign;
        if k > 0 && p2 < m {
            coeffs[p2 as usize] = sign;
        }
        k += 1;
    }
    FracSeries::from_integer_coeffs(0, coeffs, m)
}

/// Expands `∏ η(dτ)^{r_d}` below `q^trunc` on the grid `lcm(24, den(trunc))`.
pub fn eta_quotient(spec: &EtaQuotientSpec, trunc: Exponent) -> FracSeries {
    let lead = spec.leading_exponent();
    let grid = 24i64.lcm(trunc.denom());
    let needed = (trunc - lead).ceil().to_integer();
    if needed <= 0 {
        return FracSeries::zero(trunc).regrid(grid);
    }

    let mut product = FracSeries::one(Exponent::from_integer(needed));
    for &(d, r) in spec.factors() {
        if r == 0 {
            continue;
        }
        let d = d as i64;
        let base = euler_function(Integer::div_ceil(&needed, &d)).rescale(Exponent::from_integer(d));
        let base = if r > 0 {
            base
        } else {
            base.invert().expect("Euler product has constant term 1")
        };
        product = product.mul(&base.pow(r.unsigned_abs() as u32));
    }
    debug_assert!(!product.trunc_order().is_zero());
    product.shift(lead).truncate(trunc).regrid(grid)
}
