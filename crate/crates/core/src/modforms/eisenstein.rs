use alloc::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::ModformError;
use crate::arith::sigma;
use crate::series::{Exponent, FracSeries};

/// Normalized `E_w(mτ) = 1 + c_w Σ σ_{w−1}(n) q^{mn}` below `q^trunc`,
/// with `c_4 = 240`, `c_6 = −504`.
pub fn eisenstein_e(weight: u32, dilation: u64, trunc: Exponent) -> Result<FracSeries, ModformError> {
    let c = match weight {
        4 => BigInt::from(240),
        6 => BigInt::from(-504),
        w => return Err(ModformError::InvalidEisensteinWeight(w)),
    };
    assert!(dilation > 0, "dilation must be positive");
    let grid = *trunc.denom();
    let tkey = *trunc.numer();
    let mut coeffs = BTreeMap::new();
    if tkey > 0 {
        coeffs.insert(0, BigRational::one());
    }
    let m = dilation as i64;
    let mut n: i64 = 1;
    while m * n * grid < tkey {
        let v = &c * sigma(weight - 1, n as u64);
        coeffs.insert(m * n * grid, BigRational::from_integer(v));
        n += 1;
    }
    Ok(FracSeries::from_raw(grid, coeffs, tkey))
}
