//! Elementary number theory on machine integers and rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sieve of Eratosthenes: all primes `<= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Smallest prime factor for every integer `0..=n` (entries 0 and 1 are 0).
pub fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Divisor power sum `σ_k(n)`.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n)
        .into_iter()
        .map(|d| BigInt::from(d).pow(k))
        .sum()
}

/// Kronecker-style symbol `(a/p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: i64, p: u64) -> i32 {
    let p_i = p as i64;
    let a = a.rem_euclid(p_i) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Modular inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: i64, m: i64) -> Option<i64> {
    let g = a.extended_gcd(&m);
    if g.gcd != 1 && g.gcd != -1 {
        return None;
    }
    Some((g.x * g.gcd).rem_euclid(m))
}

/// `p`-adic valuation of a nonzero big integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Reduce a rational with denominator prime to `p` into `0..p`.
pub fn reduce_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let inv = inverse_mod(den.to_i64()?, p as i64)? as u64;
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Integer roots of a monic integer polynomial given low-to-high
/// coefficients (leading `1` implied).
pub fn integer_roots_monic(coeffs: &[BigInt]) -> Vec<BigInt> {
    let eval = |x: &BigInt| -> BigInt {
        let mut acc = BigInt::one();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    // find the lowest nonzero coefficient: zero is a root otherwise
    let mut roots = Vec::new();
    let lowest = coeffs.iter().position(|c| !c.is_zero());
    let Some(lowest) = lowest else {
        roots.push(BigInt::zero());
        return roots;
    };
    if lowest > 0 {
        roots.push(BigInt::zero());
    }
    let c = coeffs[lowest].abs();
    let Some(c) = c.to_u64() else {
        return roots;
    };
    for d in divisors(c) {
        for cand in [BigInt::from(d), -BigInt::from(d)] {
            if eval(&cand).is_zero() {
                roots.push(cand);
            }
        }
    }
    roots.sort();
    roots
}

/// Rational roots of the monic `x^n + c_{n−1}x^{n−1} + … + c_0` given
/// low-to-high coefficients (leading `1` implied).
pub fn rational_roots_monic(coeffs: &[BigRational]) -> Vec<BigRational> {
    // x = X/u turns the polynomial into an integral monic one for the least
    // u among the divisors of the common denominator.
    let l = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let Some(l64) = l.to_u64() else {
        return Vec::new();
    };
    let n = coeffs.len();
    for u in divisors(l64) {
        let ub = BigInt::from(u);
        let scaled: Vec<BigRational> = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from_integer(num_traits::pow(ub.clone(), n - i)))
            .collect();
        if scaled.iter().all(|c| c.is_integer()) {
            let ints: Vec<BigInt> = scaled.iter().map(|c| c.to_integer()).collect();
            return integer_roots_monic(&ints)
                .into_iter()
                .map(|r| BigRational::new(r, ub.clone()))
                .collect();
        }
    }
    unreachable!("u = l always clears denominators")
}

/// Parses `n` or `n/d` into a rational; decimals are rejected.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Exact solution of a square system `A x = b`; `None` when singular.
pub fn solve_linear(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let delta = &f * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots_of_shape_cubic() {
        let roots = rational_roots_monic(&[q(-125000, 2197), q(-3500, 169), q(-89, 13)]);
        assert_eq!(roots, [q(125, 13)]);
        // (x − 1/2)(x + 3)(x − 2)
        let roots = rational_roots_monic(&[q(3, 1), q(-13, 2), q(1, 2)]);
        assert_eq!(roots, [q(-3, 1), q(1, 2), q(2, 1)]);
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational(" -64/3 "), Some(q(-64, 3)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("0.5"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn small_linear_system() {
        let a = vec![vec![q(0, 1), q(2, 1)], vec![q(3, 1), q(1, 1)]];
        assert_eq!(solve_linear(&a, &[q(4, 1), q(5, 1)]), Some(vec![q(1, 1), q(2, 1)]));
        let s = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(solve_linear(&s, &[q(1, 1), q(2, 1)]), None);
    }

    #[test]
    fn sieve_and_factor() {
        assert_eq!(primes_up_to(20), [2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(factorize(76), [(2, 2), (19, 1)]);
        assert_eq!(divisors(12), [1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(36), 12);
        let spf = smallest_prime_factors(30);
        assert_eq!(spf[15], 3);
        assert_eq!(spf[29], 29);
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(3, 2), BigInt::from(9));
        assert_eq!(sigma(5, 2), BigInt::from(33));
        assert_eq!(sigma(3, 1), BigInt::from(1));
    }

    #[test]
    fn legendre_small() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(14, 7), 0);
        assert_eq!(legendre(-1, 5), 1);
    }

    #[test]
    fn modular_inverse_and_reduction() {
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(2, 4), None);
        let x = BigRational::new(BigInt::from(-64), BigInt::from(3));
        // -64/3 mod 5: 3^{-1} = 2, -64*2 = -128 = 2 mod 5
        assert_eq!(reduce_mod(&x, 5), Some(2));
        assert_eq!(reduce_mod(&x, 3), None);
    }

    #[test]
    fn cubic_integer_roots() {
        // X^3 - 89X^2 - 3500X - 125000 = (X - 125)(X^2 + 36X + 1000)
        let c = [-125000, -3500, -89].map(BigInt::from);
        assert_eq!(integer_roots_monic(&c), [BigInt::from(125)]);
    }
}
