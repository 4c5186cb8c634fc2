//! Degree-versus-ramification bounds behind the finiteness argument.
//!
//! A parametrization `Φ: X₀(M) → E` with all ramification over the origin
//! supported at cusps has `deg Φ ≤ Σ e_x ≤ 2g − 2 + #cusps`. Comparing with a
//! lower bound for the modular degree rules out large conductors. Large `M`
//! is handled in log space with `f64`; the exact genus and cusp count need an
//! integer `M` that can be factored by trial division.

use alloc::vec::Vec;

use crate::arith::{divisors, euler_phi, factorize, legendre, smallest_prime_factors};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const PI: f64 = core::f64::consts::PI;

/// Largest `M` accepted by [`genus_cusps_exact`] through the report
/// functions; trial division up to `10⁶` keeps this instant.
pub const EXACT_LIMIT: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("M = {0} is outside the domain of the bound")]
    Domain(f64),
    #[error("exact genus needs an integer M ≤ {EXACT_LIMIT}; got {0}")]
    NotExact(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// Watkins' degree bound against `2·g_CWZ − 2 + M`.
    Paper,
    /// `deg Φ ≥ 7M/1600` against `min(2g − 2 + ν∞, 24·ν∞)`.
    AbramovichRemark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CuspBound {
    /// `#cusps ≤ M`.
    TrivialM,
    /// `ν∞(M)` counted exactly.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Excluded,
    NotExcluded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub m: f64,
    pub mode: BoundMode,
    /// Degree lower bound actually compared: Watkins in paper mode,
    /// `7M/1600` in remark mode.
    pub lower: f64,
    /// Watkins' bound, reported in both modes.
    pub watkins_lower: f64,
    /// CWZ bound in paper mode, the exact genus in remark mode.
    pub genus_upper: f64,
    /// Exact cusp count when `M` is a small enough integer.
    pub nu_inf: Option<u64>,
    pub cusp_bound_used: CuspBound,
    pub rhs: f64,
    /// `(2g − 2 + ν∞, 24·ν∞)` in remark mode.
    pub rhs_components: Option<(f64, f64)>,
    pub verdict: Verdict,
    ln_lower: f64,
    ln_rhs: f64,
}

impl BoundReport {
    pub fn excluded(&self) -> bool {
        self.verdict == Verdict::Excluded
    }

    /// `ln(lower / rhs)`; positive exactly when excluded.
    pub fn log_margin(&self) -> f64 {
        self.ln_lower - self.ln_rhs
    }
}

fn log_log(m: f64) -> Result<(f64, f64), BoundsError> {
    if !(m > 2.0) || !m.is_finite() {
        return Err(BoundsError::Domain(m));
    }
    let l = libm::log(m);
    Ok((l, libm::log(l)))
}

fn ln_watkins(m: f64) -> Result<f64, BoundsError> {
    let (l, ll) = log_log(m)?;
    if 0.02 + ll <= 0.0 {
        return Err(BoundsError::Domain(m));
    }
    Ok(7.0 / 6.0 * l - libm::log(l) - libm::log(10300.0) - 0.5 * libm::log(0.02 + ll))
}

/// Watkins' lower bound `M^{7/6} / log M · (1/10300) / √(0.02 + log log M)`
/// for the modular degree. Overflows to `inf` beyond `M ≈ 10²⁶⁴`.
pub fn watkins_lower(m: f64) -> Result<f64, BoundsError> {
    ln_watkins(m).map(libm::exp)
}

fn cwz_ratio(ll: f64) -> f64 {
    libm::exp(EULER_GAMMA) / (2.0 * PI * PI) * (ll + 2.0 / ll)
}

/// The genus bound `M·(e^γ/2π²)(log log M + 2/log log M)`.
pub fn cwz_genus_upper(m: f64) -> Result<f64, BoundsError> {
    let (_, ll) = log_log(m)?;
    Ok(m * cwz_ratio(ll))
}

/// Genus and number of cusps of `X₀(M)`.
pub fn genus_cusps_exact(m: u64) -> (u64, u64) {
    assert!(m >= 1, "level must be positive");
    let fac = factorize(m);
    let mut mu: u64 = 1;
    for &(p, e) in &fac {
        mu *= p.pow(e - 1) * (p + 1);
    }
    let nu2: u64 = if m % 4 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| if p == 2 { 1 } else { (1 + legendre(-4, p)) as u64 })
            .product()
    };
    let nu3: u64 = if m % 9 == 0 {
        0
    } else {
        fac.iter()
            .map(|&(p, _)| match p {
                2 => 0,
                3 => 1,
                _ => (1 + legendre(-3, p)) as u64,
            })
            .product()
    };
    let nu_inf: u64 = divisors(m)
        .into_iter()
        .map(|d| euler_phi(num_integer::gcd(d, m / d)))
        .sum();
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * nu_inf as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0, "genus formula not integral at M = {m}");
    ((twelve_g / 12) as u64, nu_inf)
}

fn exact_integer(m: f64) -> Option<u64> {
    (m >= 1.0 && m <= EXACT_LIMIT as f64 && libm::floor(m) == m).then_some(m as u64)
}

/// Compare the degree lower bound with the ramification upper bound at `M`.
pub fn finiteness_check(m: f64, mode: BoundMode) -> Result<BoundReport, BoundsError> {
    let ln_w = ln_watkins(m)?;
    let (l, ll) = log_log(m)?;
    let exact = exact_integer(m);
    match mode {
        BoundMode::Paper => {
            // 2·cwz − 2 + M = M·(2·ratio + 1 − 2/M), kept in log space
            let inner = 2.0 * cwz_ratio(ll) + 1.0 - 2.0 * libm::exp(-l);
            if inner <= 0.0 {
                return Err(BoundsError::Domain(m));
            }
            let ln_rhs = l + libm::log(inner);
            Ok(BoundReport {
                m,
                mode,
                lower: libm::exp(ln_w),
                watkins_lower: libm::exp(ln_w),
                genus_upper: m * cwz_ratio(ll),
                nu_inf: exact.map(|n| genus_cusps_exact(n).1),
                cusp_bound_used: CuspBound::TrivialM,
                rhs: libm::exp(ln_rhs),
                rhs_components: None,
                verdict: if ln_w > ln_rhs { Verdict::Excluded } else { Verdict::NotExcluded },
                ln_lower: ln_w,
                ln_rhs,
            })
        }
        BoundMode::AbramovichRemark => {
            let n = exact.ok_or(BoundsError::NotExact(m))?;
            let (g, nu) = genus_cusps_exact(n);
            let hurwitz = 2.0 * g as f64 - 2.0 + nu as f64;
            let cusp = 24.0 * nu as f64;
            let rhs = hurwitz.min(cusp);
            let lower = 7.0 * m / 1600.0;
            Ok(BoundReport {
                m,
                mode,
                lower,
                watkins_lower: libm::exp(ln_w),
                genus_upper: g as f64,
                nu_inf: Some(nu),
                cusp_bound_used: CuspBound::Exact,
                rhs,
                rhs_components: Some((hurwitz, cusp)),
                verdict: if lower > rhs { Verdict::Excluded } else { Verdict::NotExcluded },
                ln_lower: libm::log(lower),
                ln_rhs: if rhs > 0.0 { libm::log(rhs) } else { f64::NEG_INFINITY },
            })
        }
    }
}

/// `count` integers `round(2^{lo + (hi−lo)·i/count})`, `i = 1..=count`,
/// deduplicated; all lie in `(2^lo, 2^hi]` when the spacing exceeds one.
pub fn log_spaced_integers(lo_exp: f64, hi_exp: f64, count: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=count)
        .map(|i| {
            let e = lo_exp + (hi_exp - lo_exp) * i as f64 / count as f64;
            libm::round(libm::exp2(e)) as u64
        })
        .collect();
    out.dedup();
    out
}

/// Highly composite numbers in `(lo, hi]`: `n` whose divisor count exceeds
/// that of every smaller positive integer.
pub fn highly_composite_in(lo: u64, hi: u64) -> Vec<u64> {
    let spf = smallest_prime_factors(hi as usize);
    let mut tau = alloc::vec![0u32; hi as usize + 1];
    let mut out = Vec::new();
    let mut record = 0;
    for n in 1..=hi as usize {
        tau[n] = if n == 1 {
            1
        } else {
            let p = spf[n] as usize;
            let (mut m, mut e) = (n, 0);
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            tau[m] * (e + 1)
        };
        if tau[n] > record {
            record = tau[n];
            if n as u64 > lo {
                out.push(n as u64);
            }
        }
    }
    out
}

/// The conductors sampled for the remark: log-spaced integers in
/// `(2¹⁹, 2²¹]` together with every highly composite number there.
pub fn remark_sample(count: usize) -> Vec<u64> {
    let mut ms = log_spaced_integers(19.0, 21.0, count);
    ms.extend(highly_composite_in(1 << 19, 1 << 21));
    ms.sort_unstable();
    ms.dedup();
    ms
}

#[cfg(test)]
mod tests {
    use super::*;

    // independent route: ν∞ is multiplicative with local factor Σ φ(p^min(i, e−i))
    fn nu_inf_multiplicative(m: u64) -> u64 {
        factorize(m)
            .iter()
            .map(|&(p, e)| (0..=e).map(|i| euler_phi(p.pow(i.min(e - i)))).sum::<u64>())
            .product()
    }

    #[test]
    fn small_levels() {
        assert_eq!(genus_cusps_exact(1), (0, 1));
        assert_eq!(genus_cusps_exact(11), (1, 2));
        assert_eq!(genus_cusps_exact(20), (1, 6));
        assert_eq!(genus_cusps_exact(37), (2, 2));
        assert_eq!(genus_cusps_exact(76), (8, 6));
        assert_eq!(genus_cusps_exact(100).1, 18);
        assert_eq!(genus_cusps_exact(389).0, 32);
        for m in [12u64, 36, 72, 144, 1000, 2310, 720720] {
            assert_eq!(genus_cusps_exact(m).1, nu_inf_multiplicative(m));
        }
    }

    #[test]
    fn genus_zero_levels() {
        // X₀(N) has genus 0 exactly for these N
        let zero = [1u64, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25];
        for m in 1..=30u64 {
            assert_eq!(genus_cusps_exact(m).0 == 0, zero.contains(&m), "M = {m}");
        }
    }

    #[test]
    fn watkins_values() {
        let w = watkins_lower(76.0).unwrap();
        let expect = 76f64.powf(7.0 / 6.0) / 76f64.ln() / 10300.0 / (0.02 + 76f64.ln().ln()).sqrt();
        assert!((w - expect).abs() < 1e-15 * expect);
        assert!((w - 2.9e-3).abs() < 1e-4);
        // 58.33 − log₁₀(115.13) − log₁₀(10300) − ½·log₁₀(4.766)
        let big = watkins_lower(1e50).unwrap().log10();
        assert!((big - 51.920).abs() < 1e-3, "{big}");
        let mut prev = 0.0;
        for i in 0..200 {
            let m = 10f64 * 1.2f64.powi(i);
            let w = watkins_lower(m).unwrap();
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn domain_errors() {
        assert_eq!(watkins_lower(2.0), Err(BoundsError::Domain(2.0)));
        assert!(cwz_genus_upper(1.0).is_err());
        assert!(finiteness_check(f64::NAN, BoundMode::Paper).is_err());
        assert_eq!(
            finiteness_check(1e20, BoundMode::AbramovichRemark),
            Err(BoundsError::NotExact(1e20))
        );
    }

    #[test]
    fn cwz_dominates_exact_genus() {
        for m in 3..=10_000u64 {
            let g = genus_cusps_exact(m).0 as f64;
            assert!(cwz_genus_upper(m as f64).unwrap() >= g, "M = {m}");
        }
        let ll = 1e6f64.ln().ln();
        let r = cwz_genus_upper(1e6).unwrap() / 1e6;
        let expect = EULER_GAMMA.exp() / (2.0 * PI * PI) * (ll + 2.0 / ll);
        assert!((r - expect).abs() < 1e-14);
    }

    #[test]
    fn cusps_at_most_m() {
        for m in 1..=100_000u64 {
            assert!(genus_cusps_exact(m).1 <= m);
        }
    }

    #[test]
    fn paper_mode_thresholds() {
        let r = finiteness_check(1e50, BoundMode::Paper).unwrap();
        assert!(r.excluded());
        assert_eq!(r.cusp_bound_used, CuspBound::TrivialM);
        assert_eq!(r.nu_inf, None);
        let r = finiteness_check(76.0, BoundMode::Paper).unwrap();
        assert!(!r.excluded());
        assert_eq!(r.nu_inf, Some(6));
        let direct = 2.0 * cwz_genus_upper(76.0).unwrap() - 2.0 + 76.0;
        assert!((r.rhs - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn paper_mode_monotone_on_grid() {
        let verdicts: Vec<bool> = (0..=200)
            .map(|i| finiteness_check(10f64.powf(40.0 + 0.1 * i as f64), BoundMode::Paper).unwrap().excluded())
            .collect();
        let first = verdicts.iter().position(|&v| v).expect("some grid point excluded");
        assert!(verdicts[first..].iter().all(|&v| v));
    }

    #[test]
    fn remark_mode_components() {
        let r = finiteness_check(76.0, BoundMode::AbramovichRemark).unwrap();
        assert_eq!(r.rhs_components, Some((20.0, 144.0)));
        assert_eq!(r.rhs, 20.0);
        assert_eq!(r.genus_upper, 8.0);
        assert!(!r.excluded());
        assert!((r.lower - 7.0 * 76.0 / 1600.0).abs() < 1e-15);
    }

    #[test]
    fn verdict_matches_margin() {
        for m in [3.0, 76.0, 1e10, 1e40, 1e50, 1e100] {
            let r = finiteness_check(m, BoundMode::Paper).unwrap();
            assert_eq!(r.excluded(), r.log_margin() > 0.0);
            assert_eq!(r.excluded(), r.lower > r.rhs);
        }
    }

    #[test]
    fn highly_composite_records() {
        assert_eq!(highly_composite_in(0, 60), [1, 2, 4, 6, 12, 24, 36, 48, 60]);
        assert_eq!(
            highly_composite_in(1 << 19, 1 << 21),
            [554400, 665280, 720720, 1081080, 1441440]
        );
    }

    #[test]
    fn log_spaced_range() {
        let ms = log_spaced_integers(19.0, 21.0, 1000);
        assert_eq!(ms.len(), 1000);
        assert!(ms[0] > 1 << 19);
        assert_eq!(*ms.last().unwrap(), 1 << 21);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(remark_sample(1000).len(), 1005);
    }
}
