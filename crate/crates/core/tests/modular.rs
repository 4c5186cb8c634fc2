use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use modparam_core::catalog::{ETA_NEWFORMS, LEVEL76};
use modparam_core::modforms::*;
use modparam_core::periods::{build_coeff_table, RationalCubic};
use modparam_core::{BigRational, Complex64, Exponent, FracSeries};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAIL: f64 = 1e-12;
const TOL: f64 = 1e-6;

fn newform(spec: &str, trunc: i64) -> FracSeries {
    let spec: EtaQuotientSpec = spec.parse().unwrap();
    eta_quotient(&spec, Exponent::from_integer(trunc)).coerce_integer_grid().unwrap()
}

fn level76_newform(n_max: u64) -> FracSeries {
    let ratio = |(n, d): (i64, i64)| BigRational::new(n.into(), d.into());
    let c = RationalCubic::new(ratio(LEVEL76.a), ratio(LEVEL76.b)).unwrap();
    build_coeff_table(&c, 76, n_max, &BTreeMap::from([(19, -1)])).unwrap().to_series()
}

/// Every `(k, N, Δ_{N,k})` available from shipped data: the eta newforms
/// and the level-76 form from point counting.
fn all_deltas() -> &'static [DeltaNk] {
    static CELL: OnceLock<Vec<DeltaNk>> = OnceLock::new();
    CELL.get_or_init(|| build_deltas(600))
}

fn build_deltas(f_trunc: i64) -> Vec<DeltaNk> {
    let mut out = Vec::new();
    for nf in ETA_NEWFORMS {
        let f = newform(nf.spec, f_trunc);
        for &(k, n) in nf.uses {
            let t = Exponent::new(2 * f_trunc, k as i64);
            out.push(make_delta(&f, n, k, Exponent::from_integer(t.to_integer())).unwrap());
        }
    }
    let f = level76_newform(f_trunc as u64 - 1);
    out.push(make_delta(&f, 19, 4, Exponent::from_integer(f_trunc / 2)).unwrap());
    out
}

fn unit(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

/// Points where `τ` and `Aτ` have comparable imaginary parts `≈ 1/N`.
fn cusp_zero_samples(n: u64) -> Vec<Complex64> {
    let n = n as f64;
    (0..5)
        .map(|j| Complex64::new((-1.0 + 0.15 * (j as f64 - 2.0)) / n, (1.0 + 0.1 * j as f64) / n))
        .collect()
}

/// Points near `|τ| = 1/√N`, fixed up to scale by `τ ↦ −1/(Nτ)`.
fn fricke_samples(n: u64) -> Vec<Complex64> {
    let s = (n as f64).sqrt();
    (0..5)
        .map(|j| Complex64::new(0.1 * (j as f64 - 2.0), 1.0 + 0.05 * j as f64) / s)
        .collect()
}

fn assert_eigen(r: &SlashReport, expect: Complex64, what: &str) {
    assert!(
        (r.eigenvalue - expect).norm() < TOL,
        "{what}: eigenvalue {} expected {expect}",
        r.eigenvalue
    );
    assert!(r.max_deviation < TOL * r.max_value, "{what}: deviation {:e}", r.max_deviation);
}

#[test]
fn support_invariant_to_order_300() {
    for nf in ETA_NEWFORMS {
        let f = newform(nf.spec, 301);
        let h = nf.uses.iter().map(|&(k, _)| k as i64 / 2).max().unwrap();
        assert_eq!(f.coeff_at(1), Some(BigRational::from_integer(1.into())));
        for n in 0..=300i64 {
            if (n - 1).rem_euclid(h) != 0 {
                assert!(f.coeff_at(n).unwrap().is_zero(), "level {} a({n}) ≠ 0", nf.level);
            }
        }
    }
}

#[test]
fn deltas_are_integral_and_start_at_q() {
    for d in all_deltas() {
        let (e, c) = d.delta().leading_term().unwrap();
        assert_eq!(e, Exponent::from_integer(1), "N = {}, k = {}", d.n(), d.k().k());
        assert_eq!(*c, BigRational::from_integer(1.into()));
        assert_eq!(d.delta().grid(), 1);
    }
}

#[test]
fn delta_5_4_two_routes() {
    // f20(τ/2)² against η(τ)⁴η(5τ)⁴ expanded directly
    let d = make_delta(&newform("2^2 10^2", 200), 5, 4, Exponent::from_integer(100)).unwrap();
    let direct: EtaQuotientSpec = "1^4 5^4".parse().unwrap();
    let direct = eta_quotient(&direct, Exponent::from_integer(100)).coerce_integer_grid().unwrap();
    assert_eq!(d.delta(), &direct);
    for tau in DEFAULT_SAMPLES {
        let lhs = eval_series(d.delta(), tau, TAIL).unwrap().value;
        let f = eval_series(&newform("2^2 10^2", 200), tau / 2.0, TAIL).unwrap().value;
        assert!((lhs - f * f).norm() < 1e-12);
    }
}

#[test]
fn eta_at_i() {
    let eta = eta_quotient(&"1^1".parse().unwrap(), Exponent::from_integer(30));
    let v = eval_series(&eta, Complex64::new(0.0, 1.0), TAIL).unwrap().value;
    // Γ(1/4) / (2π^{3/4})
    let expect = 3.625_609_908_221_908 / (2.0 * PI.powf(0.75));
    assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-15);
}

#[test]
fn rescaled_newform_eigenvalues_under_t_and_a() {
    for d in all_deltas() {
        let k = d.k().k() as f64;
        let what = format!("F for N = {}, k = {k}", d.n());
        let t = slash_check(d.f_rescaled(), 2, &GroupElement::translation(), &DEFAULT_SAMPLES, TAIL).unwrap();
        assert_eigen(&t, unit(4.0 * PI / k), &format!("{what} under T"));
        let a = GroupElement::lower(d.n() as i64);
        let r = slash_check(d.f_rescaled(), 2, &a, &cusp_zero_samples(d.n()), TAIL).unwrap();
        assert_eigen(&r, unit(-4.0 * PI / k), &format!("{what} under A"));
    }
}

#[test]
fn fricke_eigenvalue_is_a_sign() {
    for d in all_deltas() {
        let r = fricke_eigenvalue(&d, &fricke_samples(d.n()), TAIL).unwrap();
        let sign = if r.eigenvalue.re > 0.0 { 1.0 } else { -1.0 };
        assert_eigen(&r, Complex64::new(sign, 0.0), &format!("Fricke, N = {}, k = {}", d.n(), d.k().k()));
    }
}

#[test]
fn delta_invariant_and_square_roots_odd() {
    for d in all_deltas() {
        let k = d.k().k() as i32;
        let a = GroupElement::lower(d.n() as i64);
        let zs = cusp_zero_samples(d.n());
        for (g, samples) in [(GroupElement::translation(), &DEFAULT_SAMPLES[..]), (a, &zs[..])] {
            let r = slash_check(d.delta(), k, &g, samples, TAIL).unwrap();
            assert_eigen(&r, Complex64::new(1.0, 0.0), &format!("Δ for N = {}, k = {k}, g = {g}", d.n()));
            if let (Some(root), 8 | 12) = (d.sqrt_delta(), k) {
                let r = slash_check(&root, k / 2, &g, samples, TAIL).unwrap();
                assert_eigen(&r, Complex64::new(-1.0, 0.0), &format!("√Δ for N = {}, k = {k}, g = {g}", d.n()));
            }
        }
    }
}

/// A random element `(a b; Nc d)` of `Γ₀(N)` with small entries.
fn random_gamma0(rng: &mut ChaCha8Rng, n: i64) -> GroupElement {
    loop {
        let c = n * [-1, 1][rng.gen_range(0..2)];
        let a: i64 = rng.gen_range(-12..=12);
        if num_integer::gcd(a, c) != 1 {
            continue;
        }
        let d = modparam_core::arith::inverse_mod(a, c.abs()).unwrap();
        let d = d + c.abs() * rng.gen_range(-1..=1);
        let b = (a * d - 1) / c;
        if let Ok(g) = GroupElement::from_integers(a, b, c, d) {
            return g;
        }
    }
}

#[test]
fn delta_invariant_under_random_gamma0() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in all_deltas().iter().filter(|d| d.n() <= 5) {
        let k = d.k().k() as i32;
        for _ in 0..5 {
            let g = random_gamma0(&mut rng, d.n() as i64);
            let [_, _, c, dd] = g.to_integers().unwrap();
            // Im τ ≥ 0.8 with cτ + d as small as the constraint allows
            let samples: Vec<_> = (0..3)
                .map(|j| Complex64::new(-dd as f64 / c as f64 + 0.1 * j as f64, 0.8 + 0.1 * j as f64))
                .collect();
            let r = slash_check(d.delta(), k, &g, &samples, TAIL).unwrap();
            assert_eigen(&r, Complex64::new(1.0, 0.0), &format!("Δ for N = {}, k = {k}, g = {g}", d.n()));
        }
    }
}

#[test]
fn a_and_t_normalize_gamma_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n, k) = (5u64, Weight::K4);
    let gk = Subgroup::GammaK { n, k };
    let a = GroupElement::lower(n as i64);
    let t = GroupElement::translation();
    let mut seen = 0;
    while seen < 100 {
        let g = random_gamma0(&mut rng, 2 * n as i64);
        if !group_membership(&g, gk).unwrap() {
            continue;
        }
        seen += 1;
        assert!(group_membership(&(a.inverse() * g * a), gk).unwrap(), "A⁻¹γA for γ = {g}");
        assert!(group_membership(&(t.inverse() * g * t), gk).unwrap(), "T⁻¹γT for γ = {g}");
    }
}

#[test]
fn operator_matches_finite_differences() {
    let d = make_delta(&newform("2^2 10^2", 200), 5, 4, Exponent::from_integer(100)).unwrap();
    let e4 = eisenstein_e(4, 1, Exponent::from_integer(100)).unwrap();
    let exact = ramanujan_serre(&e4, &d);
    let h = 1e-5;
    let ev = |s: &FracSeries, z: Complex64| eval_series(s, z, TAIL).unwrap().value;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    for tau in DEFAULT_SAMPLES {
        let dh = Complex64::new(h, 0.0);
        let df = (ev(&e4, tau + dh) - ev(&e4, tau - dh)) / (2.0 * h);
        let dd = (ev(d.delta(), tau + dh) - ev(d.delta(), tau - dh)) / (2.0 * h);
        // (k/8πi)f′ − (1/2πi) f Δ′/Δ with k = 4
        let fd = df * 4.0 / (4.0 * two_pi_i) - ev(&e4, tau) * dd / ev(d.delta(), tau) / two_pi_i;
        let v = ev(&exact, tau);
        assert!((v - fd).norm() < 1e-5 * v.norm().max(1.0), "τ = {tau}: {v} vs {fd}");
    }
}
