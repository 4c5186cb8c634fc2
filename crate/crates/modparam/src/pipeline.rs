//! Building blocks shared by the subcommands and the self-check: newforms
//! from their sources, `Δ_{N,k}` at a requested precision, and the solution
//! `Q` from its sources.

use std::collections::BTreeMap;

use modparam_core::arith::parse_rational;
use modparam_core::catalog::{ShapeData, ShippedCurve, LEVEL76};
use modparam_core::modforms::{eisenstein_e, eta_quotient, make_delta, DeltaNk, EtaQuotientSpec, Weight};
use modparam_core::ode::WeierstrassShape;
use modparam_core::periods::RationalCubic;
use modparam_core::{BigRational, Exponent, FracSeries};

use crate::tables::{count_table, resolve_by_lattice, sign_primes};

/// Inputs that cannot be used as given; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct InputError(pub String);

pub fn bad(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

pub fn ratio((n, d): (i64, i64)) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn shape_k4(data: ShapeData) -> WeierstrassShape {
    let [a2, a4, a6] = data.map(ratio);
    WeierstrassShape::k4(a2, a4, a6)
}

pub fn shipped_cubic(c: &ShippedCurve) -> RationalCubic {
    RationalCubic::new(ratio(c.a), ratio(c.b)).expect("shipped curve is smooth")
}

pub fn level76_curve() -> RationalCubic {
    shipped_cubic(&LEVEL76)
}

/// An exact rational `n` or `n/d`; decimals are refused.
pub fn exact_rational(s: &str) -> Result<BigRational, InputError> {
    parse_rational(s.trim()).ok_or_else(|| bad(format!("expected an exact rational n or n/d, got {s:?}")))
}

/// `"A=-64/3,B=-1028/27"` (either separator `,` or `;`).
pub fn parse_curve(s: &str) -> Result<RationalCubic, InputError> {
    let (mut a, mut b) = (None, None);
    for item in s.split([',', ';']).map(str::trim).filter(|t| !t.is_empty()) {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| bad(format!("curve: expected A=…,B=…, got {item:?}")))?;
        match key.trim() {
            "A" | "a" => a = Some(exact_rational(val)?),
            "B" | "b" => b = Some(exact_rational(val)?),
            other => return Err(bad(format!("curve: unknown coefficient {other:?}"))),
        }
    }
    let (Some(a), Some(b)) = (a, b) else {
        return Err(bad("curve needs both A and B"));
    };
    RationalCubic::new(a, b).map_err(|e| bad(e.to_string()))
}

/// `"19=-1"` or `"19:-1"`.
pub fn parse_bad_value(s: &str) -> Result<(u64, i64), InputError> {
    let (p, v) = s
        .split_once(['=', ':'])
        .ok_or_else(|| bad(format!("expected p=±1, got {s:?}")))?;
    let p: u64 = p.trim().parse().map_err(|_| bad(format!("bad prime in {s:?}")))?;
    let v: i64 = v.trim().parse().map_err(|_| bad(format!("bad value in {s:?}")))?;
    Ok((p, v))
}

/// `N = level / (k²/4)`.
pub fn n_for(level: u64, k: Weight) -> Result<u64, InputError> {
    let s = (k.half() * k.half()) as u64;
    if level % s != 0 {
        return Err(bad(format!("level {level} is not divisible by k²/4 = {s} for k = {k}")));
    }
    Ok(level / s)
}

/// Terms of `f` needed for `Δ = f(2τ/k)^{k/2}` known below `q^trunc`.
pub fn newform_terms(k: Weight, delta_trunc: i64) -> i64 {
    k.half() as i64 * delta_trunc + 1
}

/// A weight-2 newform expanded from its eta quotient.
pub fn eta_newform(spec: &EtaQuotientSpec, terms: i64) -> Result<FracSeries, InputError> {
    if spec.weight() != Exponent::from_integer(2) {
        return Err(bad(format!("{spec} has weight {}, not 2", spec.weight())));
    }
    eta_quotient(spec, Exponent::from_integer(terms))
        .coerce_integer_grid()
        .map_err(|e| bad(format!("{spec} is not a q-expansion in integer powers: {e}")))
}

pub fn delta_from_newform(f: &FracSeries, level: u64, k: Weight, delta_trunc: i64) -> Result<DeltaNk, InputError> {
    let n = n_for(level, k)?;
    make_delta(f, n, k.k(), Exponent::from_integer(delta_trunc)).map_err(|e| bad(e.to_string()))
}

/// `αE₄(τ) + βE₄(Nτ)` known below `q^{through+1}`.
pub fn eisenstein_q(n: u64, alpha: &BigRational, beta: &BigRational, through: i64) -> FracSeries {
    let t = Exponent::from_integer(through + 1);
    let e1 = eisenstein_e(4, 1, t).expect("weight 4");
    let en = eisenstein_e(4, n, t).expect("weight 4");
    e1.scale(alpha).add(&en.scale(beta))
}

/// The newform table of a curve, with bad-prime signs either given or
/// chosen by the lattice. Returns the table and a note on how the signs
/// were settled.
pub fn curve_table(
    c: &RationalCubic,
    level: u64,
    k: Weight,
    n_max: u64,
    given: &BTreeMap<u64, i64>,
    jobs: Option<usize>,
) -> Result<(modparam_core::periods::CoeffTable, Option<String>), InputError> {
    let open: Vec<u64> = sign_primes(level).into_iter().filter(|p| !given.contains_key(p)).collect();
    if open.is_empty() {
        let t = count_table(c, level, n_max, given, jobs).map_err(|e| bad(e.to_string()))?;
        return Ok((t, None));
    }
    let r = resolve_by_lattice(c, level, k.k(), n_max.max(5000), given, 1e-9, 1e-6, jobs)
        .map_err(|e| bad(e.to_string()))?;
    let note = sign_note(&open, &r.bad_values);
    let t = if r.table.n_max() == n_max {
        r.table
    } else {
        count_table(c, level, n_max, &r.bad_values, jobs).map_err(|e| bad(e.to_string()))?
    };
    Ok((t, Some(note)))
}

pub fn sign_note(open: &[u64], chosen: &BTreeMap<u64, i64>) -> String {
    let parts: Vec<String> = open.iter().map(|p| format!("a_{p} = {}", chosen[p])).collect();
    format!(
        "{} not fixed by point counting; chosen as the only sign whose period lattice has g2 = -4A, g3 = -4B",
        parts.join(", ")
    )
}
