//! Coefficient tables from point counting, counted in parallel, and the
//! choice of unknown bad-prime signs by the period lattice they produce.

use std::collections::BTreeMap;

use modparam_core::arith::{factorize, primes_up_to};
use modparam_core::periods::{
    lattice_from_periods, lattice_invariants, level_group_elements, local_coefficient, period_of,
    CoeffSource, CoeffTable, PeriodLattice, PeriodsError, RationalCubic,
};
use modparam_core::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

/// Lower-left multipliers and `|a|` bound for the sampled group elements.
pub const PERIOD_CS: [i64; 2] = [1, 2];
pub const PERIOD_MAX_A: i64 = 40;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error(transparent)]
    Periods(#[from] PeriodsError),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("no sign choice at {primes:?} gives a lattice with the curve's invariants")]
    NoMatch { primes: Vec<u64> },
    #[error("several sign choices at {primes:?} match the curve's invariants")]
    Ambiguous { primes: Vec<u64> },
}

fn in_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, TableError> {
    match jobs {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| TableError::Pool(e.to_string())),
    }
}

/// [`modparam_core::periods::build_coeff_table`] with the primes counted
/// concurrently on `jobs` threads (rayon's default when `None`). The result
/// does not depend on the thread count.
pub fn count_table(
    c: &RationalCubic,
    level: u64,
    n_max: u64,
    bad_values: &BTreeMap<u64, i64>,
    jobs: Option<usize>,
) -> Result<CoeffTable, TableError> {
    let models = c.integral_models();
    let primes = primes_up_to(n_max);
    let values: Vec<Result<i64, PeriodsError>> = in_pool(jobs, || {
        primes
            .par_iter()
            .map(|&p| local_coefficient(&models, level, p, bad_values))
            .collect()
    })?;
    let mut map = BTreeMap::new();
    for (&p, v) in primes.iter().zip(values) {
        map.insert(p, v?);
    }
    let source = CoeffSource::PointCount {
        a: c.a().clone(),
        b: c.b().clone(),
    };
    Ok(CoeffTable::from_prime_values(level, n_max, &map, source)?)
}

/// Primes dividing `level` exactly once: their `a_p = ±1` is not determined
/// by point counting.
pub fn sign_primes(level: u64) -> Vec<u64> {
    factorize(level).into_iter().filter(|&(_, e)| e == 1).map(|(p, _)| p).collect()
}

/// Periods of `f(2τ/k)` over the sampled group elements.
pub fn sample_periods(t: &CoeffTable, k: u32, tol: f64) -> Result<Vec<Complex64>, PeriodsError> {
    level_group_elements(t.level(), k, &PERIOD_CS, PERIOD_MAX_A)
        .iter()
        .map(|g| period_of(g, t, k, tol * 1e-3))
        .collect()
}

/// One sign assignment and what the lattice pipeline made of it.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub signs: BTreeMap<u64, i64>,
    pub outcome: Result<(PeriodLattice, Complex64, Complex64), String>,
    /// `max(|Δg₂|/|g₂|, |Δg₃|/|g₃|)` against the curve's `−4A, −4B`.
    pub invariant_error: Option<f64>,
}

impl Candidate {
    pub fn matches(&self, tol: f64) -> bool {
        self.invariant_error.is_some_and(|e| e <= tol)
    }
}

#[derive(Debug, Clone)]
pub struct Resolved {
    pub table: CoeffTable,
    pub bad_values: BTreeMap<u64, i64>,
    pub lattice: PeriodLattice,
    pub g2: Complex64,
    pub g3: Complex64,
    pub periods: usize,
    pub candidates: Vec<Candidate>,
}

fn relative(a: Complex64, b: f64) -> f64 {
    (a - b).norm() / b.abs().max(1.0)
}

/// Runs the lattice pipeline for every sign choice at the primes in
/// `sign_primes(level)` not fixed by `given`, and keeps the single choice
/// whose lattice invariants equal the curve's `(−4A, −4B)` within
/// `match_tol` (relative).
pub fn resolve_by_lattice(
    c: &RationalCubic,
    level: u64,
    k: u32,
    n_max: u64,
    given: &BTreeMap<u64, i64>,
    tol: f64,
    match_tol: f64,
    jobs: Option<usize>,
) -> Result<Resolved, TableError> {
    let open: Vec<u64> = sign_primes(level).into_iter().filter(|p| !given.contains_key(p)).collect();
    let (g2c, g3c) = c.g2_g3();
    let (g2c, g3c) = (g2c.to_f64().unwrap_or(f64::NAN), g3c.to_f64().unwrap_or(f64::NAN));
    let mut candidates = Vec::new();
    let mut winners = Vec::new();
    for mask in 0..1u32 << open.len() {
        let mut signs = given.clone();
        for (i, &p) in open.iter().enumerate() {
            signs.insert(p, if mask >> i & 1 == 0 { -1 } else { 1 });
        }
        let table = count_table(c, level, n_max, &signs, jobs)?;
        let attempt = sample_periods(&table, k, tol).and_then(|ps| {
            let l = lattice_from_periods(&ps, tol)?;
            let (g2, g3) = lattice_invariants(&l);
            Ok((l, g2, g3, ps.len()))
        });
        let cand = match attempt {
            Ok((l, g2, g3, count)) => {
                let err = relative(g2, g2c).max(relative(g3, g3c));
                let cand = Candidate {
                    signs: signs.clone(),
                    outcome: Ok((l.clone(), g2, g3)),
                    invariant_error: Some(err),
                };
                if cand.matches(match_tol) {
                    winners.push(Resolved {
                        table,
                        bad_values: signs,
                        lattice: l,
                        g2,
                        g3,
                        periods: count,
                        candidates: Vec::new(),
                    });
                }
                cand
            }
            Err(e) => Candidate {
                signs,
                outcome: Err(e.to_string()),
                invariant_error: None,
            },
        };
        candidates.push(cand);
    }
    match winners.len() {
        1 => {
            let mut r = winners.pop().expect("one winner");
            r.candidates = candidates;
            Ok(r)
        }
        0 => Err(TableError::NoMatch { primes: open }),
        _ => Err(TableError::Ambiguous { primes: open }),
    }
}
