//! Closed-form `F_q` point counts of the moduli of controllable and observable systems,
//! Gaussian binomials, the generating-function identity, and the exhaustive census that
//! checks the closed forms.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::kalman::canonical_form;
use crate::matrix::Matrix;
use crate::system::LinearSystem;

/// Default cap on the number of `(A, B)` pairs a census may enumerate.
pub const DEFAULT_CENSUS_BOUND: u128 = 1 << 24;

/// Environment override for the census bound.
pub const CENSUS_BOUND_ENV: &str = "MODULI_SYS_CENSUS_BOUND";

/// Census bound from [`CENSUS_BOUND_ENV`], falling back to [`DEFAULT_CENSUS_BOUND`].
pub fn census_bound_from_env() -> Result<u128> {
    match std::env::var(CENSUS_BOUND_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Parse(format!("{CENSUS_BOUND_ENV}={v:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_CENSUS_BOUND),
    }
}

fn big(q: u64) -> BigUint {
    BigUint::from(q)
}

fn qpow(q: u64, e: usize) -> BigUint {
    num_traits::pow(big(q), e)
}

/// `|GL_n(F_q)| = ∏_{i=0}^{n−1} (q^n − q^i)`.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qn = qpow(q, n);
    (0..n).map(|i| &qn - qpow(q, i)).product()
}

/// Gaussian binomial `[a choose b]_q`, the number of `b`-dimensional subspaces of `F_q^a`.
/// Zero when `b > a`.
pub fn q_binomial(a: usize, b: usize, q: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 1..=b {
        num *= qpow(q, a - b + i) - 1u32;
        den *= qpow(q, i) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

// q^{n(e+1)} ∏_{i=1}^n (q^{d+i−1} − 1)/(q^i − 1), evaluated as one exact quotient.
fn moduli_count(d: usize, n: usize, e: usize, q: u64) -> BigUint {
    let mut num = qpow(q, n * (e + 1));
    let mut den = BigUint::one();
    for i in 1..=n {
        num *= qpow(q, d + i - 1) - 1u32;
        den *= qpow(q, i) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "point count is not an integer");
    quot
}

/// `#sys^{cc}_{m,n,p}(F_q) = q^{n(p+1)} ∏_{i=1}^n (q^{m+i−1} − 1)/(q^i − 1)`.
pub fn count_cc_formula(m: usize, n: usize, p: usize, q: u64) -> BigUint {
    moduli_count(m, n, p, q)
}

/// `#sys^{co}_{m,n,p}(F_q) = q^{n(m+1)} ∏_{i=1}^n (q^{p+i−1} − 1)/(q^i − 1)`.
pub fn count_co_formula(m: usize, n: usize, p: usize, q: u64) -> BigUint {
    moduli_count(p, n, m, q)
}

/// One row of a census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: u64,
    /// Number of triples `(A, B, C)` in the locus.
    #[serde(serialize_with = "decimal")]
    pub raw: BigUint,
    #[serde(serialize_with = "decimal")]
    pub gl_order: BigUint,
    #[serde(serialize_with = "decimal")]
    pub orbits: BigUint,
    #[serde(serialize_with = "decimal")]
    pub formula: BigUint,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl CensusReport {
    pub const CSV_HEADER: &'static str = "m,n,p,q,raw,gl_order,orbits,formula,match";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.m, self.n, self.p, self.q, self.raw, self.gl_order, self.orbits, self.formula, self.matches
        )
    }
}

/// Which locus a census counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locus {
    Controllable,
    Observable,
}

/// Enumeration settings for a census.
#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    pub bound: u128,
    pub parallel: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { bound: DEFAULT_CENSUS_BOUND, parallel: true }
    }
}

/// Matrix whose entries are the base-`q` digits of `code`, row-major.
fn matrix_from_code(field: Field, rows: usize, cols: usize, mut code: u128) -> Matrix {
    let q = field.order().expect("prime field") as u128;
    let mut m = Matrix::zeros(field, rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, field.from_u64((code % q) as u64));
            code /= q;
        }
    }
    m
}

fn state_count(q: u64, n: usize, width: usize) -> u128 {
    (q as u128).checked_pow((n * (n + width)) as u32).unwrap_or(u128::MAX)
}

/// Counts pairs `(A, X)` with `A` in `M_n(F_q)` and `X` in `M_{n x width}(F_q)` such that
/// `[X AX … A^{n−1}X]` has rank `n`.
fn count_full_rank_pairs(field: Field, n: usize, width: usize, parallel: bool) -> u128 {
    let q = field.order().expect("prime field") as u128;
    let a_space = q.pow((n * n) as u32);
    let x_space = q.pow((n * width) as u32);
    let count_for_a = |a_code: u128| -> u128 {
        let a = matrix_from_code(field, n, n, a_code);
        let mut hits = 0u128;
        for x_code in 0..x_space {
            let x = matrix_from_code(field, n, width, x_code);
            let sys = LinearSystem::new(a.clone(), x, Matrix::zeros(field, 0, n)).expect("shapes agree");
            if sys.controllability_matrix().rank() == n {
                hits += 1;
            }
        }
        hits
    };
    if parallel {
        (0..a_space).into_par_iter().map(count_for_a).sum()
    } else {
        (0..a_space).map(count_for_a).sum()
    }
}

/// Census of the controllable (or observable) locus of `V_{m,n,p}(F_q)`.
///
/// For the controllable locus every `(A, B)` is enumerated and kept when `rank c(Σ) = n`;
/// `C` is free, contributing `q^{pn}`. The observable locus is counted on the dual side:
/// `(Aᵀ, Cᵀ)` ranges over pairs with `rank o(Σ) = n`, `B` free. Stabilizers are trivial on
/// both loci, so the orbit count is `raw / |GL_n(F_q)|`, which must divide exactly.
pub fn census(locus: Locus, m: usize, n: usize, p: usize, q: u64, opts: CensusOptions) -> Result<CensusReport> {
    let field = Field::prime(q)?;
    let (width, free) = match locus {
        Locus::Controllable => (m, p),
        Locus::Observable => (p, m),
    };
    let needed = state_count(q, n, width);
    if needed > opts.bound {
        return Err(Error::CensusTooLarge { needed, bound: opts.bound });
    }
    let pairs = count_full_rank_pairs(field, n, width, opts.parallel);
    let raw = BigUint::from(pairs) * qpow(q, free * n);
    let gl = gl_order(n, q);
    let (orbits, rem) = raw.div_rem(&gl);
    if !rem.is_zero() {
        return Err(Error::InconsistentData(format!("raw count {raw} is not divisible by |GL_{n}(F_{q})| = {gl}")));
    }
    let formula = match locus {
        Locus::Controllable => count_cc_formula(m, n, p, q),
        Locus::Observable => count_co_formula(m, n, p, q),
    };
    let matches = orbits == formula;
    Ok(CensusReport { m, n, p, q, raw, gl_order: gl, orbits, formula, matches })
}

/// Census of completely controllable systems.
pub fn census_cc(m: usize, n: usize, p: usize, q: u64, opts: CensusOptions) -> Result<CensusReport> {
    census(Locus::Controllable, m, n, p, q, opts)
}

/// Census of completely observable systems.
pub fn census_co(m: usize, n: usize, p: usize, q: u64, opts: CensusOptions) -> Result<CensusReport> {
    census(Locus::Observable, m, n, p, q, opts)
}

/// Orbit count of controllable triples obtained by collecting distinct Kalman canonical
/// forms over all `(A, B, C)`. Independent of the trivial-stabilizer division argument.
pub fn count_cc_orbits_by_canonical_forms(m: usize, n: usize, p: usize, q: u64, bound: u128) -> Result<u128> {
    let field = Field::prime(q)?;
    let space = (q as u128).checked_pow((n * (n + m + p)) as u32).unwrap_or(u128::MAX);
    if space > bound {
        return Err(Error::CensusTooLarge { needed: space, bound });
    }
    let (sa, sb) = ((q as u128).pow((n * n) as u32), (q as u128).pow((n * m) as u32));
    let sc = (q as u128).pow((p * n) as u32);
    let mut seen = HashSet::new();
    for ac in 0..sa {
        let a = matrix_from_code(field, n, n, ac);
        for bc in 0..sb {
            let b = matrix_from_code(field, n, m, bc);
            let pair = LinearSystem::new(a.clone(), b.clone(), Matrix::zeros(field, 0, n))?;
            if !pair.is_cc() {
                continue;
            }
            for cc in 0..sc {
                let c = matrix_from_code(field, p, n, cc);
                let sys = LinearSystem::new(a.clone(), b.clone(), c)?;
                seen.insert(canonical_form(&sys)?.system);
            }
        }
    }
    Ok(seen.len() as u128)
}

/// Checks `Σ_n #sys^{cc}_{m,n,p}(F_q) tⁿ = ∏_{i=1}^m 1/(1 − q^{p+i} t)` through `t^N`.
///
/// The right side is expanded exactly as a product of truncated geometric series with
/// rational coefficients.
pub fn series_identity_check(m: usize, p: usize, q: u64, degree: usize) -> bool {
    let lhs: Vec<BigRational> =
        (0..=degree).map(|n| BigRational::from_integer(count_cc_formula(m, n, p, q).into())).collect();
    let mut rhs = vec![BigRational::zero(); degree + 1];
    rhs[0] = BigRational::one();
    for i in 1..=m {
        let ratio = BigRational::from_integer(qpow(q, p + i).into());
        let geometric: Vec<BigRational> = (0..=degree).map(|k| num_traits::pow(ratio.clone(), k)).collect();
        let mut next = vec![BigRational::zero(); degree + 1];
        for (a, x) in rhs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in geometric.iter().enumerate().take(degree + 1 - a) {
                next[a + b] += x * y;
            }
        }
        rhs = next;
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn gl_order_values() {
        assert_eq!(gl_order(0, 7), u(1));
        assert_eq!(gl_order(1, 2), u(1));
        assert_eq!(gl_order(2, 2), u(6));
        assert_eq!(gl_order(2, 3), u(48));
    }

    #[test]
    fn q_binomial_values() {
        assert_eq!(q_binomial(2, 1, 2), u(3));
        assert_eq!(q_binomial(5, 0, 3), u(1));
        assert_eq!(q_binomial(4, 2, 2), u(35));
        assert_eq!(q_binomial(1, 2, 2), u(0));
    }

    #[test]
    fn formula_values() {
        assert_eq!(count_cc_formula(1, 1, 1, 2), u(4));
        assert_eq!(count_cc_formula(2, 1, 0, 2), u(6));
        assert_eq!(count_cc_formula(1, 0, 1, 5), u(1));
        assert_eq!(count_co_formula(0, 1, 2, 3), u(12));
        assert_eq!(count_co_formula(1, 1, 1, 2), u(4));
        // No controllable systems without inputs once n >= 1.
        assert_eq!(count_cc_formula(0, 2, 1, 3), u(0));
    }

    #[test]
    fn census_examples() {
        let opts = CensusOptions::default();
        let r = census_cc(1, 1, 1, 2, opts).unwrap();
        assert_eq!((r.raw.clone(), r.orbits.clone()), (u(4), u(4)));
        assert!(r.matches);
        let r = census_cc(2, 1, 0, 2, opts).unwrap();
        assert_eq!(r.orbits, u(6));
        assert!(r.matches);
        let r = census_cc(1, 2, 0, 2, opts).unwrap();
        assert_eq!(r.orbits, u(4));
        assert!(r.matches);
    }

    #[test]
    fn census_bound_enforced() {
        let opts = CensusOptions { bound: 100, parallel: false };
        assert!(matches!(census_cc(2, 2, 0, 2, opts), Err(Error::CensusTooLarge { needed: 256, .. })));
    }

    #[test]
    fn census_rejects_composite_q() {
        assert!(matches!(census_cc(1, 1, 1, 4, CensusOptions::default()), Err(Error::NotPrime(4))));
    }

    #[test]
    fn csv_row_format() {
        let r = census_cc(1, 1, 1, 2, CensusOptions::default()).unwrap();
        assert_eq!(r.csv_row(), "1,1,1,2,4,1,4,4,true");
    }

    #[test]
    fn series_examples() {
        assert!(series_identity_check(1, 0, 2, 5));
        assert!(series_identity_check(2, 1, 3, 6));
        assert!(series_identity_check(3, 2, 5, 0));
    }
}
