//! A system `Σ` read as a representation of the two-vertex quiver with `m` arrows
//! from the input vertex to the state vertex, `p` arrows back and one loop, with
//! dimension vector `α = (1, n)`.
//!
//! Subrepresentations are decided two ways: from the ranks of `c(Σ)` and `o(Σ)`, and by
//! exhaustive enumeration of subspaces of `F_q^n`. The second is an independent check
//! for the first.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::system::LinearSystem;

/// Default cap on `q^n` for subspace enumeration.
pub const DEFAULT_ORACLE_BOUND: u128 = 1 << 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DimensionVector {
    /// Dimension at the input vertex.
    pub a: usize,
    /// Dimension at the state vertex.
    pub l: usize,
}

impl DimensionVector {
    pub fn new(a: usize, l: usize) -> Self {
        DimensionVector { a, l }
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.l)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StabilityWeight {
    pub theta1: i64,
    pub theta2: i64,
}

impl StabilityWeight {
    pub fn new(theta1: i64, theta2: i64) -> Self {
        StabilityWeight { theta1, theta2 }
    }

    /// `θ₊ = (−n, 1)`, stability for which is complete controllability.
    pub fn plus(n: usize) -> Self {
        StabilityWeight { theta1: -(n as i64), theta2: 1 }
    }

    /// `θ₋ = (n, −1)`, stability for which is complete observability.
    pub fn minus(n: usize) -> Self {
        StabilityWeight { theta1: n as i64, theta2: -1 }
    }

    pub fn pair(&self, beta: DimensionVector) -> i64 {
        self.theta1 * beta.a as i64 + self.theta2 * beta.l as i64
    }
}

/// How subrepresentations are found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubrepMode {
    /// Witnesses read off the ranks of `c(Σ)` and `o(Σ)`: the `A`-invariant hull of `im B`
    /// and the unobservable subspace `ker o(Σ)`. Works over any field.
    RankCriterion,
    /// Every subspace of `F_q^n`, one reduced echelon basis each. Prime fields only.
    Oracle { bound: u128 },
}

impl SubrepMode {
    pub fn oracle() -> Self {
        SubrepMode::Oracle { bound: DEFAULT_ORACLE_BOUND }
    }
}

/// Quiver-representation view of a system: arrows `b_i ↦ B_i`, `c_j ↦ C^j`, loop `↦ A`.
#[derive(Clone, Copy, Debug)]
pub struct QuiverRep<'a> {
    system: &'a LinearSystem,
}

impl<'a> From<&'a LinearSystem> for QuiverRep<'a> {
    fn from(system: &'a LinearSystem) -> Self {
        QuiverRep { system }
    }
}

impl<'a> QuiverRep<'a> {
    pub fn new(system: &'a LinearSystem) -> Self {
        QuiverRep { system }
    }

    pub fn system(&self) -> &'a LinearSystem {
        self.system
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        DimensionVector::new(1, self.system.n())
    }

    /// Image of the `i`-th input arrow, the column `B_i`.
    pub fn input_arrow(&self, i: usize) -> Matrix {
        self.system.b().column(i)
    }

    /// Image of the `j`-th output arrow, the row `C^j`.
    pub fn output_arrow(&self, j: usize) -> Matrix {
        self.system.c().select_rows(&[j]).expect("row index in range")
    }

    fn is_proper_nonzero(&self, beta: DimensionVector) -> bool {
        let alpha = self.dimension_vector();
        beta != DimensionVector::new(0, 0) && beta != alpha
    }

    pub fn subrep_dimvectors(&self, mode: SubrepMode) -> Result<BTreeSet<DimensionVector>> {
        match mode {
            SubrepMode::RankCriterion => Ok(self.rank_witnesses()),
            SubrepMode::Oracle { bound } => self.oracle_dimvectors(bound),
        }
    }

    fn rank_witnesses(&self) -> BTreeSet<DimensionVector> {
        let class = self.system.classify();
        let n = self.system.n();
        let mut out = BTreeSet::new();
        if class.rank_c < n {
            out.insert(DimensionVector::new(1, class.rank_c));
        }
        if class.rank_o < n {
            out.insert(DimensionVector::new(0, n - class.rank_o));
        }
        out
    }

    fn oracle_dimvectors(&self, bound: u128) -> Result<BTreeSet<DimensionVector>> {
        let sys = self.system;
        let field = sys.field();
        let q =
            field.order().ok_or_else(|| Error::DimensionMismatch("subspace enumeration needs a prime field".into()))?;
        let n = sys.n();
        let needed = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if needed > bound {
            return Err(Error::OracleTooLarge { needed, bound });
        }
        let mut out = BTreeSet::new();
        for l in 0..=n {
            for_each_subspace(field, n, l, |w| {
                // w is n x l, columns a basis of W.
                let ext_a = w.hstack(&sys.a().mul(w).expect("A is n x n")).expect("n rows");
                if ext_a.rank() != l {
                    return;
                }
                if w.hstack(sys.b()).expect("n rows").rank() == l {
                    let beta = DimensionVector::new(1, l);
                    if self.is_proper_nonzero(beta) {
                        out.insert(beta);
                    }
                }
                if sys.c().mul(w).expect("C is p x n").is_zero() {
                    let beta = DimensionVector::new(0, l);
                    if self.is_proper_nonzero(beta) {
                        out.insert(beta);
                    }
                }
            });
        }
        Ok(out)
    }

    /// No proper nonzero subrepresentation.
    pub fn is_simple(&self) -> bool {
        self.rank_witnesses().is_empty()
    }

    pub fn is_simple_with(&self, mode: SubrepMode) -> Result<bool> {
        Ok(self.subrep_dimvectors(mode)?.is_empty())
    }

    fn check_theta(&self, theta: StabilityWeight) -> Result<()> {
        let t = theta.pair(self.dimension_vector());
        if t != 0 {
            return Err(Error::NonzeroThetaAlpha(t));
        }
        Ok(())
    }

    /// Every proper nonzero subrepresentation has `θ·β > 0`.
    pub fn is_theta_stable(&self, theta: StabilityWeight) -> Result<bool> {
        self.is_theta_stable_with(theta, SubrepMode::RankCriterion)
    }

    pub fn is_theta_stable_with(&self, theta: StabilityWeight, mode: SubrepMode) -> Result<bool> {
        self.check_theta(theta)?;
        Ok(self.subrep_dimvectors(mode)?.iter().all(|&b| theta.pair(b) > 0))
    }

    /// Every proper nonzero subrepresentation has `θ·β ≥ 0`.
    pub fn is_theta_semistable_with(&self, theta: StabilityWeight, mode: SubrepMode) -> Result<bool> {
        self.check_theta(theta)?;
        Ok(self.subrep_dimvectors(mode)?.iter().all(|&b| theta.pair(b) >= 0))
    }
}

/// `1 − χ_Q(α, α)` for `α = (1, n)`, evaluated from the arrow list of the quiver.
pub fn euler_dimension(m: usize, n: usize, p: usize) -> i64 {
    let alpha = [1i64, n as i64];
    // (tail, head) for each arrow: vertex 0 is the input vertex, 1 the state vertex.
    let arrows =
        std::iter::repeat_n((0usize, 1usize), m).chain(std::iter::repeat_n((1, 0), p)).chain(std::iter::once((1, 1)));
    let vertex_term: i64 = alpha.iter().map(|a| a * a).sum();
    let arrow_term: i64 = arrows.map(|(s, t)| alpha[s] * alpha[t]).sum();
    1 - (vertex_term - arrow_term)
}

/// Calls `visit` once per `l`-dimensional subspace of `F_q^n`, passing an `n x l` matrix
/// whose columns are the rows of the subspace's reduced echelon basis.
pub fn for_each_subspace(field: Field, n: usize, l: usize, mut visit: impl FnMut(&Matrix)) {
    let q = field.order().expect("prime field");
    for pivots in combinations(n, l) {
        // Free slots: row i may be nonzero in non-pivot columns right of its pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                let pivots = &pivots;
                (pc + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = (q as u128).pow(free.len() as u32);
        let mut rows = Matrix::zeros(field, l, n);
        for (i, &pc) in pivots.iter().enumerate() {
            rows.set(i, pc, field.one());
        }
        for mut code in 0..total {
            for &(i, c) in &free {
                rows.set(i, c, field.from_u64((code % q as u128) as u64));
                code /= q as u128;
            }
            visit(&rows.transpose());
        }
    }
}

/// All strictly increasing `k`-subsets of `0..n`, lexicographically.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(field: Field, a: i64, b: i64, c: i64) -> LinearSystem {
        LinearSystem::new(
            Matrix::from_i64(field, 1, 1, &[a]).unwrap(),
            Matrix::from_i64(field, 1, 1, &[b]).unwrap(),
            Matrix::from_i64(field, 1, 1, &[c]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn euler_dimension_values() {
        assert_eq!(euler_dimension(1, 1, 1), 2);
        assert_eq!(euler_dimension(2, 3, 1), 9);
        assert_eq!(euler_dimension(3, 0, 2), 0);
    }

    #[test]
    fn theta_pairings_have_fixed_signs() {
        for n in 1..6usize {
            let plus = StabilityWeight::plus(n);
            let minus = StabilityWeight::minus(n);
            for l in 0..n {
                assert_eq!(plus.pair(DimensionVector::new(1, l)), l as i64 - n as i64);
                assert!(minus.pair(DimensionVector::new(1, l)) > 0);
            }
            for l in 1..=n {
                assert_eq!(plus.pair(DimensionVector::new(0, l)), l as i64);
                assert!(minus.pair(DimensionVector::new(0, l)) < 0);
            }
        }
    }

    #[test]
    fn subrep_examples() {
        let f2 = Field::prime(2).unwrap();
        let q = Field::Rationals;
        let s = scalar(q, 2, 1, 3);
        assert!(QuiverRep::new(&s).subrep_dimvectors(SubrepMode::RankCriterion).unwrap().is_empty());

        for field in [q, f2] {
            let s = scalar(field, 1, 0, 1);
            let dv = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::RankCriterion).unwrap();
            assert!(dv.contains(&DimensionVector::new(1, 0)));
            let s = scalar(field, 1, 1, 0);
            let dv = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::RankCriterion).unwrap();
            assert!(dv.contains(&DimensionVector::new(0, 1)));
        }
        let s = scalar(f2, 1, 0, 1);
        let dv = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::oracle()).unwrap();
        assert_eq!(dv.into_iter().collect::<Vec<_>>(), vec![DimensionVector::new(1, 0)]);
    }

    #[test]
    fn simplicity_and_stability_examples() {
        let q = Field::Rationals;
        assert!(QuiverRep::new(&scalar(q, 2, 1, 3)).is_simple());
        assert!(!QuiverRep::new(&scalar(q, 2, 0, 3)).is_simple());
        let s = scalar(q, 2, 1, 0);
        assert!(QuiverRep::new(&s).is_theta_stable(StabilityWeight::plus(1)).unwrap());
        let s = scalar(q, 2, 0, 1);
        assert!(!QuiverRep::new(&s).is_theta_stable(StabilityWeight::plus(1)).unwrap());
    }

    #[test]
    fn theta_must_vanish_on_alpha() {
        let s = scalar(Field::Rationals, 2, 1, 3);
        let r = QuiverRep::new(&s).is_theta_stable(StabilityWeight::new(1, 1));
        assert!(matches!(r, Err(Error::NonzeroThetaAlpha(2))));
    }

    #[test]
    fn zero_weight_boundary() {
        // θ = 0 pairs to zero with everything: always semistable, stable only when simple.
        let f2 = Field::prime(2).unwrap();
        let zero = StabilityWeight::new(0, 0);
        for (b, c, simple) in [(1, 1, true), (0, 1, false), (1, 0, false)] {
            let s = scalar(f2, 1, b, c);
            let v = QuiverRep::new(&s);
            assert!(v.is_theta_semistable_with(zero, SubrepMode::oracle()).unwrap());
            assert_eq!(v.is_theta_stable_with(zero, SubrepMode::oracle()).unwrap(), simple);
        }
    }

    #[test]
    fn oracle_bound_enforced() {
        let f3 = Field::prime(3).unwrap();
        let s = LinearSystem::new(Matrix::zeros(f3, 3, 3), Matrix::zeros(f3, 3, 1), Matrix::zeros(f3, 1, 3)).unwrap();
        let r = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::Oracle { bound: 26 });
        assert!(matches!(r, Err(Error::OracleTooLarge { needed: 27, bound: 26 })));
        let r = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::Oracle { bound: 27 });
        assert!(r.is_ok());
    }

    #[test]
    fn oracle_rejects_rationals() {
        let s = scalar(Field::Rationals, 1, 1, 1);
        assert!(QuiverRep::new(&s).subrep_dimvectors(SubrepMode::oracle()).is_err());
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        // Number of l-dimensional subspaces of F_2^3: 1, 7, 7, 1.
        let f2 = Field::prime(2).unwrap();
        let counts: Vec<usize> = (0..=3)
            .map(|l| {
                let mut k = 0;
                for_each_subspace(f2, 3, l, |_| k += 1);
                k
            })
            .collect();
        assert_eq!(counts, vec![1, 7, 7, 1]);
    }

    #[test]
    fn irreducible_quotient_has_no_intermediate_invariant_subspace() {
        // x² + x + 1 is irreducible over F_2: with B = 0 only W = 0 and W = F_2² are
        // A-invariant, so (1,1) is not a subrepresentation even though rank c = 0 < 1.
        let f2 = Field::prime(2).unwrap();
        let s = LinearSystem::new(
            Matrix::from_i64(f2, 2, 2, &[0, 1, 1, 1]).unwrap(),
            Matrix::zeros(f2, 2, 1),
            Matrix::from_i64(f2, 1, 2, &[1, 0]).unwrap(),
        )
        .unwrap();
        let dv = QuiverRep::new(&s).subrep_dimvectors(SubrepMode::oracle()).unwrap();
        assert_eq!(dv.into_iter().collect::<Vec<_>>(), vec![DimensionVector::new(1, 0)]);
    }
}
