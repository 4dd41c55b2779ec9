//! Block-Hankel matrices of Markov sequences and minimal realization by Hankel
//! rank factorization.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::system::LinearSystem;

/// Finite prefix `F₁, …, F_L` of a sequence of `p x m` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovSequence {
    field: Field,
    m: usize,
    p: usize,
    blocks: Vec<Matrix>,
}

impl MarkovSequence {
    pub fn new(field: Field, m: usize, p: usize, blocks: Vec<Matrix>) -> Result<Self> {
        for b in &blocks {
            if b.field() != field {
                return Err(Error::FieldMismatch);
            }
            if b.shape() != (p, m) {
                return Err(Error::DimensionMismatch(format!(
                    "Markov block is {}x{}, expected {p}x{m}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(MarkovSequence { field, m, p, blocks })
    }

    /// Scalar (`1 x 1`) sequence from integers.
    pub fn scalar(field: Field, values: &[i64]) -> Self {
        let blocks = values.iter().map(|&v| Matrix::from_i64(field, 1, 1, &[v]).expect("1x1")).collect();
        MarkovSequence { field, m: 1, p: 1, blocks }
    }

    pub fn from_system(sys: &LinearSystem, count: usize) -> Self {
        MarkovSequence { field: sys.field(), m: sys.m(), p: sys.p(), blocks: sys.markov_parameters(count) }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// `F_j`, 1-based.
    pub fn block(&self, j: usize) -> &Matrix {
        &self.blocks[j - 1]
    }

    fn block_hankel(&self, rows: usize, cols: usize, shift: usize) -> Result<Matrix> {
        let needed = rows + cols + shift - 1;
        if rows == 0 || cols == 0 || needed > self.len() {
            return Err(Error::InsufficientData { needed, available: self.len() });
        }
        let mut out = Matrix::zeros(self.field, 0, self.m * cols);
        for a in 0..rows {
            let mut band = Matrix::zeros(self.field, self.p, 0);
            for b in 0..cols {
                band = band.hstack(&self.blocks[a + b + shift])?;
            }
            out = out.vstack(&band)?;
        }
        Ok(out)
    }

    /// `H_{ij}(F)`: block `(a, b)` is `F_{a+b−1}` (1-based).
    pub fn hankel(&self, i: usize, j: usize) -> Result<Matrix> {
        self.block_hankel(i, j, 0)
    }

    /// Shifted Hankel matrix with block `(a, b)` equal to `F_{a+b}`.
    pub fn shifted_hankel(&self, i: usize, j: usize) -> Result<Matrix> {
        self.block_hankel(i, j, 1)
    }
}

/// Where the Hankel ranks stabilize within the available data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HankelRankProfile {
    pub r: usize,
    pub s: usize,
    /// `rk H_{rs}`, the state dimension of a minimal realization.
    pub n: usize,
    /// `rank_table[i−1][j−1] = rk H_{ij}` for every `(i, j)` the data supports with `i ≤ r+1`.
    pub rank_table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realizability {
    Stabilized(HankelRankProfile),
    NotStabilized,
}

/// Stabilized pairs `(r, s)` ordered by `r + s`, then `r`: `rk H_{rs} = rk H_{r+1,s+j}` for
/// every `j ≥ 1` the data window supports, and at least one such `j`.
fn stabilized_pairs(seq: &MarkovSequence) -> Result<Vec<(usize, usize, usize)>> {
    let len = seq.len();
    let mut out = Vec::new();
    for total in 2..len {
        for r in 1..total {
            let s = total - r;
            let base = seq.hankel(r, s)?.rank();
            let stable = (1..=len - total).all(|j| seq.hankel(r + 1, s + j).map(|h| h.rank() == base).unwrap_or(false));
            if stable {
                out.push((r, s, base));
            }
        }
    }
    Ok(out)
}

/// Smallest `(r, s)` at which the Hankel rank is certified stable by the data.
pub fn realizability_order(seq: &MarkovSequence) -> Result<Realizability> {
    if seq.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, available: seq.len() });
    }
    let Some(&(r, s, n)) = stabilized_pairs(seq)?.first() else {
        return Ok(Realizability::NotStabilized);
    };
    let len = seq.len();
    let rank_table = (1..=r + 1)
        .map(|i| (1..=len + 1 - i).map(|j| seq.hankel(i, j).map(|h| h.rank())).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Realizability::Stabilized(HankelRankProfile { r, s, n, rank_table }))
}

/// Realization from the rank factorization `H_{rs} = O·R` at a given `(r, s)`.
///
/// `R` is the nonzero part of the reduced echelon form of `H_{rs}` and `O` its pivot
/// columns. `A` solves `O·A·R = H↑_{rs}`, `B` is the first `m` columns of `R` and `C` the
/// first `p` rows of `O`.
pub fn realize_at(seq: &MarkovSequence, r: usize, s: usize) -> Result<LinearSystem> {
    let (m, p) = (seq.m(), seq.p());
    let h = seq.hankel(r, s)?;
    let shifted = seq.shifted_hankel(r, s)?;
    let (rref, pivots) = h.rref_with_pivots();
    let n = pivots.len();
    if n == 0 {
        return Ok(LinearSystem::empty(seq.field(), m, p));
    }
    let obs = h.select_cols(&pivots)?;
    let reach = rref.select_rows(&(0..n).collect::<Vec<_>>())?;

    // O has full column rank: an invertible n x n block of rows gives a left inverse.
    let (_, obs_rows) = obs.transpose().rref_with_pivots();
    let obs_block_inv = obs.select_rows(&obs_rows)?.inverse().expect("pivot rows are independent");
    // R restricted to its pivot columns is the identity.
    let a = obs_block_inv.mul(&shifted.select(&obs_rows, &pivots)?)?;

    let check = obs.mul(&a)?.mul(&reach)?;
    if check != shifted {
        return Err(Error::InconsistentData(format!("shifted Hankel H↑({r},{s}) is not O·A·R for any A")));
    }
    let b = reach.select_cols(&(0..m).collect::<Vec<_>>())?;
    let c = obs.select_rows(&(0..p).collect::<Vec<_>>())?;
    LinearSystem::new(a, b, c)
}

/// A canonical system whose Markov parameters reproduce all of `seq`.
pub fn realize(seq: &MarkovSequence) -> Result<LinearSystem> {
    let Realizability::Stabilized(profile) = realizability_order(seq)? else {
        return Err(Error::NotStabilized);
    };
    let needed = profile.r + profile.s;
    if needed > seq.len() {
        return Err(Error::InsufficientData { needed, available: seq.len() });
    }
    let sys = realize_at(seq, profile.r, profile.s)?;
    if !verify_realization(&sys, seq)? {
        return Err(Error::InconsistentData(format!(
            "realization at (r,s) = ({},{}) does not reproduce all {} blocks",
            profile.r,
            profile.s,
            seq.len()
        )));
    }
    Ok(sys)
}

/// Whether `CA^{j−1}B = F_j` for every supplied block.
pub fn verify_realization(sys: &LinearSystem, seq: &MarkovSequence) -> Result<bool> {
    if sys.field() != seq.field() {
        return Err(Error::FieldMismatch);
    }
    if (sys.m(), sys.p()) != (seq.m(), seq.p()) {
        return Err(Error::DimensionMismatch(format!(
            "system has (m,p) = ({},{}), sequence has ({},{})",
            sys.m(),
            sys.p(),
            seq.m(),
            seq.p()
        )));
    }
    Ok(sys.markov_parameters(seq.len()) == seq.blocks)
}
