//! Points of finite Grassmannians as reduced echelon representatives, Schubert cells,
//! the cell map `ψ` of controllable systems into `Gras_n(m+n−1)`, and the embedding
//! `γ` of controllable systems into `Gras_{m+p}(∞)` with its open-locus tests.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::kalman::{canonical_form, code_from_multiindex, MultiIndex};
use crate::matrix::Matrix;
use crate::system::LinearSystem;

/// A `k`-dimensional subspace of an `N`-dimensional space, stored as the reduced
/// row-echelon basis of its row space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannPoint {
    rep: Matrix,
    pivots: MultiIndex,
}

impl GrassmannPoint {
    /// Row space of a full-row-rank matrix.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let (rep, pivots) = m.rref_with_pivots();
        if pivots.len() != m.rows() {
            return Err(Error::RankDeficient { rank: pivots.len(), required: m.rows() });
        }
        Ok(GrassmannPoint { rep, pivots: MultiIndex::new(pivots)? })
    }

    pub fn field(&self) -> Field {
        self.rep.field()
    }

    pub fn k(&self) -> usize {
        self.rep.rows()
    }

    /// Ambient dimension `N`.
    pub fn ambient(&self) -> usize {
        self.rep.cols()
    }

    pub fn rep(&self) -> &Matrix {
        &self.rep
    }

    pub fn pivots(&self) -> &MultiIndex {
        &self.pivots
    }

    /// Image under `F^N ↪ F^{N'}`, appending zero coordinates.
    pub fn embed(&self, ambient: usize) -> Result<GrassmannPoint> {
        if ambient < self.ambient() {
            return Err(Error::DimensionMismatch(format!("cannot embed into {ambient} < {}", self.ambient())));
        }
        Ok(GrassmannPoint { rep: self.rep.pad_cols(ambient - self.ambient()), pivots: self.pivots.clone() })
    }

    /// Equality in the direct limit: compare after padding to the larger ambient.
    pub fn same_subspace(&self, other: &GrassmannPoint) -> bool {
        let n = self.ambient().max(other.ambient());
        self.k() == other.k()
            && self.field() == other.field()
            && self.embed(n).expect("n is max") == other.embed(n).expect("n is max")
    }

    /// Plücker coordinate: the maximal minor on the given columns.
    pub fn plucker(&self, cols: &MultiIndex) -> Result<Scalar> {
        let rows: Vec<usize> = (0..self.k()).collect();
        self.rep.minor_det(&rows, cols.indices())
    }

    /// Whether the given columns of the representative are linearly independent.
    fn columns_independent(&self, cols: &[usize]) -> bool {
        cols.len() <= self.k() && self.rep.select_cols(cols).expect("in range").rank() == cols.len()
    }
}

impl fmt::Display for GrassmannPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "point of Gras_{}({}) over {}, pivots {}", self.k(), self.ambient(), self.field(), self.pivots)?;
        write!(f, "{}", self.rep)
    }
}

pub fn point_from_matrix(m: &Matrix) -> Result<GrassmannPoint> {
    GrassmannPoint::from_matrix(m)
}

/// Schubert cell `I = (d₁ < … < d_k)`: `d_i` is the first column at which the span of the
/// leading columns reaches dimension `i`. These are the echelon pivots.
pub fn schubert_cell_of(point: &GrassmannPoint) -> MultiIndex {
    point.pivots.clone()
}

/// `M_Σ = [B'₁ … B'_m A'₁ … A'_{n−1}]` built from the canonical form of `Σ`.
pub fn psi_matrix(sys: &LinearSystem) -> Result<Matrix> {
    let n = sys.n();
    if n == 0 {
        return Err(Error::DimensionMismatch("the cell map needs n >= 1".into()));
    }
    let cf = canonical_form(sys)?;
    let leading: Vec<usize> = (0..n - 1).collect();
    cf.system.b().hstack(&cf.system.a().select_cols(&leading)?)
}

/// `ψ(Σ) ∈ Gras_n(m+n−1)`, constant on base-change orbits.
pub fn psi(sys: &LinearSystem) -> Result<GrassmannPoint> {
    GrassmannPoint::from_matrix(&psi_matrix(sys)?)
}

/// Pinned columns of the cell representative for `I`: column `d` carries the basis
/// vector `e_r`, returned as `(d, r)`, both 0-based.
fn cell_pins(index: &MultiIndex, m: usize) -> Result<Vec<(usize, usize)>> {
    let n = index.len();
    let code = code_from_multiindex(index, m, n)?;
    let h = code.prefix_sums();
    let mut pins = Vec::with_capacity(n);
    let mut t = 0;
    for &d in index.indices() {
        if d < m {
            // B_{j(t)} = e_{h(t−1)+1}
            pins.push((d, h[t]));
            t += 1;
        } else {
            // column m + c (1-based) is A_c = e_{c+1}
            let c = d - m + 1;
            pins.push((d, c));
        }
    }
    Ok(pins)
}

/// Free entries `(row, column)` of the cell representative for `I`, in fill order:
/// left to right over the columns outside `I`, rows ascending. A free column may be
/// nonzero only in rows pinned by columns of `I` to its left.
pub fn cell_free_slots(index: &MultiIndex, m: usize) -> Result<Vec<(usize, usize)>> {
    let n = index.len();
    let pins = cell_pins(index, m)?;
    let mut slots = Vec::new();
    for col in 0..(m + n).saturating_sub(1) {
        if index.contains(col) {
            continue;
        }
        let mut rows: Vec<usize> = pins.iter().filter(|(d, _)| *d < col).map(|&(_, r)| r).collect();
        rows.sort_unstable();
        slots.extend(rows.into_iter().map(|r| (r, col)));
    }
    Ok(slots)
}

/// A controllable system whose cell-map image lies in the Schubert cell `I`.
///
/// Fills the `n x (m+n−1)` matrix `[B₁ … B_m A₁ … A_{n−1}]` with the pinned basis vectors
/// of the cell representative and `free_values` (see [`cell_free_slots`]), then appends
/// `a_last` as the last column of `A` and uses `c` as output matrix. The result is always
/// completely controllable and, for `n ≤ 3`, maps back into the cell `I`.
pub fn psi_cell_preimage(
    index: &MultiIndex,
    m: usize,
    free_values: &[Scalar],
    c: &Matrix,
    a_last: &Matrix,
) -> Result<LinearSystem> {
    let n = index.len();
    let field = c.field();
    if c.cols() != n || a_last.shape() != (n, 1) || a_last.field() != field {
        return Err(Error::DimensionMismatch(format!("C must be p x {n} and the last column of A {n} x 1")));
    }
    let slots = cell_free_slots(index, m)?;
    if free_values.len() != slots.len() {
        return Err(Error::DimensionMismatch(format!(
            "cell {index} has {} free entries, {} given",
            slots.len(),
            free_values.len()
        )));
    }
    let width = (m + n).saturating_sub(1);
    let mut rep = Matrix::zeros(field, n, width);
    for (d, r) in cell_pins(index, m)? {
        rep.set(r, d, field.one());
    }
    for (&(r, col), v) in slots.iter().zip(free_values) {
        if v.field() != field {
            return Err(Error::FieldMismatch);
        }
        rep.set(r, col, v.clone());
    }
    if n == 0 {
        return Ok(LinearSystem::empty(field, m, c.rows()));
    }
    let b = rep.select_cols(&(0..m).collect::<Vec<_>>())?;
    let a = rep.select_cols(&(m..width).collect::<Vec<_>>())?.hstack(a_last)?;
    LinearSystem::new(a, b, c.clone())
}

/// A point of `Gras_{m+p}(∞)` held by its minimal finite representative in
/// `Gras_{m+p}(m+p+n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InfiniteGrassmannPoint {
    point: GrassmannPoint,
    m: usize,
    p: usize,
}

impl InfiniteGrassmannPoint {
    /// Wraps a `(m+p)`-plane; trailing zero coordinates are dropped so that points related
    /// by the inclusions `F^N ↪ F^{N+1}` compare equal.
    pub fn new(point: GrassmannPoint, m: usize, p: usize) -> Result<Self> {
        let k = m + p;
        if point.k() != k || point.ambient() < k {
            return Err(Error::DimensionMismatch(format!(
                "expected a {k}-plane in at least {k} dimensions, got Gras_{}({})",
                point.k(),
                point.ambient()
            )));
        }
        let rep = point.rep();
        let mut keep = rep.cols();
        while keep > k && (0..rep.rows()).all(|r| rep.get(r, keep - 1).is_zero()) {
            keep -= 1;
        }
        let trimmed = GrassmannPoint::from_matrix(&rep.select_cols(&(0..keep).collect::<Vec<_>>())?)?;
        Ok(InfiniteGrassmannPoint { point: trimmed, m, p })
    }

    pub fn point(&self) -> &GrassmannPoint {
        &self.point
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `n` with the minimal representative living in `Gras_{m+p}(m+p+n)`.
    pub fn stratum(&self) -> usize {
        self.point.ambient() - self.m - self.p
    }
}

/// `L_Σ = [B Cᵀ A]`, of size `n x (m+p+n)`.
pub fn l_matrix(sys: &LinearSystem) -> Result<Matrix> {
    sys.b().hstack(&sys.c().transpose())?.hstack(sys.a())
}

/// `γ(Σ)`: the `(m+p)`-plane of linear relations among the columns of `L_Σ`.
///
/// Controllable systems are first brought to canonical form, which makes `γ` constant on
/// orbits. Other systems are used as given, provided `L_Σ` has rank `n`.
pub fn gamma(sys: &LinearSystem) -> Result<InfiniteGrassmannPoint> {
    let normalized;
    let sys = if sys.is_cc() {
        normalized = canonical_form(sys)?.system;
        &normalized
    } else {
        sys
    };
    let l = l_matrix(sys)?;
    let rank = l.rank();
    if rank < sys.n() {
        return Err(Error::RankDeficient { rank, required: sys.n() });
    }
    let point = GrassmannPoint::from_matrix(&l.kernel_basis())?;
    InfiniteGrassmannPoint::new(point, sys.m(), sys.p())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LocusMembership {
    pub in_cc: bool,
    pub in_co: bool,
    pub in_canonical: bool,
}

/// Columns that must belong to a qualifying multi-index for the controllable locus:
/// `{m+1, …, m+p, m+p+n}` (returned 0-based).
pub fn cc_required_columns(m: usize, p: usize, n: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = (m..m + p).collect();
    let last = m + p + n - 1;
    if !cols.contains(&last) {
        cols.push(last);
    }
    cols
}

/// Columns required for the observable locus: `{1, …, m, m+p+n}` (0-based).
pub fn co_required_columns(m: usize, p: usize, n: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = (0..m).collect();
    let last = m + p + n - 1;
    if !cols.contains(&last) {
        cols.push(last);
    }
    cols
}

/// Membership in the open unions of standard affine charts `X_I` with `I` containing the
/// controllable (resp. observable) required columns.
///
/// Some `I ⊇ R` has an invertible minor exactly when the columns `R` of the
/// representative are independent: the representative has rank `m+p`, so any independent
/// set of its columns extends to a column basis.
pub fn locus_membership(point: &InfiniteGrassmannPoint, m: usize, p: usize) -> Result<LocusMembership> {
    if point.m != m || point.p != p {
        return Err(Error::DimensionMismatch(format!(
            "point was built for (m,p) = ({},{}), asked about ({m},{p})",
            point.m, point.p
        )));
    }
    let n = point.stratum();
    if m + p == 0 {
        return Err(Error::DimensionMismatch("m + p must be positive".into()));
    }
    let in_cc = point.point.columns_independent(&cc_required_columns(m, p, n));
    let in_co = point.point.columns_independent(&co_required_columns(m, p, n));
    Ok(LocusMembership { in_cc, in_co, in_canonical: in_cc && in_co })
}

/// `n`, read off from the largest column of a qualifying multi-index, `d_{m+p} = m+p+n`.
pub fn stratum_dimension(point: &InfiniteGrassmannPoint) -> Result<usize> {
    if !locus_membership(point, point.m, point.p)?.in_cc {
        return Err(Error::NotInLocus);
    }
    Ok(point.stratum())
}
