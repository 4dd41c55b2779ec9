//! Kalman codes of completely controllable systems and the canonical form they select.
//!
//! Box `(i, j)` of the `n x m` code is black when `A^i B_j` is independent of every
//! `A^k B_l` with `(k, l)` lexicographically smaller. Black boxes are top-justified in each
//! column, so a code is determined by its column heights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;
use crate::system::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KalmanCode {
    m: usize,
    n: usize,
    /// Black boxes per column, top-justified.
    heights: Vec<usize>,
}

impl KalmanCode {
    /// Code from column heights; the heights must sum to `n`.
    pub fn from_heights(n: usize, heights: Vec<usize>) -> Result<Self> {
        if heights.iter().sum::<usize>() != n {
            return Err(Error::InvalidMultiIndex(format!("column heights {heights:?} do not sum to n = {n}")));
        }
        Ok(KalmanCode { m: heights.len(), n, heights })
    }

    /// Every code with `m` columns and `n` black boxes.
    pub fn all(m: usize, n: usize) -> Vec<KalmanCode> {
        fn go(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() + 1 == m {
                cur.push(left);
                out.push(cur.clone());
                cur.pop();
                return;
            }
            for h in 0..=left {
                cur.push(h);
                go(m, left - h, cur, out);
                cur.pop();
            }
        }
        if m == 0 {
            return if n == 0 { vec![KalmanCode { m, n, heights: vec![] }] } else { vec![] };
        }
        let mut out = Vec::new();
        go(m, n, &mut Vec::new(), &mut out);
        out.into_iter().map(|heights| KalmanCode { m, n, heights }).collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn is_black(&self, i: usize, j: usize) -> bool {
        i < self.heights[j]
    }

    /// Black boxes `(i, j)` in lexicographic order, 0-based.
    pub fn black_boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            for j in 0..self.m {
                if self.is_black(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Nonempty columns, increasing (0-based).
    pub fn columns(&self) -> Vec<usize> {
        (0..self.m).filter(|&j| self.heights[j] > 0).collect()
    }

    /// Heights of the nonempty columns.
    pub fn column_heights(&self) -> Vec<usize> {
        self.heights.iter().copied().filter(|&h| h > 0).collect()
    }

    /// Prefix sums `0 = h(0) < h(1) < … < h(k) = n` of the nonempty column heights.
    pub fn prefix_sums(&self) -> Vec<usize> {
        let mut out = vec![0];
        for h in self.column_heights() {
            out.push(out.last().unwrap() + h);
        }
        out
    }

    /// Rows of `#` (black) and `.` (white), top row is power `0`.
    pub fn ascii_art(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            for j in 0..self.m {
                s.push(if self.is_black(i, j) { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> KalmanCodeJson {
        KalmanCodeJson {
            m: self.m,
            n: self.n,
            j: self.columns().iter().map(|j| j + 1).collect(),
            p: self.column_heights(),
        }
    }

    pub fn from_json(json: &KalmanCodeJson) -> Result<Self> {
        if json.j.len() != json.p.len() {
            return Err(Error::Parse("Kalman code lists j and p differ in length".into()));
        }
        let mut heights = vec![0; json.m];
        let mut last = 0;
        for (&j, &p) in json.j.iter().zip(&json.p) {
            if j <= last || j > json.m || p == 0 {
                return Err(Error::Parse(format!("invalid Kalman column {j} with height {p}")));
            }
            heights[j - 1] = p;
            last = j;
        }
        KalmanCode::from_heights(json.n, heights)
    }
}

impl fmt::Display for KalmanCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js = self.to_json();
        write!(f, "j={:?} p={:?}", js.j, js.p)
    }
}

/// Serialized form: nonempty columns (1-based) and their heights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KalmanCodeJson {
    pub m: usize,
    pub n: usize,
    pub j: Vec<usize>,
    pub p: Vec<usize>,
}

/// Strictly increasing column indices, 0-based; printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    indices: Vec<usize>,
}

impl MultiIndex {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMultiIndex(format!("{indices:?} is not strictly increasing")));
        }
        Ok(MultiIndex { indices })
    }

    /// From 1-based positions as written in the literature.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::InvalidMultiIndex("1-based index 0".into()));
        }
        MultiIndex::new(indices.iter().map(|i| i - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_superset_of(&self, other: &[usize]) -> bool {
        other.iter().all(|&i| self.contains(i))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

// Row-echelon accumulator for independence tests against a growing set of vectors.
struct EchelonBasis {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl EchelonBasis {
    fn new() -> Self {
        EchelonBasis { rows: Vec::new() }
    }

    /// Inserts `v` if independent of what is stored; returns whether it was.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (pivot, row) in &self.rows {
            let factor = v[*pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x - &(&factor * r);
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[pivot].inv().expect("nonzero");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        // Keep stored rows reduced at the new pivot so later reductions stay single-pass.
        for (_, row) in self.rows.iter_mut() {
            let factor = row[pivot].clone();
            if factor.is_zero() {
                continue;
            }
            for (x, r) in row.iter_mut().zip(&v) {
                *x = &*x - &(&factor * r);
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Kalman code of a completely controllable system.
pub fn kalman_code(sys: &LinearSystem) -> Result<KalmanCode> {
    let (m, n, _) = sys.dims();
    let mut heights = vec![0; m];
    let mut basis = EchelonBasis::new();
    let mut found = 0;
    // powers[j] holds A^i B_j for the current i.
    let mut powers: Vec<Matrix> = (0..m).map(|j| sys.b().column(j)).collect();
    'outer: for i in 0..n {
        if i > 0 {
            for col in powers.iter_mut() {
                *col = sys.a().mul(col)?;
            }
        }
        for (j, col) in powers.iter().enumerate() {
            if basis.insert(col.entries().to_vec()) {
                // Black boxes in column j are contiguous from the top.
                debug_assert_eq!(heights[j], i);
                heights[j] += 1;
                found += 1;
                if found == n {
                    break 'outer;
                }
            }
        }
    }
    if found < n {
        return Err(Error::NotControllable { rank: found, n });
    }
    Ok(KalmanCode { m, n, heights })
}

/// `I_κ = {j(1) < … < j(k) < m+c₁ < … < m+c_{n−k}}` inside `{1, …, m+n−1}`, stored 0-based.
pub fn multiindex_from_code(code: &KalmanCode) -> MultiIndex {
    let m = code.m;
    let h = code.prefix_sums();
    let mut idx = code.columns();
    // c ranges over {1..n} minus {h(1)..h(k)}; 1-based m + c is 0-based m + c - 1.
    idx.extend((1..=code.n).filter(|c| !h[1..].contains(c)).map(|c| m + c - 1));
    MultiIndex { indices: idx }
}

/// Inverse of [`multiindex_from_code`] for multi-indices of size `n` in `{1, …, m+n−1}`.
pub fn code_from_multiindex(index: &MultiIndex, m: usize, n: usize) -> Result<KalmanCode> {
    if index.len() != n {
        return Err(Error::InvalidMultiIndex(format!("{index} has size {}, expected {n}", index.len())));
    }
    let ambient = (m + n).saturating_sub(1);
    if let Some(&bad) = index.indices.iter().find(|&&d| d >= ambient) {
        return Err(Error::InvalidMultiIndex(format!("entry {} exceeds m+n-1 = {ambient}", bad + 1)));
    }
    let cols: Vec<usize> = index.indices.iter().copied().filter(|&d| d < m).collect();
    let cs: Vec<usize> = index.indices.iter().filter(|&&d| d >= m).map(|d| d - m + 1).collect();
    let es: Vec<usize> = (1..=n).filter(|e| !cs.contains(e)).collect();
    if es.len() != cols.len() {
        return Err(Error::InvalidMultiIndex(format!("{index} does not split into a Kalman code")));
    }
    let mut heights = vec![0; m];
    let mut prev = 0;
    for (&j, &e) in cols.iter().zip(&es) {
        heights[j] = e - prev;
        prev = e;
    }
    KalmanCode::from_heights(n, heights)
}

/// Result of [`canonical_form`]: the base change and the normalized system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub g: Matrix,
    pub system: LinearSystem,
    pub code: KalmanCode,
}

/// The columns `A^s B_j` for the black boxes, grouped by column `j` and ordered by power.
pub fn kalman_basis(sys: &LinearSystem, code: &KalmanCode) -> Result<Matrix> {
    let mut t = Matrix::zeros(sys.field(), sys.n(), 0);
    for (j, &h) in code.heights.iter().enumerate() {
        let mut v = sys.b().column(j);
        for s in 0..h {
            if s > 0 {
                v = sys.a().mul(&v)?;
            }
            t = t.hstack(&v)?;
        }
    }
    Ok(t)
}

/// The unique `g` with `g.Σ` in Kalman canonical form, and `g.Σ` itself.
///
/// With `κ` the code of `Σ`, the output satisfies `B'_{j(t)} = e_{h(t−1)+1}` and
/// `A'_i = e_{i+1}` for `i ∉ {h(1), …, h(k)}` (1-based), and `C' = C g⁻¹`.
pub fn canonical_form(sys: &LinearSystem) -> Result<CanonicalForm> {
    let code = kalman_code(sys)?;
    let t = kalman_basis(sys, &code)?;
    let g = t.inverse().ok_or(Error::NotControllable { rank: t.rank(), n: sys.n() })?;
    let system = sys.act_with_inverse(&g, &t)?;
    Ok(CanonicalForm { g, system, code })
}
