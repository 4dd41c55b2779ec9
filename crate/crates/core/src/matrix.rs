//! Dense matrices over an exact field, with Gauss-Jordan based rank, echelon forms,
//! kernels and minors.
//!
//! Every operation returns a fresh value; nothing is mutated through a shared reference.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, checking the length and that every entry
    /// belongs to `field`.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch { rows, cols });
        }
        if data.iter().any(|x| x.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Convenience constructor from small integer rows. All rows must have `cols` entries.
    pub fn from_i64(field: Field, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch { rows, cols });
        }
        let data = entries.iter().map(|&v| field.from_i64(v)).collect();
        Ok(Matrix { field, rows, cols, data })
    }

    /// Builds a matrix from nested rows. An empty outer list yields a `0 x cols` matrix.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::ShapeMismatch { rows: r, cols });
        }
        Matrix::new(field, r, cols, rows.into_iter().flatten().collect())
    }

    /// Standard basis column vector `e_index` (0-based) of length `n`.
    pub fn basis_vector(field: Field, n: usize, index: usize) -> Self {
        let mut v = Matrix::zeros(field, n, 1);
        v.data[index] = field.one();
        v
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "entry ({r},{c}) outside {}x{}", self.rows, self.cols);
        assert_eq!(v.field(), self.field, "scalar from a different field");
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    fn check_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!("shapes {:?} and {:?} differ", self.shape(), rhs.shape())));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect();
        Ok(Matrix { field: self.field, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|x| x * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    /// `self^k` for a square matrix; `self^0` is the identity.
    pub fn pow(&self, k: usize) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!("hstack of {} and {} rows", self.rows, rhs.rows)));
        }
        let cols = self.cols + rhs.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(rhs.row(r));
        }
        Ok(Matrix { field: self.field, rows: self.rows, cols, data })
    }

    /// Vertical concatenation of `self` above `rhs`.
    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        self.check_field(rhs)?;
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!("vstack of {} and {} columns", self.cols, rhs.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        Ok(Matrix { field: self.field, rows: self.rows + rhs.rows, cols: self.cols, data })
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange { index: r, len: self.rows });
            }
        }
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange { index: c, len: self.cols });
            }
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c).clone());
            }
        }
        Ok(Matrix { field: self.field, rows: rows.len(), cols: cols.len(), data })
    }

    pub fn select_cols(&self, cols: &[usize]) -> Result<Matrix> {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Matrix> {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    /// Column `c` as an `rows x 1` matrix.
    pub fn column(&self, c: usize) -> Matrix {
        self.select_cols(&[c]).expect("column index in range")
    }

    /// Reduced row-echelon form and its strictly increasing pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.gauss_jordan();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    // In-place Gauss-Jordan elimination; returns pivot columns.
    fn gauss_jordan(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(found) = (pr..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(found, pr);
            let inv = self.get(pr, c).inv().expect("pivot is nonzero");
            for j in c..self.cols {
                let idx = pr * self.cols + j;
                self.data[idx] = &self.data[idx] * &inv;
            }
            for r in 0..self.rows {
                if r == pr {
                    continue;
                }
                let factor = self.get(r, c).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let sub = &factor * &self.data[pr * self.cols + j];
                    let idx = r * self.cols + j;
                    self.data[idx] = &self.data[idx] - &sub;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Rows form a basis of `{v : self · vᵀ = 0}`, one row per free column of the echelon form.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, free.len(), self.cols);
        for (row, &f) in free.iter().enumerate() {
            k.set(row, f, self.field.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(row, pc, -r.get(pr, f));
            }
        }
        k
    }

    pub fn det(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NonSquareSelection { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(found) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if found != c {
                m.swap_rows(found, c);
                det = -&det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for r in c + 1..n {
                let factor = m.get(r, c) * &inv;
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let sub = &factor * m.get(c, j);
                    let idx = r * n + j;
                    m.data[idx] = &m.data[idx] - &sub;
                }
            }
        }
        Ok(det)
    }

    /// Determinant of the square submatrix on strictly increasing row and column indices.
    pub fn minor_det(&self, row_idx: &[usize], col_idx: &[usize]) -> Result<Scalar> {
        if row_idx.len() != col_idx.len() {
            return Err(Error::NonSquareSelection { rows: row_idx.len(), cols: col_idx.len() });
        }
        for (idx, len) in [(row_idx, self.rows), (col_idx, self.cols)] {
            if let Some(&bad) = idx.iter().find(|&&i| i >= len) {
                return Err(Error::IndexOutOfRange { index: bad, len });
            }
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidMultiIndex(format!("{idx:?} is not strictly increasing")));
            }
        }
        self.select(row_idx, col_idx)?.det()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n)).ok()?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        r.select_cols(&cols).ok()
    }

    /// Copy with `extra` zero columns appended on the right.
    pub fn pad_cols(&self, extra: usize) -> Matrix {
        let z = Matrix::zeros(self.field, self.rows, extra);
        self.hstack(&z).expect("same row count")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[] ({}x{})", self.rows, self.cols);
        }
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            if r > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
