//! Linear systems `Σ = (A, B, C)`, their controllability and observability tests,
//! the state-space base change action, duality and Markov parameters.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

/// A system of type `(m, n, p)`: `A` is `n x n`, `B` is `n x m`, `C` is `p x n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    field: Field,
    a: Matrix,
    b: Matrix,
    c: Matrix,
    m: usize,
    n: usize,
    p: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemClass {
    pub cc: bool,
    pub co: bool,
    pub canonical: bool,
    pub rank_c: usize,
    pub rank_o: usize,
}

impl LinearSystem {
    pub fn new(a: Matrix, b: Matrix, c: Matrix) -> Result<Self> {
        let field = a.field();
        if b.field() != field || c.field() != field {
            return Err(Error::FieldMismatch);
        }
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::DimensionMismatch(format!("A is {}x{}, not square", n, a.cols())));
        }
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!("B has {} rows, expected {n}", b.rows())));
        }
        if c.cols() != n {
            return Err(Error::DimensionMismatch(format!("C has {} columns, expected {n}", c.cols())));
        }
        let (m, p) = (b.cols(), c.rows());
        Ok(LinearSystem { field, a, b, c, m, n, p })
    }

    /// The unique system with zero-dimensional state space.
    pub fn empty(field: Field, m: usize, p: usize) -> Self {
        LinearSystem {
            field,
            a: Matrix::zeros(field, 0, 0),
            b: Matrix::zeros(field, 0, m),
            c: Matrix::zeros(field, p, 0),
            m,
            n: 0,
            p,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    /// `(m, n, p)`: inputs, states, outputs.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// `c(Σ) = [B AB … A^{n−1}B]`, of size `n x nm`.
    pub fn controllability_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.n, 0);
        let mut block = self.b.clone();
        for i in 0..self.n {
            if i > 0 {
                block = self.a.mul(&block).expect("A is n x n");
            }
            out = out.hstack(&block).expect("n rows");
        }
        out
    }

    /// `o(Σ) = [C; CA; …; CA^{n−1}]`, of size `pn x n`.
    pub fn observability_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, 0, self.n);
        let mut block = self.c.clone();
        for i in 0..self.n {
            if i > 0 {
                block = block.mul(&self.a).expect("A is n x n");
            }
            out = out.vstack(&block).expect("n columns");
        }
        out
    }

    pub fn classify(&self) -> SystemClass {
        let rank_c = self.controllability_matrix().rank();
        let rank_o = self.observability_matrix().rank();
        let cc = rank_c == self.n;
        let co = rank_o == self.n;
        SystemClass { cc, co, canonical: cc && co, rank_c, rank_o }
    }

    pub fn is_cc(&self) -> bool {
        self.controllability_matrix().rank() == self.n
    }

    pub fn is_co(&self) -> bool {
        self.observability_matrix().rank() == self.n
    }

    /// Base change `(gAg⁻¹, gB, Cg⁻¹)`.
    pub fn act(&self, g: &Matrix) -> Result<LinearSystem> {
        if g.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if g.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch(format!(
                "base change is {}x{}, state dimension is {}",
                g.rows(),
                g.cols(),
                self.n
            )));
        }
        let g_inv = g.inverse().ok_or(Error::SingularBaseChange)?;
        self.act_with_inverse(g, &g_inv)
    }

    pub(crate) fn act_with_inverse(&self, g: &Matrix, g_inv: &Matrix) -> Result<LinearSystem> {
        let a = g.mul(&self.a)?.mul(g_inv)?;
        let b = g.mul(&self.b)?;
        let c = self.c.mul(g_inv)?;
        LinearSystem::new(a, b, c)
    }

    /// `(Aᵀ, Cᵀ, Bᵀ)`, a system of type `(p, n, m)`.
    pub fn dualize(&self) -> LinearSystem {
        LinearSystem {
            field: self.field,
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            m: self.p,
            n: self.n,
            p: self.m,
        }
    }

    /// `[CB, CAB, …, CA^{count−1}B]`.
    pub fn markov_parameters(&self, count: usize) -> Vec<Matrix> {
        let mut out = Vec::with_capacity(count);
        let mut ab = self.b.clone();
        for j in 0..count {
            if j > 0 {
                ab = self.a.mul(&ab).expect("A is n x n");
            }
            out.push(self.c.mul(&ab).expect("C is p x n"));
        }
        out
    }
}

impl std::fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "system over {} with (m,n,p) = ({},{},{})", self.field, self.m, self.n, self.p)?;
        writeln!(f, "A =\n{}", self.a)?;
        writeln!(f, "B =\n{}", self.b)?;
        write!(f, "C =\n{}", self.c)
    }
}
