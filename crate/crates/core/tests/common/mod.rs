#![allow(dead_code)]

use moduli_sys::cli::draw_system;
use moduli_sys::{Field, LinearSystem, Matrix};
use rand::Rng;

/// Matrix whose entries are the base-`q` digits of `code`, row-major.
pub fn matrix_from_code(field: Field, rows: usize, cols: usize, mut code: u64) -> Matrix {
    let q = field.order().expect("prime field");
    let data: Vec<i64> = (0..rows * cols)
        .map(|_| {
            let d = code % q;
            code /= q;
            d as i64
        })
        .collect();
    Matrix::from_i64(field, rows, cols, &data).unwrap()
}

/// Every system `(A, B, C)` of type `(m, n, p)` over a prime field.
pub fn all_systems(field: Field, m: usize, n: usize, p: usize) -> impl Iterator<Item = LinearSystem> {
    let q = field.order().expect("prime field");
    let (sa, sb, sc) = (q.pow((n * n) as u32), q.pow((n * m) as u32), q.pow((p * n) as u32));
    (0..sa * sb * sc).map(move |code| {
        let a = matrix_from_code(field, n, n, code % sa);
        let b = matrix_from_code(field, n, m, (code / sa) % sb);
        let c = matrix_from_code(field, p, n, code / (sa * sb));
        LinearSystem::new(a, b, c).unwrap()
    })
}

/// All systems over `F_2` with `n ≤ 2` and `m, p ≤ 2`.
pub fn f2_sweep() -> impl Iterator<Item = LinearSystem> {
    let f2 = Field::Prime(2);
    (0..=2usize)
        .flat_map(move |n| (0..=2usize).flat_map(move |m| (0..=2usize).flat_map(move |p| all_systems(f2, m, n, p))))
}

pub fn random_system<R: Rng>(rng: &mut R, field: Field, m: usize, n: usize, p: usize) -> LinearSystem {
    draw_system(rng, field, m, n, p, 4).unwrap()
}

pub fn random_cc<R: Rng>(rng: &mut R, field: Field, m: usize, n: usize, p: usize) -> LinearSystem {
    loop {
        let s = random_system(rng, field, m, n, p);
        if s.is_cc() {
            return s;
        }
    }
}

pub fn random_canonical<R: Rng>(rng: &mut R, field: Field, m: usize, n: usize, p: usize) -> LinearSystem {
    loop {
        let s = random_system(rng, field, m, n, p);
        if s.classify().canonical {
            return s;
        }
    }
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Matrix {
    loop {
        let data: Vec<i64> = (0..n * n)
            .map(|_| match field.order() {
                Some(q) => rng.gen_range(0..q) as i64,
                None => rng.gen_range(-3..=3),
            })
            .collect();
        let g = Matrix::from_i64(field, n, n, &data).unwrap();
        if g.rank() == n {
            return g;
        }
    }
}
