#![allow(dead_code)]

use jacobson_core::{GaussianRational, Matrix};
use rand::Rng;

pub fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| int(rng.gen_range(-3..=3)))
}

/// Entries `x + y i` with small integer parts.
pub fn random_gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        &int(rng.gen_range(-2..=2)) + &(&GaussianRational::i() * &int(rng.gen_range(-2..=2)))
    })
}

/// Product of a random `n x r` and `r x n` integer matrix, so rank <= r.
pub fn random_low_rank(rng: &mut impl Rng, n: usize, r: usize) -> Matrix {
    &random_matrix(rng, n, r) * &random_matrix(rng, r, n)
}

/// Integer matrix with determinant +-1 and its inverse.
pub fn unimodular(rng: &mut impl Rng, n: usize) -> (Matrix, Matrix) {
    let mut q = Matrix::identity(n);
    if n > 1 {
        for _ in 0..=n {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            let k = int(if rng.gen_bool(0.5) { 1 } else { -1 });
            for col in 0..n {
                let delta = &k * &q[(j, col)];
                q[(i, col)] += &delta;
            }
        }
    }
    let inv = q.inverse().expect("unimodular");
    (q, inv)
}

/// `S J S^-1` with `J` a direct sum of a nilpotent Jordan block and a random
/// invertible-ish block: exercises nontrivial Drazin indices.
pub fn random_core_nilpotent(rng: &mut impl Rng, n: usize) -> Matrix {
    let m = rng.gen_range(1..=n);
    let nil = Matrix::from_fn(m, m, |i, j| int((j == i + 1) as i64));
    let j = if m < n {
        Matrix::block_diag(&[&nil, &random_matrix(rng, n - m, n - m)])
    } else {
        nil
    };
    let (s, s_inv) = unimodular(rng, n);
    &(&s * &j) * &s_inv
}

/// A mix of dense, low-rank, complex and core-nilpotent matrices.
pub fn random_mixed(rng: &mut impl Rng, n: usize) -> Matrix {
    match rng.gen_range(0..4) {
        0 => random_matrix(rng, n, n),
        1 => {
            let r = rng.gen_range(0..=n);
            if r == 0 {
                Matrix::zeros(n, n)
            } else {
                random_low_rank(rng, n, r)
            }
        }
        2 => random_gaussian_matrix(rng, n, n),
        _ => random_core_nilpotent(rng, n),
    }
}
