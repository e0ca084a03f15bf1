//! Drazin index, Drazin and group inverses, spectral idempotents, and
//! commutant sampling.
//!
//! In a matrix ring every quasinilpotent is nilpotent, so the generalized
//! Drazin inverse coincides with the ordinary Drazin inverse and a single
//! implementation serves both.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, Matrix};
use crate::error::{Error, Result};

/// Drazin inverse `A^D`, index `i(A)` and spectral idempotent `A^pi = I - A A^D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrazinData {
    pub dinv: Matrix,
    pub index: usize,
    pub spectral_idempotent: Matrix,
}

/// Smallest `k >= 0` with `rank(A^k) == rank(A^(k+1))`.
pub fn index_of(a: &Matrix) -> Result<usize> {
    let n = a.square_size("index_of")?;
    let mut power = Matrix::identity(n);
    let mut rank = n;
    for k in 0..=n {
        let next = &power * a;
        let next_rank = next.rank();
        if next_rank == rank {
            return Ok(k);
        }
        power = next;
        rank = next_rank;
    }
    unreachable!("rank sequence of a {n}x{n} matrix stabilizes within {n} steps")
}

/// `A^n == 0` for an `n x n` matrix.
pub fn is_nilpotent(a: &Matrix) -> Result<bool> {
    let n = a.square_size("is_nilpotent")?;
    Ok(a.pow(n as u32)?.is_zero())
}

/// Smallest `k >= 1` with `M^k == 0`, if `M` is nilpotent.
pub fn nilpotency_index(m: &Matrix) -> Option<usize> {
    let n = m.rows();
    let mut power = m.clone();
    for k in 1..=n {
        if power.is_zero() {
            return Some(k);
        }
        power = &power * m;
    }
    None
}

/// Names of the Drazin equations `x a x = x`, `x a = a x`,
/// `a^(k+1) x = a^k` that fail for the candidate `x`.
pub fn drazin_equation_failures(a: &Matrix, x: &Matrix, k: usize) -> Vec<&'static str> {
    let mut failed = Vec::new();
    let xa = x * a;
    if &xa * x != *x {
        failed.push("xax = x");
    }
    if xa != a * x {
        failed.push("xa = ax");
    }
    let ak = a.pow(k as u32).expect("square");
    if &(&ak * a) * x != ak {
        failed.push("a^(k+1)x = a^k");
    }
    failed
}

impl DrazinData {
    /// Every structural property the triple must satisfy for `a`; returns the
    /// names of those that fail.
    pub fn violations(&self, a: &Matrix) -> Vec<&'static str> {
        let mut failed = drazin_equation_failures(a, &self.dinv, self.index);
        let p = &self.spectral_idempotent;
        if *p != (a * &self.dinv).identity_minus() {
            failed.push("pi = I - a a^D");
        }
        if p * p != *p {
            failed.push("pi idempotent");
        }
        if !p.commutes_with(a) {
            failed.push("pi commutes with a");
        }
        // a^j pi vanishes first at j = index.
        let ak = a.pow(self.index as u32).expect("square");
        if !(&ak * p).is_zero() {
            failed.push("a^index pi = 0");
        }
        if self.index > 0 {
            let below = a.pow(self.index as u32 - 1).expect("square");
            if (&below * p).is_zero() {
                failed.push("a^(index-1) pi != 0");
            }
        }
        failed
    }
}

/// Drazin data via `A^D = A^l (A^(2l+1))^(1) A^l`, `l = i(A)`, where `^(1)`
/// is any {1}-inverse.
///
/// Panics if the result fails its own consistency checks, which can only
/// happen through a bug in the arithmetic kernels.
pub fn drazin(a: &Matrix) -> Result<DrazinData> {
    a.square_size("drazin")?;
    let l = index_of(a)?;
    let al = a.pow(l as u32)?;
    let g = a.pow(2 * l as u32 + 1)?.one_inverse();
    let dinv = &(&al * &g) * &al;
    let data = DrazinData {
        spectral_idempotent: (a * &dinv).identity_minus(),
        dinv,
        index: l,
    };
    let failed = data.violations(a);
    assert!(failed.is_empty(), "drazin kernel inconsistency for {a}: {failed:?}");
    Ok(data)
}

/// Group inverse `A^#`; exists iff `i(A) <= 1` (index 0 gives the ordinary inverse).
pub fn group_inverse(a: &Matrix) -> Result<Matrix> {
    let data = drazin(a)?;
    if data.index >= 2 {
        return Err(Error::NoGroupInverse { index: data.index });
    }
    Ok(data.dinv)
}

/// Drazin data by the core-nilpotent splitting, independent of [`drazin`].
///
/// With `k = i(A)`, `C^n = R(A^k) (+) N(A^k)`; in a basis adapted to that
/// splitting `A = diag(C, N)` with `C` invertible and `N` nilpotent, and
/// `A^D = P diag(C^-1, 0) P^-1`.
pub fn oracle_drazin(a: &Matrix) -> Result<DrazinData> {
    let n = a.square_size("oracle_drazin")?;
    let k = index_of(a)?;
    let ak = a.pow(k as u32)?;
    let mut basis = ak.column_space();
    let r = basis.len();
    basis.extend(ak.null_space());
    let p = Matrix::from_columns(n, &basis);
    let p_inv = p
        .inverse()
        .unwrap_or_else(|_| panic!("range and kernel of A^{k} do not complement for {a}"));
    let block = &(&p_inv * a) * &p;
    let off_diagonal_zero = (0..n).all(|i| (0..n).all(|j| (i < r) == (j < r) || block[(i, j)] == GaussianRational::default()));
    assert!(off_diagonal_zero, "core-nilpotent splitting is not A-invariant for {a}");

    let mut core_inv = Matrix::zeros(n, n);
    if r > 0 {
        let c_inv = block
            .submatrix(0, 0, r, r)
            .inverse()
            .unwrap_or_else(|_| panic!("core block singular for {a}"));
        for i in 0..r {
            for j in 0..r {
                core_inv[(i, j)] = c_inv[(i, j)].clone();
            }
        }
    }
    let dinv = &(&p * &core_inv) * &p_inv;
    Ok(DrazinData {
        spectral_idempotent: (a * &dinv).identity_minus(),
        dinv,
        index: k,
    })
}

/// Basis of `comm(A) = {X : XA = AX}`, from the null space of the `n^2 x n^2`
/// linear system `XA - AX = 0`.
pub fn commutant_basis(a: &Matrix) -> Result<Vec<Matrix>> {
    let n = a.square_size("commutant_basis")?;
    // Unknown X[p][q] sits at column p*n + q; equation (i, j) at row i*n + j.
    let mut system = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                // (XA)_ij = sum_k X_ik A_kj
                system[(row, i * n + k)] += &a[(k, j)];
                // (AX)_ij = sum_k A_ik X_kj
                system[(row, k * n + j)] -= &a[(i, k)];
            }
        }
    }
    Ok(system
        .null_space()
        .into_iter()
        .map(|v| Matrix::from_fn(n, n, |p, q| v[p * n + q].clone()))
        .collect())
}

/// Seeded sampler of random commutant elements: integer combinations of the
/// commutant basis with coefficients in `-3..=3`.
pub struct CommutantSampler {
    basis: Vec<Matrix>,
    size: usize,
    rng: ChaCha8Rng,
}

impl CommutantSampler {
    pub fn new(a: &Matrix, seed: u64) -> Result<Self> {
        Ok(Self {
            basis: commutant_basis(a)?,
            size: a.rows(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn sample(&mut self) -> Matrix {
        let mut s = Matrix::zeros(self.size, self.size);
        for b in &self.basis {
            let coeff: i64 = self.rng.gen_range(-3..=3);
            if coeff != 0 {
                s = &s + &b.scale(&GaussianRational::from_int(coeff));
            }
        }
        s
    }
}

pub fn random_commutant_element(a: &Matrix, seed: u64) -> Result<Matrix> {
    Ok(CommutantSampler::new(a, seed)?.sample())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nil2() -> Matrix {
        Matrix::from_ints(&[[0, 1], [0, 0]])
    }

    #[test]
    fn index_examples() {
        assert_eq!(index_of(&Matrix::identity(2)).unwrap(), 0);
        assert_eq!(index_of(&nil2()).unwrap(), 2);
        assert_eq!(index_of(&Matrix::from_ints(&[[1, 0], [0, 0]])).unwrap(), 1);
        assert_eq!(index_of(&Matrix::zeros(3, 3)).unwrap(), 1);
        assert!(index_of(&Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn drazin_examples() {
        let d = drazin(&Matrix::identity(2)).unwrap();
        assert_eq!(d.dinv, Matrix::identity(2));
        assert_eq!(d.index, 0);
        assert!(d.spectral_idempotent.is_zero());

        let d = drazin(&nil2()).unwrap();
        assert!(d.dinv.is_zero());
        assert_eq!(d.index, 2);
        assert_eq!(d.spectral_idempotent, Matrix::identity(2));

        let fib = Matrix::from_ints(&[[1, 1], [1, 0]]);
        let d = drazin(&fib).unwrap();
        assert_eq!(d.dinv, Matrix::from_ints(&[[0, 1], [1, -1]]));
        assert_eq!(d.dinv, fib.inverse().unwrap());
        assert_eq!(d.index, 0);
    }

    #[test]
    fn drazin_mixed_core_and_nilpotent() {
        // diag(2) (+) 3x3 Jordan block at 0
        let a = Matrix::from_ints(&[[2, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]]);
        let d = drazin(&a).unwrap();
        assert_eq!(d.index, 3);
        assert_eq!(d.dinv, Matrix::block_diag(&[&Matrix::new(1, 1, vec![GaussianRational::frac(1, 2)]).unwrap(), &Matrix::zeros(3, 3)]));
        assert_eq!(oracle_drazin(&a).unwrap(), d);
    }

    #[test]
    fn group_inverse_examples() {
        assert_eq!(group_inverse(&Matrix::identity(2)).unwrap(), Matrix::identity(2));
        assert_eq!(group_inverse(&nil2()), Err(Error::NoGroupInverse { index: 2 }));
        let e = Matrix::from_ints(&[[1, 0], [0, 0]]);
        assert_eq!(group_inverse(&e).unwrap(), e);
    }

    #[test]
    fn nilpotency() {
        assert!(is_nilpotent(&Matrix::zeros(2, 2)).unwrap());
        assert!(is_nilpotent(&nil2()).unwrap());
        assert!(!is_nilpotent(&Matrix::identity(2)).unwrap());
        assert_eq!(nilpotency_index(&nil2()), Some(2));
        assert_eq!(nilpotency_index(&Matrix::identity(2)), None);
    }

    #[test]
    fn commutant_examples() {
        for seed in 0..5 {
            let s = random_commutant_element(&Matrix::identity(2), seed).unwrap();
            assert!(s.commutes_with(&Matrix::identity(2)));
        }
        assert_eq!(commutant_basis(&Matrix::identity(2)).unwrap().len(), 4);

        let diag = Matrix::from_ints(&[[1, 0], [0, 2]]);
        for seed in 0..5 {
            let s = random_commutant_element(&diag, seed).unwrap();
            assert!(s.commutes_with(&diag));
            assert!(s[(0, 1)] == GaussianRational::default() && s[(1, 0)] == GaussianRational::default());
        }

        for seed in 0..5 {
            let s = random_commutant_element(&nil2(), seed).unwrap();
            assert_eq!(s[(0, 0)], s[(1, 1)]);
            assert_eq!(s[(1, 0)], GaussianRational::default());
        }
        assert_eq!(commutant_basis(&nil2()).unwrap().len(), 2);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_drazin(&Matrix::identity(2)).unwrap().dinv, Matrix::identity(2));
        assert!(oracle_drazin(&nil2()).unwrap().dinv.is_zero());
    }
}
