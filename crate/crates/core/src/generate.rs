//! Seed-deterministic corpora of quadruples satisfying the four side conditions.
//!
//! Constructions keep entries small: integer entries in `-3..=3` before any
//! solve, and similarity transforms by unimodular matrices (determinant a
//! unit of Z[i]) so that inverses stay integral.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{product, GaussianRational, Matrix};
use crate::error::{Error, Result};
use crate::jacobson::{build_cor22, check_conditions, Quadruple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// The fixed 2x2 instance with `c = 0`, `d = a`.
    #[serde(rename = "example_3_6")]
    #[value(name = "example_3_6")]
    Example36,
    /// `d = a`, `c = b`: the conditions hold identically.
    #[value(name = "classic")]
    Classic,
    /// `acd = dbd`, `dba = aca`, with `c` solved from the linear system.
    #[value(name = "cor22")]
    Cor22,
    /// `ab = ac`, `d = a`.
    #[value(name = "cor23_lift")]
    Cor23Lift,
    /// Example block padded with blocks where `1 - bd` is nilpotent of index >= 2.
    #[value(name = "zero_padded_nilpotent")]
    ZeroPaddedNilpotent,
    /// Direct sums of instances from the other families.
    #[value(name = "block_diagonal_mix")]
    BlockDiagonalMix,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Example36,
        Family::Classic,
        Family::Cor22,
        Family::Cor23Lift,
        Family::ZeroPaddedNilpotent,
        Family::BlockDiagonalMix,
    ];

    /// The randomized families.
    pub const RANDOM: [Family; 5] = [
        Family::Classic,
        Family::Cor22,
        Family::Cor23Lift,
        Family::ZeroPaddedNilpotent,
        Family::BlockDiagonalMix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Example36 => "example_3_6",
            Family::Classic => "classic",
            Family::Cor22 => "cor22",
            Family::Cor23Lift => "cor23_lift",
            Family::ZeroPaddedNilpotent => "zero_padded_nilpotent",
            Family::BlockDiagonalMix => "block_diagonal_mix",
        }
    }
}

pub const DEFAULT_MAX_ATTEMPTS: usize = 200;

fn default_max_attempts() -> usize {
    DEFAULT_MAX_ATTEMPTS
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub size: usize,
    pub seed: u64,
    pub count: usize,
    /// Bound on construction attempts per emitted instance.
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize, seed: u64, count: usize) -> Self {
        Self {
            family,
            size,
            seed,
            count,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.size) {
            return Err(Error::InvalidArgument(format!("size must be in 1..=8, got {}", self.size)));
        }
        if self.count == 0 {
            return Err(Error::InvalidArgument("count must be positive".into()));
        }
        Ok(())
    }
}

/// A generated corpus file: header plus instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub version: u32,
    pub spec: GeneratorSpec,
    pub instances: Vec<Quadruple>,
}

impl Corpus {
    pub fn generate(spec: GeneratorSpec) -> Result<Self> {
        let instances = gen_family(&spec)?;
        Ok(Self {
            version: 1,
            spec,
            instances,
        })
    }
}

/// `a = [[1,1],[1,0]]`, `b = [[1,-1],[0,0]]`, `c = 0`, `d = a`.
pub fn gen_example_3_6() -> Quadruple {
    let a = Matrix::from_ints(&[[1, 1], [1, 0]]);
    let b = Matrix::from_ints(&[[1, -1], [0, 0]]);
    Quadruple::lift_triple(a, b, Matrix::zeros(2, 2)).expect("2x2 triple")
}

/// Generates `spec.count` instances (a single instance for `example_3_6`),
/// each re-validated against the side conditions before emission.
pub fn gen_family(spec: &GeneratorSpec) -> Result<Vec<Quadruple>> {
    spec.validate()?;
    if spec.family == Family::Example36 {
        return Ok(vec![gen_example_3_6()]);
    }
    let stream = Family::ALL.iter().position(|&f| f == spec.family).unwrap() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream << 8 | spec.size as u64);
    let mut g = Builder { rng };

    let mut out = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let mut emitted = None;
        for _ in 0..spec.max_attempts {
            if let Some(q) = g.family(spec.family, spec.size) {
                if check_conditions(&q).all_hold {
                    emitted = Some(q);
                    break;
                }
            }
        }
        match emitted {
            Some(q) => out.push(q),
            None => {
                return Err(Error::GenerationExhausted {
                    family: spec.family.name().to_string(),
                    attempts: spec.max_attempts,
                })
            }
        }
    }
    Ok(out)
}

/// One corpus over several families and sizes, `count` instances per pair.
pub fn mixed_corpus(families: &[Family], sizes: impl IntoIterator<Item = usize> + Clone, count: usize, seed: u64) -> Result<Vec<Quadruple>> {
    let mut all = Vec::new();
    for &family in families {
        for size in sizes.clone() {
            all.extend(gen_family(&GeneratorSpec::new(family, size, seed, count))?);
        }
    }
    Ok(all)
}

fn int(n: i64) -> GaussianRational {
    GaussianRational::from_int(n)
}

struct Builder {
    rng: ChaCha8Rng,
}

impl Builder {
    fn family(&mut self, family: Family, n: usize) -> Option<Quadruple> {
        match family {
            Family::Example36 => Some(gen_example_3_6()),
            Family::Classic => Some(self.classic(n)),
            Family::Cor22 => self.cor22(n),
            Family::Cor23Lift => Some(self.cor23_lift(n)),
            Family::ZeroPaddedNilpotent => Some(self.zero_padded_nilpotent(n)),
            Family::BlockDiagonalMix => self.block_diagonal_mix(n),
        }
    }

    fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    fn random_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| int(self.rng.gen_range(-3..=3)))
    }

    fn upper_triangular(&mut self, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i <= j { int(self.rng.gen_range(-3..=3)) } else { int(0) })
    }

    /// A matrix with unit determinant in Z[i] and its inverse, built from a few
    /// elementary row operations. With `gaussian` the multipliers may be `±i`.
    fn unimodular(&mut self, n: usize, gaussian: bool) -> (Matrix, Matrix) {
        let mut q = Matrix::identity(n);
        if n == 1 {
            if self.coin() {
                q = q.scale(&int(-1));
            }
        } else {
            for _ in 0..=n {
                let i = self.rng.gen_range(0..n);
                let mut j = self.rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let k = if gaussian && self.coin() {
                    if self.coin() {
                        GaussianRational::i()
                    } else {
                        -GaussianRational::i()
                    }
                } else {
                    int(*[-1, 1, 2].choose(&mut self.rng).unwrap())
                };
                for col in 0..n {
                    let delta = &k * &q[(j, col)];
                    q[(i, col)] += &delta;
                }
            }
        }
        let inv = q.inverse().expect("unimodular");
        (q, inv)
    }

    /// Nonsingular `r x r` integer matrix: unimodular times a diagonal of
    /// nonzero small integers.
    fn invertible(&mut self, r: usize) -> Matrix {
        let (u, _) = self.unimodular(r, false);
        let diag = Matrix::from_fn(r, r, |i, j| {
            if i == j {
                int(*[-2, -1, 1, 2, 3].choose(&mut self.rng).unwrap())
            } else {
                int(0)
            }
        });
        &u * &diag
    }

    /// Shift matrix with one Jordan block of size `k` at 0, padded with zeros.
    fn jordan_nilpotent(m: usize, k: usize) -> Matrix {
        Matrix::from_fn(m, m, |i, j| if j == i + 1 && j < k { int(1) } else { int(0) })
    }

    /// Singular `r x r` matrix `S diag(N, H) S^-1` with `N` nilpotent and `H`
    /// invertible; used as the prescribed value of `1 - bd` on a block.
    fn spectral_target(&mut self, r: usize) -> Matrix {
        let m = self.rng.gen_range(1..=r);
        let k = self.rng.gen_range(1..=m).max(m.min(2));
        let nil = Self::jordan_nilpotent(m, k);
        let g = if m < r {
            let h = self.invertible(r - m);
            Matrix::block_diag(&[&nil, &h])
        } else {
            nil
        };
        let (s, s_inv) = self.unimodular(r, false);
        product(&[&s, &g, &s_inv])
    }

    fn classic(&mut self, n: usize) -> Quadruple {
        let (a, b) = if self.coin() {
            (self.random_matrix(n, n), self.random_matrix(n, n))
        } else {
            // ba = 1 - G with G singular.
            let (a, a_inv) = self.unimodular(n, false);
            let g = self.spectral_target(n);
            (a, &g.identity_minus() * &a_inv)
        };
        Quadruple::new(a.clone(), b.clone(), b, a).expect("square")
    }

    /// `a = Q1 diag(A1, 0) Q2` of rank `r`, with `b = Q2^-1 M Q1^-1`.
    /// Optionally `M11 = (1 - G) W^-1` so that `b a w` has an eigenvalue-1
    /// block, where `w = Q2^-1 diag(W, *) Q2`.
    fn rank_split(&mut self, n: usize, r: usize, w_block: &Matrix, structured: bool) -> Split {
        let (q1, q1_inv) = self.unimodular(n, false);
        let (q2, q2_inv) = self.unimodular(n, false);
        let (a1, _) = self.unimodular(r, false);
        let core = Matrix::block_diag(&[&a1, &Matrix::zeros(n - r, n - r)]);
        let a = product(&[&q1, &core, &q2]);

        let mut m = self.random_matrix(n, n);
        if structured {
            let g = self.spectral_target(r);
            let aw_inv = (&a1 * w_block).inverse().expect("unimodular product");
            let m11 = &g.identity_minus() * &aw_inv;
            for i in 0..r {
                for j in 0..r {
                    m[(i, j)] = m11[(i, j)].clone();
                }
            }
        }
        let b = product(&[&q2_inv, &m, &q1_inv]);
        Split { a, b, q2, q2_inv }
    }

    fn cor22(&mut self, n: usize) -> Option<Quadruple> {
        let (a, b, d) = if self.rng.gen_bool(1.0 / 3.0) {
            // Unstructured: the linear system for c may be inconsistent.
            (self.upper_triangular(n), self.random_matrix(n, n), self.upper_triangular(n))
        } else {
            let r = self.rng.gen_range(1..=n);
            let (w1, _) = self.unimodular(r, false);
            let structured = self.coin();
            let split = self.rank_split(n, r, &w1, structured);
            let w = if r < n {
                let (w2, _) = self.unimodular(n - r, false);
                Matrix::block_diag(&[&w1, &w2])
            } else {
                w1
            };
            // d = a u with u = Q2^-1 diag(W1, W2) Q2, so c = u b solves the system.
            let u = product(&[&split.q2_inv, &w, &split.q2]);
            let d = &split.a * &u;
            (split.a, split.b, d)
        };
        let c = self.solve_cor22_c(&a, &b, &d)?;
        let q = Quadruple::new(a, b, c, d).ok()?;
        debug_assert!(build_cor22(&q.a, &q.b, &q.c, &q.d).map(|r| r.all_hold).unwrap_or(false));
        Some(q)
    }

    /// Solves `a c d = dbd`, `a c a = dba` for `c`, returning a random point of
    /// the solution set, or `None` when inconsistent.
    fn solve_cor22_c(&mut self, a: &Matrix, b: &Matrix, d: &Matrix) -> Option<Matrix> {
        let n = a.rows();
        // vec(c) index k*n + l; equation blocks for (i, j).
        let mut system = Matrix::zeros(2 * n * n, n * n);
        let mut rhs = Vec::with_capacity(2 * n * n);
        let dbd = product(&[d, b, d]);
        let dba = product(&[d, b, a]);
        for (block, (right, target)) in [(d, &dbd), (a, &dba)].into_iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let row = block * n * n + i * n + j;
                    for k in 0..n {
                        if a[(i, k)] == int(0) {
                            continue;
                        }
                        for l in 0..n {
                            system[(row, k * n + l)] = &a[(i, k)] * &right[(l, j)];
                        }
                    }
                    rhs.push(target[(i, j)].clone());
                }
            }
        }
        let (x, kernel) = system.solve(&rhs)?;
        let mut c = Matrix::from_fn(n, n, |k, l| x[k * n + l].clone());
        for v in kernel {
            let coeff: i64 = self.rng.gen_range(-2..=2);
            if coeff != 0 {
                let k = Matrix::from_fn(n, n, |p, q| v[p * n + q].clone());
                c = &c + &k.scale(&int(coeff));
            }
        }
        Some(c)
    }

    fn cor23_lift(&mut self, n: usize) -> Quadruple {
        let r = if n == 1 { 1 } else { self.rng.gen_range(1..n) };
        let identity = Matrix::identity(r);
        let structured = self.coin();
        let split = self.rank_split(n, r, &identity, structured);
        // k with a k = 0: top r rows of Q2 k vanish.
        let tail = Matrix::from_fn(n, n, |i, _| if i < r { int(0) } else { int(self.rng.gen_range(-3..=3)) });
        let k = &split.q2_inv * &tail;
        let c = &split.b + &k;
        Quadruple::lift_triple(split.a, split.b, c).expect("square")
    }

    /// Classic block `(u, (1-N)u^-1, (1-N)u^-1, u)` whose `1 - bd = N` is
    /// nilpotent of index `k`.
    fn nilpotent_block(&mut self, m: usize) -> Quadruple {
        let k = if m >= 2 { self.rng.gen_range(2..=m) } else { 1 };
        let nil = Self::jordan_nilpotent(m, k);
        let (u, u_inv) = self.unimodular(m, false);
        let b = &nil.identity_minus() * &u_inv;
        Quadruple::new(u.clone(), b.clone(), b, u).expect("square")
    }

    fn zero_padded_nilpotent(&mut self, n: usize) -> Quadruple {
        let q = if n >= 4 {
            gen_example_3_6().direct_sum(&self.nilpotent_block(n - 2))
        } else {
            self.nilpotent_block(n)
        };
        let gaussian = self.coin();
        let (s, s_inv) = self.unimodular(n, gaussian);
        q.conjugated(&s, &s_inv)
    }

    fn block_diagonal_mix(&mut self, n: usize) -> Option<Quadruple> {
        let parts: &[Family] = &[Family::Classic, Family::Cor22, Family::Cor23Lift, Family::ZeroPaddedNilpotent];
        if n == 1 {
            let f = *parts.choose(&mut self.rng).unwrap();
            return self.family(f, 1);
        }
        let s1 = self.rng.gen_range(1..n);
        let pick = |g: &mut Self, size: usize| {
            let f = if size == 2 && g.rng.gen_bool(0.2) {
                Family::Example36
            } else {
                *parts.choose(&mut g.rng).unwrap()
            };
            g.family(f, size)
        };
        let left = pick(self, s1)?;
        let right = pick(self, n - s1)?;
        let gaussian = self.coin();
        let (s, s_inv) = self.unimodular(n, gaussian);
        Some(left.direct_sum(&right).conjugated(&s, &s_inv))
    }
}

struct Split {
    a: Matrix,
    b: Matrix,
    q2: Matrix,
    q2_inv: Matrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drazin::index_of;
    use crate::jacobson::build_cor23;

    #[test]
    fn example_instance() {
        let q = gen_example_3_6();
        assert_eq!(q.a, Matrix::from_ints(&[[1, 1], [1, 0]]));
        assert_eq!(q.b, Matrix::from_ints(&[[1, -1], [0, 0]]));
        assert!(q.c.is_zero());
        assert_eq!(q.d, q.a);
        assert!(check_conditions(&q).all_hold);
        assert!(!build_cor22(&q.a, &q.b, &q.c, &q.d).unwrap().all_hold);
    }

    #[test]
    fn classic_size_two() {
        let qs = gen_family(&GeneratorSpec::new(Family::Classic, 2, 7, 5)).unwrap();
        assert_eq!(qs.len(), 5);
        for q in &qs {
            assert_eq!(q.d, q.a);
            assert_eq!(q.c, q.b);
            assert!(check_conditions(q).all_hold);
        }
    }

    #[test]
    fn cor23_instances_have_ab_eq_ac() {
        for q in gen_family(&GeneratorSpec::new(Family::Cor23Lift, 4, 3, 10)).unwrap() {
            assert_eq!(&q.a * &q.b, &q.a * &q.c);
            assert!(build_cor23(&q.a, &q.b, &q.c).unwrap().all_hold);
        }
    }

    #[test]
    fn cor22_instances_satisfy_premise() {
        for size in 1..=4 {
            for q in gen_family(&GeneratorSpec::new(Family::Cor22, size, 11, 8)).unwrap() {
                assert!(build_cor22(&q.a, &q.b, &q.c, &q.d).unwrap().all_hold);
            }
        }
    }

    #[test]
    fn zero_padded_reaches_index_two() {
        let qs = gen_family(&GeneratorSpec::new(Family::ZeroPaddedNilpotent, 4, 0, 5)).unwrap();
        assert!(qs.iter().any(|q| index_of(&q.alpha()).unwrap() >= 2));
    }

    #[test]
    fn every_family_and_size_validates() {
        for family in Family::ALL {
            for size in 1..=5 {
                let qs = gen_family(&GeneratorSpec::new(family, size, 5, 3)).unwrap();
                assert!(qs.iter().all(|q| check_conditions(q).all_hold), "{family:?} {size}");
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(gen_family(&GeneratorSpec::new(Family::Classic, 0, 0, 1)).is_err());
        assert!(gen_family(&GeneratorSpec::new(Family::Classic, 9, 0, 1)).is_err());
        assert!(gen_family(&GeneratorSpec::new(Family::Classic, 2, 0, 0)).is_err());
        let mut spec = GeneratorSpec::new(Family::Classic, 2, 0, 1);
        spec.max_attempts = 0;
        assert!(matches!(gen_family(&spec), Err(Error::GenerationExhausted { .. })));
    }

    #[test]
    fn deterministic_serialization() {
        let spec = GeneratorSpec::new(Family::BlockDiagonalMix, 4, 42, 4);
        let one = serde_json::to_string(&Corpus::generate(spec.clone()).unwrap()).unwrap();
        let two = serde_json::to_string(&Corpus::generate(spec.clone()).unwrap()).unwrap();
        assert_eq!(one, two);
        let back: Corpus = serde_json::from_str(&one).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), one);
        let other = serde_json::to_string(&Corpus::generate(GeneratorSpec { seed: 43, ..spec }).unwrap()).unwrap();
        assert_ne!(one, other);
    }
}
