//! Side-condition checks and transfer formulas for generalized Jacobson's lemma.
//!
//! For a quadruple `(a, b, c, d)` of square matrices satisfying
//!
//! ```text
//! (ac)^2 = (db)(ac),   (db)^2 = (ac)(db),
//! b(ac)a = b(db)a,     c(ac)d = c(db)d,
//! ```
//!
//! the Drazin inverse of `beta = 1 - ac` is obtained from that of
//! `alpha = 1 - bd` as
//!
//! ```text
//! beta^D = [1 - d p (1 - p alpha (1 + bd))^-1 bac](1 + ac) + d alpha^D bac,
//! ```
//!
//! with `p = alpha^pi` the spectral idempotent of `alpha`. Every transfer
//! evaluator here also computes `beta^D` directly and reports whether the two
//! agree exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::{product, GaussianRational, Matrix};
use crate::drazin::{drazin, DrazinData};
use crate::error::{Error, Result};

/// Four square matrices of one common size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadruple {
    pub a: Matrix,
    pub b: Matrix,
    pub c: Matrix,
    pub d: Matrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadrupleRepr {
    a: Matrix,
    b: Matrix,
    c: Matrix,
    d: Option<Matrix>,
}

impl<'de> Deserialize<'de> for Quadruple {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = QuadrupleRepr::deserialize(deserializer)?;
        match r.d {
            Some(d) => Quadruple::new(r.a, r.b, r.c, d),
            None => Quadruple::lift_triple(r.a, r.b, r.c),
        }
        .map_err(D::Error::custom)
    }
}

impl Quadruple {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Result<Self> {
        let n = a.square_size("quadruple")?;
        for m in [&b, &c, &d] {
            let k = m.square_size("quadruple")?;
            if k != n {
                return Err(Error::DimensionMismatch {
                    op: "quadruple",
                    left_rows: n,
                    left_cols: n,
                    right_rows: k,
                    right_cols: k,
                });
            }
        }
        Ok(Self { a, b, c, d })
    }

    /// `(a, b, c, a)`: the triple form, whose conditions read
    /// `(ac)^2 = (ab)(ac)` and so on.
    pub fn lift_triple(a: Matrix, b: Matrix, c: Matrix) -> Result<Self> {
        let d = a.clone();
        Self::new(a, b, c, d)
    }

    pub fn zero(n: usize) -> Self {
        let z = Matrix::zeros(n, n);
        Self {
            a: z.clone(),
            b: z.clone(),
            c: z.clone(),
            d: z,
        }
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// `1 - bd`.
    pub fn alpha(&self) -> Matrix {
        (&self.b * &self.d).identity_minus()
    }

    /// `1 - ac`.
    pub fn beta(&self) -> Matrix {
        (&self.a * &self.c).identity_minus()
    }

    /// `(d, c, b, a)`; maps the four side conditions onto themselves.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.a.clone(),
        }
    }

    /// Simultaneous similarity `m -> s m s^-1`, which preserves every side condition.
    pub fn conjugated(&self, s: &Matrix, s_inv: &Matrix) -> Self {
        let conj = |m: &Matrix| product(&[s, m, s_inv]);
        Self {
            a: conj(&self.a),
            b: conj(&self.b),
            c: conj(&self.c),
            d: conj(&self.d),
        }
    }

    /// Blockwise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            a: Matrix::block_diag(&[&self.a, &other.a]),
            b: Matrix::block_diag(&[&self.b, &other.b]),
            c: Matrix::block_diag(&[&self.c, &other.c]),
            d: Matrix::block_diag(&[&self.d, &other.d]),
        }
    }
}

/// Truth value and `LHS - RHS` residual of each side condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub cond1: bool,
    pub cond2: bool,
    pub cond3: bool,
    pub cond4: bool,
    pub residual1: Matrix,
    pub residual2: Matrix,
    pub residual3: Matrix,
    pub residual4: Matrix,
    pub all_hold: bool,
}

impl ConditionReport {
    fn from_residuals([r1, r2, r3, r4]: [Matrix; 4]) -> Self {
        let (c1, c2, c3, c4) = (r1.is_zero(), r2.is_zero(), r3.is_zero(), r4.is_zero());
        Self {
            cond1: c1,
            cond2: c2,
            cond3: c3,
            cond4: c4,
            residual1: r1,
            residual2: r2,
            residual3: r3,
            residual4: r4,
            all_hold: c1 && c2 && c3 && c4,
        }
    }

    pub fn failing(&self) -> Vec<&'static str> {
        [
            (self.cond1, "(ac)^2 = (db)(ac)"),
            (self.cond2, "(db)^2 = (ac)(db)"),
            (self.cond3, "b(ac)a = b(db)a"),
            (self.cond4, "c(ac)d = c(db)d"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect()
    }
}

pub fn check_conditions(q: &Quadruple) -> ConditionReport {
    let Quadruple { a, b, c, d } = q;
    let ac = a * c;
    let db = d * b;
    ConditionReport::from_residuals([
        &(&ac * &ac) - &(&db * &ac),
        &(&db * &db) - &(&ac * &db),
        &product(&[b, &ac, a]) - &product(&[b, &db, a]),
        &product(&[c, &ac, d]) - &product(&[c, &db, d]),
    ])
}

fn require_conditions(q: &Quadruple) -> Result<ConditionReport> {
    let report = check_conditions(q);
    if report.all_hold {
        Ok(report)
    } else {
        Err(Error::ConditionsViolated(report.failing().join(", ")))
    }
}

/// A stronger premise that implies the four side conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PremiseReport {
    pub identities: Vec<String>,
    pub holds: Vec<bool>,
    pub residuals: Vec<Matrix>,
    pub all_hold: bool,
    /// The four side conditions on the (possibly lifted) quadruple.
    pub conditions: ConditionReport,
    /// `false` only if the premise holds while the side conditions fail.
    pub implication_holds: bool,
}

impl PremiseReport {
    fn new(checks: Vec<(&str, Matrix, Matrix)>, conditions: ConditionReport) -> Self {
        let mut identities = Vec::new();
        let mut holds = Vec::new();
        let mut residuals = Vec::new();
        for (name, lhs, rhs) in checks {
            let r = &lhs - &rhs;
            identities.push(name.to_string());
            holds.push(r.is_zero());
            residuals.push(r);
        }
        let all_hold = holds.iter().all(|&h| h);
        Self {
            identities,
            holds,
            residuals,
            implication_holds: !all_hold || conditions.all_hold,
            all_hold,
            conditions,
        }
    }
}

/// Premise `acd = dbd`, `dba = aca`.
pub fn build_cor22(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<PremiseReport> {
    let q = Quadruple::new(a.clone(), b.clone(), c.clone(), d.clone())?;
    Ok(PremiseReport::new(
        vec![
            ("acd = dbd", product(&[a, c, d]), product(&[d, b, d])),
            ("dba = aca", product(&[d, b, a]), product(&[a, c, a])),
        ],
        check_conditions(&q),
    ))
}

/// Triple premise `(aba)x = (aca)x` and `x(aba) = x(aca)` for `x` in `{b, c}`;
/// the side conditions are checked on `(a, b, c, a)`.
pub fn build_cor23(a: &Matrix, b: &Matrix, c: &Matrix) -> Result<PremiseReport> {
    let q = Quadruple::lift_triple(a.clone(), b.clone(), c.clone())?;
    let aba = product(&[a, b, a]);
    let aca = product(&[a, c, a]);
    Ok(PremiseReport::new(
        vec![
            ("(aba)b = (aca)b", &aba * b, &aca * b),
            ("b(aba) = b(aca)", b * &aba, b * &aca),
            ("(aba)c = (aca)c", &aba * c, &aca * c),
            ("c(aba) = c(aca)", c * &aba, c * &aca),
        ],
        check_conditions(&q),
    ))
}

/// `(1 - ba)^-1 = 1 + b (1 - ab)^-1 a`, checked against a direct inversion.
/// Works for rectangular `a` (n x m) and `b` (m x n).
pub fn jacobson_inverse(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let ab = a.try_mul(b)?;
    let ba = b.try_mul(a)?;
    let one_minus_ba = ba.identity_minus();
    let inv_ab = match ab.identity_minus().inverse() {
        Ok(m) => m,
        Err(Error::SingularMatrix) => {
            if one_minus_ba.inverse().is_ok() {
                return Err(Error::Falsified("1-ab singular but 1-ba invertible".into()));
            }
            return Err(Error::SingularMatrix);
        }
        Err(e) => return Err(e),
    };
    let result = product(&[b, &inv_ab, a]).identity_plus();
    let direct = one_minus_ba
        .inverse()
        .map_err(|_| Error::Falsified("1-ab invertible but 1-ba singular".into()))?;
    if result != direct {
        return Err(Error::Falsified("(1-ba)^-1 = 1 + b(1-ab)^-1 a".into()));
    }
    Ok(result)
}

/// Comparison of `1 + b (1-ab)^D a` against `(1-ba)^D`.
///
/// The two agree exactly when `1 - ab` is invertible. When it is singular the
/// left side acts as the identity on the eigenvalue-1 part of `ba`, where
/// `(1-ba)^D` vanishes, so they differ (e.g. `a = b = I`: `I` vs `0`).
/// `corrected` evaluates the transfer formula on the quadruple `(b, a, a, b)`,
/// which is valid in every case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZhuangOutcome {
    pub printed: Matrix,
    pub direct: Matrix,
    pub corrected: Matrix,
    pub one_minus_ab_invertible: bool,
    pub printed_agrees: bool,
    pub corrected_agrees: bool,
}

pub fn zhuang_transfer(a: &Matrix, b: &Matrix) -> Result<ZhuangOutcome> {
    let q = Quadruple::new(b.clone(), a.clone(), a.clone(), b.clone())?;
    let one_minus_ab = (a * b).identity_minus();
    let ab_data = drazin(&one_minus_ab)?;
    let printed = product(&[b, &ab_data.dinv, a]).identity_plus();
    let direct = drazin(&(b * a).identity_minus())?.dinv;
    // q.alpha() = 1 - ab, q.beta() = 1 - ba
    let corrected = transfer_formula(&q, &ab_data)?;
    Ok(ZhuangOutcome {
        printed_agrees: printed == direct,
        corrected_agrees: corrected == direct,
        one_minus_ab_invertible: ab_data.index == 0,
        printed,
        direct,
        corrected,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TransferMode {
    Gdrazin,
    Drazin,
    Group,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferOutcome {
    pub mode: TransferMode,
    /// `1 - ac`
    pub beta: Matrix,
    /// Data for `beta` with `dinv` taken from the transfer formula.
    pub beta_drazin: DrazinData,
    /// Data for `beta` computed directly.
    pub direct: DrazinData,
    pub agrees: bool,
    pub alpha_index: usize,
    pub beta_index: usize,
    /// `alpha^pi != 0`, i.e. the `(1 - p alpha (1+bd))^-1` term is live.
    pub alpha_pi_nonzero: bool,
}

/// `y = [1 - d p (1 - p alpha (1+bd))^-1 bac](1 + ac) + d x bac` with
/// `p = alpha^pi`, `x = alpha^D` taken from `alpha_data`.
pub fn transfer_formula(q: &Quadruple, alpha_data: &DrazinData) -> Result<Matrix> {
    let Quadruple { a, b, c, d } = q;
    let ac = a * c;
    let bd = b * d;
    let bac = b * &ac;
    let alpha = bd.identity_minus();
    let p = &alpha_data.spectral_idempotent;
    let inner = product(&[p, &alpha, &bd.identity_plus()]).identity_minus();
    let inner_inv = inner.inverse().map_err(|e| match e {
        Error::SingularMatrix => Error::InternalInvertibilityFailure,
        e => e,
    })?;
    let head = product(&[d, p, &inner_inv, &bac]).identity_minus();
    Ok(&(&head * &ac.identity_plus()) + &product(&[d, &alpha_data.dinv, &bac]))
}

fn outcome(mode: TransferMode, q: &Quadruple, alpha_data: &DrazinData) -> Result<TransferOutcome> {
    let y = transfer_formula(q, alpha_data)?;
    let beta = q.beta();
    let direct = drazin(&beta)?;
    let beta_drazin = DrazinData {
        spectral_idempotent: (&beta * &y).identity_minus(),
        index: direct.index,
        dinv: y,
    };
    Ok(TransferOutcome {
        mode,
        agrees: beta_drazin.dinv == direct.dinv,
        alpha_index: alpha_data.index,
        beta_index: direct.index,
        alpha_pi_nonzero: !alpha_data.spectral_idempotent.is_zero(),
        beta,
        beta_drazin,
        direct,
    })
}

/// Generalized Drazin version of the transfer. In a matrix ring this is the
/// Drazin inverse.
pub fn transfer_gdrazin(q: &Quadruple) -> Result<TransferOutcome> {
    require_conditions(q)?;
    let alpha_data = drazin(&q.alpha())?;
    outcome(TransferMode::Gdrazin, q, &alpha_data)
}

/// Drazin version: same formula, plus the index bound in both directions,
/// `i(1-bd) <= i(1-ac) + 1` and `i(1-ac) <= i(1-bd) + 1`.
pub fn transfer_drazin(q: &Quadruple) -> Result<TransferOutcome> {
    require_conditions(q)?;
    let alpha_data = drazin(&q.alpha())?;
    let out = outcome(TransferMode::Drazin, q, &alpha_data)?;
    let (ia, ib) = (out.alpha_index, out.beta_index);
    if ia > ib + 1 || ib > ia + 1 {
        return Err(Error::Falsified(format!(
            "index bound: i(1-bd) = {ia}, i(1-ac) = {ib}"
        )));
    }
    Ok(out)
}

/// Group-inverse version; requires `i(1-bd) <= 1` and then guarantees
/// `i(1-ac) <= 1`.
pub fn transfer_group(q: &Quadruple) -> Result<TransferOutcome> {
    require_conditions(q)?;
    let alpha_data = drazin(&q.alpha())?;
    if alpha_data.index >= 2 {
        return Err(Error::NoGroupInverse {
            index: alpha_data.index,
        });
    }
    let out = outcome(TransferMode::Group, q, &alpha_data)?;
    if out.beta_index >= 2 {
        return Err(Error::Falsified(format!(
            "1-bd group invertible but i(1-ac) = {}",
            out.beta_index
        )));
    }
    Ok(out)
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `(a, b', c', d)` with
/// `c' = sum_{i=1..n} (-1)^(i+1) C(n,i) c (ac)^(i-1)` and
/// `b' = sum_{i=1..n} (-1)^(i+1) C(n,i) (bd)^(i-1) b`,
/// so that `1 - ac' = (1-ac)^n` and `1 - b'd = (1-bd)^n`.
pub fn power_instance(q: &Quadruple, n: u32) -> Result<Quadruple> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    require_conditions(q)?;
    let Quadruple { a, b, c, d } = q;
    let size = q.size();
    let ac = a * c;
    let bd = b * d;

    let mut c_new = Matrix::zeros(size, size);
    let mut b_new = Matrix::zeros(size, size);
    let mut c_term = c.clone();
    let mut b_term = b.clone();
    for i in 1..=n {
        let mut coeff = BigRational::from_integer(binomial(n, i));
        if i % 2 == 0 {
            coeff = -coeff;
        }
        let coeff = GaussianRational::real(coeff);
        c_new = &c_new + &c_term.scale(&coeff);
        b_new = &b_new + &b_term.scale(&coeff);
        if i < n {
            c_term = &c_term * &ac;
            b_term = &bd * &b_term;
        }
    }

    let out = Quadruple::new(a.clone(), b_new, c_new, d.clone())?;
    if (a * &out.c).identity_minus() != ac.identity_minus().pow(n)? {
        return Err(Error::Falsified(format!("1 - ac' = (1-ac)^{n}")));
    }
    if (&out.b * d).identity_minus() != bd.identity_minus().pow(n)? {
        return Err(Error::Falsified(format!("1 - b'd = (1-bd)^{n}")));
    }
    let report = check_conditions(&out);
    if !report.all_hold {
        return Err(Error::Falsified(format!(
            "side conditions after power {n}: {}",
            report.failing().join(", ")
        )));
    }
    Ok(out)
}
