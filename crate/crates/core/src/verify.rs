//! Property battery run by `jacobson verify` over a corpus of quadruples.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Matrix;
use crate::drazin::{drazin_equation_failures, is_nilpotent, CommutantSampler};
use crate::error::Error;
use crate::jacobson::{check_conditions, power_instance, transfer_drazin, transfer_group, Quadruple};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Commutant elements of `1 - ac` tested against the transferred inverse.
    pub commutant_samples: usize,
    /// Powers `n` fed to the power construction.
    pub max_power: u32,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            commutant_samples: 10,
            max_power: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: usize,
    /// Failing properties, comma separated.
    pub property: String,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub id: usize,
    pub size: usize,
    pub alpha_index: Option<usize>,
    pub beta_index: Option<usize>,
    pub alpha_pi_nonzero: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub total: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    /// `(i(1-bd), i(1-ac))` for every instance whose indices were computed.
    pub index_pairs: Vec<(usize, usize)>,
    pub instances: Vec<InstanceSummary>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One line per instance plus a totals line.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        for s in &self.instances {
            let idx = |i: Option<usize>| i.map_or("?".to_string(), |i| i.to_string());
            let branch = match s.alpha_pi_nonzero {
                Some(true) => "alpha^pi != 0",
                Some(false) => "alpha^pi = 0",
                None => "-",
            };
            out.push_str(&format!(
                "#{:<4} n={} i(1-bd)={} i(1-ac)={} branch: {:<13} {}\n",
                s.id,
                s.size,
                idx(s.alpha_index),
                idx(s.beta_index),
                branch,
                if s.passed { "ok" } else { "FAIL" }
            ));
        }
        for f in &self.failures {
            out.push_str(&format!("  instance {}: {} ({})\n", f.instance, f.property, f.residual));
        }
        let live = self.instances.iter().filter(|s| s.alpha_pi_nonzero == Some(true)).count();
        out.push_str(&format!(
            "{}/{} passed; {} instance(s) exercised the alpha^pi != 0 branch\n",
            self.passed, self.total, live
        ));
        out
    }
}

fn residual_summary(m: &Matrix) -> String {
    let nonzero = m.entries().iter().filter(|x| **x != Default::default()).count();
    format!("{nonzero} of {} residual entries nonzero", m.entries().len())
}

/// Runs every property on one instance.
pub fn verify_instance(id: usize, q: &Quadruple, opts: &VerifyOptions) -> (InstanceSummary, Option<Failure>) {
    let mut summary = InstanceSummary {
        id,
        size: q.size(),
        alpha_index: None,
        beta_index: None,
        alpha_pi_nonzero: None,
        passed: false,
    };
    let mut failed: Vec<String> = Vec::new();
    let mut residual = String::new();
    let mut fail = |prop: &str, detail: String| {
        failed.push(prop.to_string());
        if residual.is_empty() {
            residual = detail;
        }
    };

    let conditions = check_conditions(q);
    if !conditions.all_hold {
        fail("conditions", conditions.failing().join("; "));
    } else {
        match transfer_drazin(q) {
            Ok(out) => {
                summary.alpha_index = Some(out.alpha_index);
                summary.beta_index = Some(out.beta_index);
                summary.alpha_pi_nonzero = Some(out.alpha_pi_nonzero);
                let y = &out.beta_drazin.dinv;
                if !out.agrees {
                    fail("transfer_agreement", residual_summary(&(y - &out.direct.dinv)));
                }
                let eqs = drazin_equation_failures(&out.beta, y, out.beta_index);
                if !eqs.is_empty() {
                    fail("drazin_equations", eqs.join("; "));
                }
                let remainder = &out.beta - &(&(&out.beta * &out.beta) * y);
                if !is_nilpotent(&remainder).unwrap_or(false) {
                    fail("nilpotent_remainder", residual_summary(&remainder));
                }
                match CommutantSampler::new(&out.beta, opts.seed ^ id as u64) {
                    Ok(mut sampler) => {
                        let bad = (0..opts.commutant_samples)
                            .filter(|_| !sampler.sample().commutes_with(y))
                            .count();
                        if bad > 0 {
                            fail("double_commutant", format!("{bad} of {} samples fail to commute", opts.commutant_samples));
                        }
                    }
                    Err(e) => fail("double_commutant", e.to_string()),
                }
                match (out.alpha_index <= 1, transfer_group(q)) {
                    (true, Ok(g)) if g.agrees => {}
                    (true, Ok(g)) => fail("group_transfer", residual_summary(&(&g.beta_drazin.dinv - &g.direct.dinv))),
                    (true, Err(e)) => fail("group_transfer", e.to_string()),
                    (false, Err(Error::NoGroupInverse { .. })) => {}
                    (false, other) => fail("group_refusal", format!("expected refusal, got {other:?}")),
                }
            }
            Err(e @ Error::Falsified(_)) => fail("index_bound", e.to_string()),
            Err(e) => fail("transfer", e.to_string()),
        }
        for n in 1..=opts.max_power {
            match power_instance(q, n) {
                Ok(p) if n == 1 && p != *q => fail("power_1_identity", "n = 1 changed the quadruple".into()),
                Ok(_) => {}
                Err(e) => fail(&format!("power_{n}"), e.to_string()),
            }
        }
    }

    summary.passed = failed.is_empty();
    let failure = (!failed.is_empty()).then(|| Failure {
        instance: id,
        property: failed.join(","),
        residual,
    });
    (summary, failure)
}

/// Verifies all instances in parallel; the report is ordered by instance id.
pub fn verify_corpus(instances: &[Quadruple], opts: &VerifyOptions) -> VerifyReport {
    let results: Vec<_> = instances
        .par_iter()
        .enumerate()
        .map(|(id, q)| verify_instance(id, q, opts))
        .collect();
    let mut report = VerifyReport {
        total: instances.len(),
        passed: 0,
        failures: Vec::new(),
        index_pairs: Vec::new(),
        instances: Vec::with_capacity(instances.len()),
    };
    for (summary, failure) in results {
        if let (Some(a), Some(b)) = (summary.alpha_index, summary.beta_index) {
            report.index_pairs.push((a, b));
        }
        match failure {
            Some(f) => report.failures.push(f),
            None => report.passed += 1,
        }
        report.instances.push(summary);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::gen_example_3_6;

    #[test]
    fn example_passes_with_invertible_pair() {
        let report = verify_corpus(&[gen_example_3_6()], &VerifyOptions::default());
        assert_eq!((report.total, report.passed), (1, 1));
        assert_eq!(report.index_pairs, vec![(0, 0)]);
        assert!(report.human_summary().contains("1/1 passed"));
    }

    #[test]
    fn violated_conditions_are_reported() {
        let q = Quadruple::new(
            Matrix::from_ints(&[[1, 2], [3, 4]]),
            Matrix::from_ints(&[[0, 1], [1, 1]]),
            Matrix::from_ints(&[[2, 0], [1, 3]]),
            Matrix::from_ints(&[[1, -1], [2, 0]]),
        )
        .unwrap();
        let report = verify_corpus(&[gen_example_3_6(), q], &VerifyOptions::default());
        assert_eq!(report.total, 2);
        assert_eq!(report.passed + report.failures.len(), report.total);
        assert_eq!(report.failures[0].instance, 1);
        assert_eq!(report.failures[0].property, "conditions");
        assert_eq!(report.index_pairs.len(), 1);
    }
}
