//! Linear opinion pools.

use std::sync::Arc;

use crate::distribution::{mixture, Distribution};
use crate::error::{Error, Result};
use crate::inference::{independence, IndependenceReport};
use crate::space::{same_space, OutcomeSpace, Variable};
use crate::tolerance;

/// Named expert distributions over a common space with pooling weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PoolingProblem {
    experts: Vec<(String, Distribution)>,
    weights: Vec<f64>,
}

impl PoolingProblem {
    pub fn new(experts: Vec<(String, Distribution)>, weights: Vec<f64>) -> Result<Self> {
        let (_, first) = experts
            .first()
            .ok_or_else(|| Error::WeightInvalid("no experts".into()))?;
        for (_, d) in &experts[1..] {
            same_space(first.space(), d.space())?;
        }
        if weights.len() != experts.len() {
            return Err(Error::WeightInvalid(format!(
                "{} weights for {} experts",
                weights.len(),
                experts.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::WeightInvalid("negative weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > tolerance::NORM {
            return Err(Error::WeightInvalid(format!("weights sum to {total}")));
        }
        Ok(PoolingProblem { experts, weights })
    }

    /// Same experts, equal weights.
    pub fn equal_weights(experts: Vec<(String, Distribution)>) -> Result<Self> {
        let n = experts.len().max(1);
        Self::new(experts, vec![1.0 / n as f64; n])
    }

    pub fn experts(&self) -> &[(String, Distribution)] {
        &self.experts
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.experts[0].1.space()
    }

    fn distributions(&self) -> Vec<Distribution> {
        self.experts.iter().map(|(_, d)| d.clone()).collect()
    }
}

/// `Σ_i w_i p_i`.
pub fn linear_pool(prob: &PoolingProblem) -> Result<Distribution> {
    mixture(&prob.weights, &prob.distributions())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    pub pooled_then_marginalized: Distribution,
    pub marginalized_then_pooled: Distribution,
    /// Largest componentwise difference between the two orders.
    pub deviation: f64,
}

/// Compares pooling-then-marginalizing with marginalizing-then-pooling.
pub fn marginalization_commutes(prob: &PoolingProblem, vars: &[&str]) -> Result<CommutationReport> {
    if !prob.space().is_factorized() {
        return Err(Error::NotFactorized);
    }
    let first = linear_pool(prob)?.marginalize(vars)?;
    let marginals = prob
        .experts
        .iter()
        .map(|(_, d)| d.marginalize(vars))
        .collect::<Result<Vec<_>>>()?;
    let marginals = marginals
        .iter()
        .map(|m| m.rebase(first.space()))
        .collect::<Result<Vec<_>>>()?;
    let second = mixture(&prob.weights, &marginals)?;
    Ok(CommutationReport {
        deviation: first.max_abs_diff(&second)?,
        pooled_then_marginalized: first,
        marginalized_then_pooled: second,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationReport {
    pub pooled: Distribution,
    pub report: IndependenceReport,
}

impl PreservationReport {
    pub fn preserved(&self) -> bool {
        self.report.passed
    }
}

/// Checks whether an independence shared by every expert survives pooling.
/// With `given` the check is conditional on that variable.
pub fn independence_preserved(
    prob: &PoolingProblem,
    x: &str,
    z: &str,
    given: Option<&str>,
    tol: f64,
) -> Result<PreservationReport> {
    if !prob.space().is_factorized() {
        return Err(Error::NotFactorized);
    }
    let mut offenders = Vec::new();
    for (name, d) in &prob.experts {
        if !independence(d, x, z, given, tol)?.passed {
            offenders.push(name.clone());
        }
    }
    if !offenders.is_empty() {
        return Err(Error::PreconditionUnmet(format!(
            "experts without the independence: {}",
            offenders.join(", ")
        )));
    }
    let pooled = linear_pool(prob)?;
    let report = independence(&pooled, x, z, given, tol)?;
    Ok(PreservationReport { pooled, report })
}

/// Residence × Extraterrestrial space of the two-professor scenario.
pub fn nixon_space() -> Arc<OutcomeSpace> {
    OutcomeSpace::product(vec![
        Variable::new("Residence", &["NJ", "CA"]),
        Variable::new("Extraterrestrial", &["Yes", "No"]),
    ])
    .expect("valid product space")
}

/// The two professors' joint assessments `(p_RE, q_RE)`.
pub fn nixon_experts() -> (Distribution, Distribution) {
    let s = nixon_space();
    let p = Distribution::new(&s, vec![0.0, 0.85, 0.0, 0.15]).expect("valid");
    let q = Distribution::new(&s, vec![0.9, 0.0, 0.1, 0.0]).expect("valid");
    (p, q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NixonReport {
    pub joint_p: Distribution,
    pub joint_q: Distribution,
    pub marginal_p: Distribution,
    pub marginal_q: Distribution,
    pub weights: Vec<f64>,
    pub pooled_joint: Distribution,
    pub pooled_marginal: Distribution,
    /// Total variation between the two professors' residence marginals.
    pub marginal_distance: f64,
}

/// Pools the two joints with `weights` and reports what the residence
/// marginals alone reveal.
pub fn nixon_scenario(weights: [f64; 2]) -> Result<NixonReport> {
    let (p, q) = nixon_experts();
    let prob = PoolingProblem::new(
        vec![("P".into(), p.clone()), ("Q".into(), q.clone())],
        weights.to_vec(),
    )?;
    let pooled_joint = linear_pool(&prob)?;
    let pooled_marginal = pooled_joint.marginalize(&["Residence"])?;
    let marginal_p = p.marginalize(&["Residence"])?.rebase(pooled_marginal.space())?;
    let marginal_q = q.marginalize(&["Residence"])?.rebase(pooled_marginal.space())?;
    Ok(NixonReport {
        marginal_distance: marginal_p.total_variation(&marginal_q)?,
        joint_p: p,
        joint_q: q,
        marginal_p,
        marginal_q,
        weights: weights.to_vec(),
        pooled_joint,
        pooled_marginal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::iid_coin;

    #[test]
    fn unit_weight_returns_expert() {
        let (p, q) = nixon_experts();
        let prob =
            PoolingProblem::new(vec![("P".into(), p.clone()), ("Q".into(), q)], vec![1.0, 0.0]).unwrap();
        assert_eq!(linear_pool(&prob).unwrap().probs(), p.probs());
    }

    #[test]
    fn marginal_pool() {
        let s = OutcomeSpace::from_atoms(["NJ", "CA"]).unwrap();
        let pr = Distribution::new(&s, vec![0.85, 0.15]).unwrap();
        let qr = Distribution::new(&s, vec![0.9, 0.1]).unwrap();
        let prob = PoolingProblem::equal_weights(vec![("P".into(), pr), ("Q".into(), qr)]).unwrap();
        let pooled = linear_pool(&prob).unwrap();
        assert!((pooled.get(0) - 0.875).abs() < 1e-15);
        assert!((pooled.get(1) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn nixon_marginals() {
        let r = nixon_scenario([1.0, 0.0]).unwrap();
        assert!((r.pooled_marginal.get(0) - 0.85).abs() < 1e-15);
        assert!((r.marginal_q.get(0) - 0.9).abs() < 1e-15);
        assert!((r.marginal_distance - 0.05).abs() < 1e-12);
    }

    #[test]
    fn precondition_lists_offenders() {
        let good = iid_coin(0.3, 2).unwrap();
        let bad = Distribution::new(good.space(), vec![0.13, 0.17, 0.17, 0.53]).unwrap();
        let prob = PoolingProblem::equal_weights(vec![("g".into(), good), ("b".into(), bad)]).unwrap();
        match independence_preserved(&prob, "toss1", "toss2", None, 1e-9) {
            Err(Error::PreconditionUnmet(msg)) => assert!(msg.contains('b')),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mixing_independent_coins_breaks_independence() {
        let prob = PoolingProblem::equal_weights(vec![
            ("low".into(), iid_coin(0.1, 2).unwrap()),
            ("high".into(), iid_coin(0.5, 2).unwrap()),
        ])
        .unwrap();
        let r = independence_preserved(&prob, "toss1", "toss2", None, 1e-9).unwrap();
        assert!(!r.preserved());
        assert!((r.pooled.get(0) - 0.13).abs() < 1e-12);
    }

    #[test]
    fn weight_validation() {
        let (p, q) = nixon_experts();
        assert!(PoolingProblem::new(vec![("P".into(), p.clone()), ("Q".into(), q)], vec![0.6, 0.6]).is_err());
        assert!(PoolingProblem::new(vec![("P".into(), p)], vec![]).is_err());
        assert!(PoolingProblem::new(vec![], vec![]).is_err());
    }
}
