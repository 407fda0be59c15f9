//! Point and interval-valued probability distributions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::{same_space, Event, OutcomeSpace};
use crate::tolerance;

/// A probability vector over the atoms of an outcome space.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    space: Arc<OutcomeSpace>,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates `probs` against [`tolerance::NORM`].
    pub fn new(space: &Arc<OutcomeSpace>, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: probs.len(),
            });
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || !(-tolerance::NORM..=1.0 + tolerance::NORM).contains(&p) {
                return Err(Error::NegativeMass {
                    atom: space.atom(i).to_string(),
                    value: p,
                });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > tolerance::NORM {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Distribution {
            space: Arc::clone(space),
            probs,
        })
    }

    pub fn uniform(space: &Arc<OutcomeSpace>) -> Self {
        let n = space.len();
        Distribution {
            space: Arc::clone(space),
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Unit mass on atom `i`.
    pub fn point(space: &Arc<OutcomeSpace>, i: usize) -> Result<Self> {
        let mut probs = vec![0.0; space.len()];
        *probs
            .get_mut(i)
            .ok_or_else(|| Error::InvalidEvent(format!("atom index {i} out of range")))? = 1.0;
        Ok(Distribution {
            space: Arc::clone(space),
            probs,
        })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn prob(&self, event: &Event) -> Result<f64> {
        same_space(&self.space, event.space())?;
        Ok(event.indices().iter().map(|&i| self.probs[i]).sum())
    }

    /// Σ p(atom)·values(atom).
    pub fn expectation(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.probs.len() {
            return Err(Error::LengthMismatch {
                expected: self.probs.len(),
                got: values.len(),
            });
        }
        Ok(self.probs.iter().zip(values).map(|(p, v)| p * v).sum())
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &Distribution) -> Result<f64> {
        same_space(&self.space, &other.space)?;
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn total_variation(&self, other: &Distribution) -> Result<f64> {
        same_space(&self.space, &other.space)?;
        Ok(0.5
            * self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>())
    }

    /// Sums out every variable not named in `vars`.
    pub fn marginalize(&self, vars: &[&str]) -> Result<Distribution> {
        let (sub, keep) = self.space.sub_product(vars)?;
        let mut probs = vec![0.0; sub.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let tuple = self.space.tuple(i)?;
            let kept: Vec<usize> = keep.iter().map(|&k| tuple[k]).collect();
            probs[sub.encode(&kept)?] += p;
        }
        Ok(Distribution { space: sub, probs })
    }

    /// Bayes' rule on the same space; atoms outside `event` get zero.
    pub fn condition(&self, event: &Event) -> Result<Distribution> {
        let pe = self.prob(event)?;
        if pe <= tolerance::ZERO {
            return Err(Error::ZeroEvidence { prob: pe });
        }
        let probs = (0..self.probs.len())
            .map(|i| {
                if event.contains(i) {
                    self.probs[i] / pe
                } else {
                    0.0
                }
            })
            .collect();
        Ok(Distribution {
            space: Arc::clone(&self.space),
            probs,
        })
    }

    /// Bayes' rule expressed on the sub-space of `event`'s atoms.
    pub fn condition_restricted(&self, event: &Event) -> Result<Distribution> {
        let pe = self.prob(event)?;
        if pe <= tolerance::ZERO {
            return Err(Error::ZeroEvidence { prob: pe });
        }
        Ok(Distribution {
            space: self.space.restrict(event)?,
            probs: event.indices().iter().map(|&i| self.probs[i] / pe).collect(),
        })
    }

    /// Re-expresses the same vector over an identical space held elsewhere.
    pub fn rebase(&self, space: &Arc<OutcomeSpace>) -> Result<Distribution> {
        same_space(&self.space, space)?;
        Ok(Distribution {
            space: Arc::clone(space),
            probs: self.probs.clone(),
        })
    }

    pub(crate) fn from_raw(space: &Arc<OutcomeSpace>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(space.len(), probs.len());
        Distribution {
            space: Arc::clone(space),
            probs,
        }
    }

    /// Clamps tiny negative round-off and renormalizes; used for solver output.
    pub(crate) fn from_solver(space: &Arc<OutcomeSpace>, raw: &[f64]) -> Self {
        let mut probs: Vec<f64> = raw.iter().map(|&p| p.max(0.0)).collect();
        let s: f64 = probs.iter().sum();
        if s > 0.0 {
            probs.iter_mut().for_each(|p| *p /= s);
        }
        Distribution::from_raw(space, probs)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .atoms()
            .iter()
            .zip(&self.probs)
            .map(|(a, p)| format!("{a}: {p}"))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Pointwise convex combination of distributions over a common space.
pub fn mixture(weights: &[f64], dists: &[Distribution]) -> Result<Distribution> {
    if dists.is_empty() {
        return Err(Error::WeightInvalid("no distributions to mix".into()));
    }
    if weights.len() != dists.len() {
        return Err(Error::WeightInvalid(format!(
            "{} weights for {} distributions",
            weights.len(),
            dists.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::WeightInvalid(format!("weight {w} is negative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tolerance::NORM {
        return Err(Error::WeightInvalid(format!("weights sum to {total}")));
    }
    let space = dists[0].space();
    for d in &dists[1..] {
        same_space(space, d.space())?;
    }
    let mut probs = vec![0.0; space.len()];
    for (w, d) in weights.iter().zip(dists) {
        if *w == 0.0 {
            continue;
        }
        for (acc, p) in probs.iter_mut().zip(d.probs()) {
            *acc += w * p;
        }
    }
    Ok(Distribution::from_raw(space, probs))
}

/// Per-atom probability bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalDistribution {
    space: Arc<OutcomeSpace>,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl IntervalDistribution {
    pub fn new(space: &Arc<OutcomeSpace>, lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        for v in [&lo, &hi] {
            if v.len() != space.len() {
                return Err(Error::LengthMismatch {
                    expected: space.len(),
                    got: v.len(),
                });
            }
        }
        for i in 0..lo.len() {
            if !(lo[i] >= -tolerance::NORM
                && lo[i] <= hi[i] + tolerance::NORM
                && hi[i] <= 1.0 + tolerance::NORM)
            {
                return Err(Error::InvalidInterval(format!(
                    "atom {}: [{}, {}] is not a subinterval of [0, 1]",
                    space.atom(i),
                    lo[i],
                    hi[i]
                )));
            }
        }
        let (sl, sh): (f64, f64) = (lo.iter().sum(), hi.iter().sum());
        if sl > 1.0 + tolerance::NORM || sh < 1.0 - tolerance::NORM {
            return Err(Error::Infeasible);
        }
        Ok(IntervalDistribution {
            space: Arc::clone(space),
            lo,
            hi,
        })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, d: &Distribution, tol: f64) -> bool {
        same_space(&self.space, d.space()).is_ok()
            && d.probs()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(p, (l, h))| *p >= l - tol && *p <= h + tol)
    }
}
