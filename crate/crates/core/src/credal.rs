//! The three representations of a credal set.

use std::fmt;
use std::sync::Arc;

use crate::distribution::{Distribution, IntervalDistribution};
use crate::error::{Error, Result};
use crate::family::ParametricFamily;
use crate::lp::{self, Constraint, Extremum, LinearProgram, LpStatus, Relation, Sense};
use crate::space::{same_space, OutcomeSpace};
use crate::tolerance;

/// A finite, nonempty list of distributions over a common space.
///
/// The set is the list itself, not its convex hull.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSet {
    members: Vec<Distribution>,
}

impl VertexSet {
    pub fn new(members: Vec<Distribution>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptySet)?;
        for m in &members[1..] {
            same_space(first.space(), m.space())?;
        }
        Ok(VertexSet { members })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.members[0].space()
    }

    pub fn members(&self) -> &[Distribution] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members with near-duplicates (within [`tolerance::NORM`]) removed.
    pub fn distinct(&self) -> Vec<Distribution> {
        let mut out: Vec<Distribution> = Vec::new();
        for m in &self.members {
            if !out
                .iter()
                .any(|o| o.max_abs_diff(m).is_ok_and(|d| d <= tolerance::NORM))
            {
                out.push(m.clone());
            }
        }
        out
    }
}

/// Linear constraints over atom probabilities. The simplex constraints
/// (nonnegativity and normalization) are always implied.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    space: Arc<OutcomeSpace>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    /// Builds the system, rejecting it when no distribution satisfies it.
    pub fn new(space: &Arc<OutcomeSpace>, constraints: Vec<Constraint>) -> Result<Self> {
        for (k, c) in constraints.iter().enumerate() {
            if c.coeffs.len() != space.len() {
                return Err(Error::MalformedProgram(format!(
                    "constraint {k} has {} coefficients for {} atoms",
                    c.coeffs.len(),
                    space.len()
                )));
            }
        }
        let system = LinearSystem {
            space: Arc::clone(space),
            constraints,
        };
        let res = lp::solve(&system.program(vec![0.0; space.len()], Sense::Feasibility))?;
        if res.status == LpStatus::Infeasible {
            return Err(Error::Infeasible);
        }
        Ok(system)
    }

    /// The whole probability simplex.
    pub fn simplex(space: &Arc<OutcomeSpace>) -> Self {
        LinearSystem {
            space: Arc::clone(space),
            constraints: Vec::new(),
        }
    }

    /// `lo[i] <= p(i) <= hi[i]` for every atom.
    pub fn from_intervals(iv: &IntervalDistribution) -> Result<Self> {
        let n = iv.space().len();
        let mut constraints = Vec::with_capacity(2 * n);
        for i in 0..n {
            constraints.push(Constraint::new(lp::unit_row(n, i), Relation::Ge, iv.lo()[i]));
            constraints.push(Constraint::new(lp::unit_row(n, i), Relation::Le, iv.hi()[i]));
        }
        Self::new(iv.space(), constraints)
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Linear program over the atom probabilities with the simplex row added.
    pub fn program(&self, objective: Vec<f64>, sense: Sense) -> LinearProgram {
        let n = self.space.len();
        let mut lp = LinearProgram::new(n, sense).with_objective(objective);
        lp.constraints = self.constraints.clone();
        lp.push(vec![1.0; n], Relation::Eq, 1.0);
        lp
    }

    /// Optimum of `objective · p` over the system, with an optimal member.
    pub fn optimize(&self, objective: &[f64], extremum: Extremum) -> Result<(f64, Distribution)> {
        let sense = match extremum {
            Extremum::Min => Sense::Minimize,
            Extremum::Max => Sense::Maximize,
        };
        let res = lp::solve(&self.program(objective.to_vec(), sense))?;
        match (res.status, res.value, res.witness) {
            (LpStatus::Optimal, Some(v), Some(x)) => Ok((v, Distribution::from_solver(&self.space, &x))),
            (LpStatus::Infeasible, ..) => Err(Error::Infeasible),
            _ => Err(Error::NumericalFailure(
                "bounded program reported unbounded".into(),
            )),
        }
    }

    /// Some member of the system.
    pub fn feasible_point(&self) -> Result<Distribution> {
        self.optimize(&vec![0.0; self.space.len()], Extremum::Min)
            .map(|(_, d)| d)
    }

    pub fn contains(&self, d: &Distribution, tol: f64) -> bool {
        same_space(&self.space, d.space()).is_ok()
            && self.constraints.iter().all(|c| c.satisfied_by(d.probs(), tol))
    }

    /// The system with one more constraint; may be infeasible.
    pub fn with_constraint(&self, c: Constraint) -> Result<Self> {
        let mut cs = self.constraints.clone();
        cs.push(c);
        Self::new(&self.space, cs)
    }
}

/// A set of distributions in one of three representations.
#[derive(Debug, Clone, PartialEq)]
pub enum CredalSet {
    Vertices(VertexSet),
    Linear(LinearSystem),
    Family(ParametricFamily),
}

impl CredalSet {
    pub fn vertices(members: Vec<Distribution>) -> Result<Self> {
        VertexSet::new(members).map(CredalSet::Vertices)
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        match self {
            CredalSet::Vertices(v) => v.space(),
            CredalSet::Linear(l) => l.space(),
            CredalSet::Family(f) => f.space(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CredalSet::Vertices(_) => "vertex-set",
            CredalSet::Linear(_) => "linear-system",
            CredalSet::Family(_) => "parametric-family",
        }
    }

    /// Membership test. Vertex sets are finite: only listed members belong.
    pub fn contains(&self, d: &Distribution, tol: f64) -> Result<bool> {
        same_space(self.space(), d.space())?;
        Ok(match self {
            CredalSet::Vertices(v) => v
                .members()
                .iter()
                .any(|m| m.max_abs_diff(d).is_ok_and(|x| x <= tol)),
            CredalSet::Linear(l) => l.contains(d, tol),
            CredalSet::Family(f) => f.contains(d, tol)?,
        })
    }
}

impl From<VertexSet> for CredalSet {
    fn from(v: VertexSet) -> Self {
        CredalSet::Vertices(v)
    }
}

impl From<LinearSystem> for CredalSet {
    fn from(l: LinearSystem) -> Self {
        CredalSet::Linear(l)
    }
}

impl From<ParametricFamily> for CredalSet {
    fn from(f: ParametricFamily) -> Self {
        CredalSet::Family(f)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.constraints {
            let terms: Vec<String> = c
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(i, v)| {
                    if *v == 1.0 {
                        format!("p({})", self.space.atom(i))
                    } else {
                        format!("{v}·p({})", self.space.atom(i))
                    }
                })
                .collect();
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            writeln!(f, "{} {rel} {}", terms.join(" + "), c.rhs)?;
        }
        Ok(())
    }
}

/// Linear system whose members are exactly the distributions within the
/// per-atom bounds of `iv`.
pub fn interval_to_linear_system(iv: &IntervalDistribution) -> Result<CredalSet> {
    LinearSystem::from_intervals(iv).map(CredalSet::Linear)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_system_membership() {
        let s = OutcomeSpace::coin_tosses(2).unwrap();
        let iv = IntervalDistribution::new(&s, vec![0.0, 0.1, 0.2, 0.3], vec![0.2, 0.3, 0.4, 0.5]).unwrap();
        let CredalSet::Linear(sys) = interval_to_linear_system(&iv).unwrap() else {
            unreachable!()
        };
        let p = Distribution::new(&s, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(sys.contains(&p, 1e-12));
        let q = Distribution::new(&s, vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert!(!sys.contains(&q, 1e-12));
    }

    #[test]
    fn point_interval_pins_a_single_member() {
        let s = OutcomeSpace::from_atoms(["a", "b", "c"]).unwrap();
        let v = vec![0.2, 0.3, 0.5];
        let iv = IntervalDistribution::new(&s, v.clone(), v.clone()).unwrap();
        let sys = LinearSystem::from_intervals(&iv).unwrap();
        for i in 0..3 {
            let (lo, _) = sys.optimize(&lp::unit_row(3, i), Extremum::Min).unwrap();
            let (hi, _) = sys.optimize(&lp::unit_row(3, i), Extremum::Max).unwrap();
            assert!((lo - v[i]).abs() < 1e-12 && (hi - v[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn infeasible_system_rejected() {
        let s = OutcomeSpace::from_atoms(["a", "b"]).unwrap();
        let cs = vec![
            Constraint::new(vec![1.0, 0.0], Relation::Ge, 0.6),
            Constraint::new(vec![0.0, 1.0], Relation::Ge, 0.6),
        ];
        assert!(matches!(LinearSystem::new(&s, cs), Err(Error::Infeasible)));
    }

    #[test]
    fn empty_vertex_set_rejected() {
        assert!(matches!(VertexSet::new(vec![]), Err(Error::EmptySet)));
    }
}
