//! Expected utility, E-admissibility, group minimax, and Pareto optimality.

use std::sync::Arc;

use crate::credal::CredalSet;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::family::REFINE_TOL;
use crate::lp::{self, LinearProgram, LpStatus, Relation, Sense};
use crate::space::{same_space, OutcomeSpace};
use crate::tolerance;

/// Payoff of each action in each atom.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityMatrix {
    actions: Vec<String>,
    space: Arc<OutcomeSpace>,
    utilities: Vec<Vec<f64>>,
}

impl UtilityMatrix {
    pub fn new<S: Into<String>>(
        space: &Arc<OutcomeSpace>,
        actions: Vec<S>,
        utilities: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let actions: Vec<String> = actions.into_iter().map(Into::into).collect();
        if actions.is_empty() {
            return Err(Error::InvalidUtility("no actions".into()));
        }
        if actions.len() != utilities.len() {
            return Err(Error::InvalidUtility(format!(
                "{} action labels for {} rows",
                actions.len(),
                utilities.len()
            )));
        }
        for (a, row) in actions.iter().zip(&utilities) {
            if row.len() != space.len() {
                return Err(Error::InvalidUtility(format!(
                    "row `{a}` has {} entries for {} atoms",
                    row.len(),
                    space.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidUtility(format!("row `{a}` is not finite")));
            }
        }
        for (i, a) in actions.iter().enumerate() {
            if actions[..i].contains(a) {
                return Err(Error::InvalidUtility(format!("duplicate action `{a}`")));
            }
        }
        Ok(UtilityMatrix {
            actions,
            space: Arc::clone(space),
            utilities,
        })
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn row(&self, action: usize) -> &[f64] {
        &self.utilities[action]
    }

    pub fn action_index(&self, action: &str) -> Result<usize> {
        self.actions
            .iter()
            .position(|a| a == action)
            .ok_or_else(|| Error::UnknownAction(action.to_string()))
    }

    /// Expected utility of every action under `p`, in action order.
    pub fn expectations(&self, p: &Distribution) -> Result<Vec<f64>> {
        same_space(&self.space, p.space())?;
        self.utilities.iter().map(|row| p.expectation(row)).collect()
    }

    /// `a·u + b` applied to every entry.
    pub fn affine(&self, scale: f64, shift: f64) -> UtilityMatrix {
        UtilityMatrix {
            actions: self.actions.clone(),
            space: Arc::clone(&self.space),
            utilities: self
                .utilities
                .iter()
                .map(|r| r.iter().map(|u| scale * u + shift).collect())
                .collect(),
        }
    }
}

pub fn expected_utility(action: &str, p: &Distribution, u: &UtilityMatrix) -> Result<f64> {
    let a = u.action_index(action)?;
    same_space(u.space(), p.space())?;
    p.expectation(u.row(a))
}

/// Indices of the actions maximizing expected utility under `p`; actions
/// within [`tolerance::LP`] of the maximum are all returned.
pub fn optimal_indices(p: &Distribution, u: &UtilityMatrix) -> Result<Vec<usize>> {
    let eu = u.expectations(p)?;
    let best = eu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..eu.len()).filter(|&i| eu[i] >= best - tolerance::LP).collect())
}

/// Labels of the expected-utility maximizing actions (ties included).
pub fn optimal_actions(p: &Distribution, u: &UtilityMatrix) -> Result<Vec<String>> {
    Ok(optimal_indices(p, u)?
        .into_iter()
        .map(|i| u.actions[i].clone())
        .collect())
}

/// `eu(a) − max_{b≠a} eu(b)`; zero when `a` has no competitor.
fn margin(eu: &[f64], a: usize) -> f64 {
    let rival = eu
        .iter()
        .enumerate()
        .filter(|(b, _)| *b != a)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    if rival == f64::NEG_INFINITY {
        0.0
    } else {
        eu[a] - rival
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionAdmissibility {
    pub action: String,
    pub admissible: bool,
    /// Member of the set under which the action is maximal (the one with the
    /// largest margin), when admissible.
    pub witness: Option<Distribution>,
    /// `max over the set of [eu(a) − max_{b≠a} eu(b)]`. A value below
    /// `−τ_lp` certifies inadmissibility: every member leaves the action at
    /// least that far behind some rival.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub actions: Vec<ActionAdmissibility>,
    /// Set for parametric families, which are scanned rather than solved.
    pub approximate: bool,
    /// Parameter resolution of the scan, for approximate reports.
    pub resolution: Option<f64>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> Vec<&str> {
        self.actions
            .iter()
            .filter(|a| a.admissible)
            .map(|a| a.action.as_str())
            .collect()
    }

    pub fn get(&self, action: &str) -> Option<&ActionAdmissibility> {
        self.actions.iter().find(|a| a.action == action)
    }
}

/// Actions maximizing expected utility for at least one member of `set`.
pub fn e_admissible(u: &UtilityMatrix, set: &CredalSet) -> Result<AdmissibilityReport> {
    same_space(u.space(), set.space())?;
    let k = u.len();
    let mut actions = Vec::with_capacity(k);
    let (approximate, resolution) = match set {
        CredalSet::Vertices(v) => {
            let table = v
                .members()
                .iter()
                .map(|m| u.expectations(m))
                .collect::<Result<Vec<_>>>()?;
            for a in 0..k {
                let (best, at) = table
                    .iter()
                    .enumerate()
                    .map(|(i, eu)| (margin(eu, a), i))
                    .fold((f64::NEG_INFINITY, 0), |acc, x| if x.0 > acc.0 { x } else { acc });
                actions.push(verdict(u, a, best, Some(v.members()[at].clone())));
            }
            (false, None)
        }
        CredalSet::Linear(sys) => {
            let n = u.space().len();
            for a in 0..k {
                if k == 1 {
                    actions.push(verdict(u, a, 0.0, Some(sys.feasible_point()?)));
                    continue;
                }
                // Variables: p (n), t+ and t−; maximize t subject to
                // (u_a − u_b) · p − t >= 0 for every rival b.
                let mut objective = vec![0.0; n + 2];
                objective[n] = 1.0;
                objective[n + 1] = -1.0;
                let mut lp = LinearProgram::new(n + 2, Sense::Maximize).with_objective(objective);
                for c in sys.constraints() {
                    let mut row = c.coeffs.clone();
                    row.extend([0.0, 0.0]);
                    lp.push(row, c.relation, c.rhs);
                }
                let mut total = vec![1.0; n];
                total.extend([0.0, 0.0]);
                lp.push(total, Relation::Eq, 1.0);
                for b in (0..k).filter(|&b| b != a) {
                    let mut row: Vec<f64> = u.row(a).iter().zip(u.row(b)).map(|(x, y)| x - y).collect();
                    row.extend([-1.0, 1.0]);
                    lp.push(row, Relation::Ge, 0.0);
                }
                let spread = u.utilities.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
                // Cap t− so the free variable cannot run off.
                let mut cap = vec![0.0; n + 2];
                cap[n + 1] = 1.0;
                lp.push(cap, Relation::Le, 2.0 * spread + 1.0);
                let res = lp::solve(&lp)?;
                match (res.status, res.value, res.witness) {
                    (LpStatus::Optimal, Some(t), Some(x)) => {
                        let w = Distribution::from_solver(u.space(), &x[..n]);
                        actions.push(verdict(u, a, t, Some(w)));
                    }
                    (LpStatus::Infeasible, ..) => return Err(Error::EmptySet),
                    _ => return Err(Error::NumericalFailure("admissibility program unbounded".into())),
                }
            }
            (false, None)
        }
        CredalSet::Family(f) => {
            for a in 0..k {
                let ext = f.extrema_of(|d| u.expectations(d).map(|eu| margin(&eu, a)).unwrap_or(f64::NAN))?;
                let w = f.evaluate(ext.max_at.0, ext.max_at.1)?;
                actions.push(verdict(u, a, ext.max, Some(w)));
            }
            (true, Some(REFINE_TOL))
        }
    };
    Ok(AdmissibilityReport {
        actions,
        approximate,
        resolution,
    })
}

fn verdict(u: &UtilityMatrix, a: usize, margin: f64, witness: Option<Distribution>) -> ActionAdmissibility {
    let admissible = margin >= -tolerance::LP;
    ActionAdmissibility {
        action: u.actions[a].clone(),
        admissible,
        witness: witness.filter(|_| admissible),
        margin,
    }
}

/// Group minimax result: the action whose worst member loss is smallest.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupMinimax {
    pub action: String,
    pub index: usize,
    /// `loss[a][i] = max_b eu(b, p_i) − eu(a, p_i)`.
    pub loss: Vec<Vec<f64>>,
    /// `max_i loss[a][i]` per action.
    pub max_loss: Vec<f64>,
    /// Other actions whose maximum loss ties the winner's within `τ_lp`;
    /// the winner is the first in action order.
    pub tied: Vec<String>,
}

pub fn loss_table(u: &UtilityMatrix, members: &[Distribution]) -> Result<Vec<Vec<f64>>> {
    if members.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut loss = vec![vec![0.0; members.len()]; u.len()];
    for (i, p) in members.iter().enumerate() {
        let eu = u.expectations(p)?;
        let best = eu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (a, row) in loss.iter_mut().enumerate() {
            row[i] = best - eu[a];
        }
    }
    Ok(loss)
}

pub fn group_minimax(u: &UtilityMatrix, members: &[Distribution]) -> Result<GroupMinimax> {
    let loss = loss_table(u, members)?;
    let max_loss: Vec<f64> = loss
        .iter()
        .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let best = max_loss.iter().copied().fold(f64::INFINITY, f64::min);
    let winners: Vec<usize> = (0..u.len())
        .filter(|&a| max_loss[a] <= best + tolerance::LP)
        .collect();
    let index = winners[0];
    Ok(GroupMinimax {
        action: u.actions[index].clone(),
        index,
        tied: winners[1..].iter().map(|&a| u.actions[a].clone()).collect(),
        loss,
        max_loss,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoReport {
    pub optimal: Vec<bool>,
    /// For each dominated action, the first action dominating it.
    pub dominated_by: Vec<Option<usize>>,
}

/// An action is Pareto-optimal when no other action is at least as good for
/// every member (within `τ_lp`) and better by `τ_lp` for some member.
pub fn pareto_optimal(u: &UtilityMatrix, members: &[Distribution]) -> Result<ParetoReport> {
    if members.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let eu: Vec<Vec<f64>> = members.iter().map(|p| u.expectations(p)).collect::<Result<_>>()?;
    let dominates = |b: usize, a: usize| {
        eu.iter().all(|row| row[b] >= row[a] - tolerance::LP)
            && eu.iter().any(|row| row[b] >= row[a] + tolerance::LP)
    };
    let dominated_by: Vec<Option<usize>> = (0..u.len())
        .map(|a| (0..u.len()).find(|&b| b != a && dominates(b, a)))
        .collect();
    Ok(ParetoReport {
        optimal: dominated_by.iter().map(Option::is_none).collect(),
        dominated_by,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix() -> UtilityMatrix {
        let s = OutcomeSpace::from_atoms(["c1", "c2", "c3"]).unwrap();
        UtilityMatrix::new(
            &s,
            vec!["a1", "a2", "a3"],
            vec![vec![3.0, 3.0, 4.0], vec![2.5, 3.5, 5.0], vec![1.0, 5.0, 4.0]],
        )
        .unwrap()
    }

    fn dist(u: &UtilityMatrix, v: [f64; 3]) -> Distribution {
        Distribution::new(u.space(), v.to_vec()).unwrap()
    }

    #[test]
    fn expected_utilities() {
        let u = matrix();
        let p1 = dist(&u, [0.125, 0.75, 0.125]);
        let p2 = dist(&u, [0.75, 0.125, 0.125]);
        assert_eq!(expected_utility("a2", &p1, &u).unwrap(), 3.5625);
        assert_eq!(expected_utility("a2", &p2, &u).unwrap(), 2.9375);
        assert!(matches!(
            expected_utility("a9", &p1, &u),
            Err(Error::UnknownAction(_))
        ));
    }

    #[test]
    fn constant_row_and_ties() {
        let s = OutcomeSpace::from_atoms(["x", "y"]).unwrap();
        let u = UtilityMatrix::new(
            &s,
            vec!["a", "b", "c"],
            vec![vec![2.0, 2.0], vec![1.0, 3.0], vec![1.0, 3.0]],
        )
        .unwrap();
        let p = Distribution::new(&s, vec![0.3, 0.7]).unwrap();
        assert_eq!(expected_utility("a", &p, &u).unwrap(), 2.0);
        assert_eq!(optimal_actions(&p, &u).unwrap(), vec!["b", "c"]);
    }

    #[test]
    fn matrix_validation() {
        let s = OutcomeSpace::from_atoms(["x", "y"]).unwrap();
        assert!(UtilityMatrix::new(&s, Vec::<String>::new(), vec![]).is_err());
        assert!(UtilityMatrix::new(&s, vec!["a"], vec![vec![1.0]]).is_err());
        assert!(UtilityMatrix::new(&s, vec!["a", "a"], vec![vec![1.0, 1.0], vec![0.0, 0.0]]).is_err());
    }

    #[test]
    fn single_action_always_admissible() {
        let s = OutcomeSpace::from_atoms(["x", "y"]).unwrap();
        let u = UtilityMatrix::new(&s, vec!["only"], vec![vec![0.0, 1.0]]).unwrap();
        let set = CredalSet::Linear(crate::credal::LinearSystem::simplex(&s));
        assert_eq!(e_admissible(&u, &set).unwrap().admissible(), vec!["only"]);
        let vs = CredalSet::vertices(vec![Distribution::uniform(&s)]).unwrap();
        assert_eq!(e_admissible(&u, &vs).unwrap().admissible(), vec!["only"]);
    }

    #[test]
    fn empty_group_rejected() {
        let u = matrix();
        assert!(matches!(group_minimax(&u, &[]), Err(Error::EmptyGroup)));
        assert!(matches!(pareto_optimal(&u, &[]), Err(Error::EmptyGroup)));
    }

    #[test]
    fn dominated_row_flagged() {
        let s = OutcomeSpace::from_atoms(["x", "y"]).unwrap();
        let u = UtilityMatrix::new(&s, vec!["good", "bad"], vec![vec![2.0, 3.0], vec![1.0, 2.0]]).unwrap();
        let members = vec![
            Distribution::new(&s, vec![0.2, 0.8]).unwrap(),
            Distribution::new(&s, vec![0.7, 0.3]).unwrap(),
        ];
        let r = pareto_optimal(&u, &members).unwrap();
        assert_eq!(r.optimal, vec![true, false]);
        assert_eq!(r.dominated_by[1], Some(0));
    }

    #[test]
    fn single_member_minimax_is_its_best_action() {
        let u = matrix();
        let p = dist(&u, [0.125, 0.75, 0.125]);
        let g = group_minimax(&u, &[p]).unwrap();
        assert_eq!(g.action, "a3");
        assert_eq!(g.max_loss[2], 0.0);
    }
}
