//! Dense two-phase simplex for the small programs that arise over credal sets.
//!
//! All variables are implicitly nonnegative. Pivoting uses Dantzig's rule and
//! switches to Bland's rule after [`BLAND_AFTER`] iterations, which rules out
//! cycling on degenerate vertices.

use serde::{Deserialize, Serialize};

use crate::credal::LinearSystem;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::space::{same_space, Event};
use crate::tolerance;

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-10;
const BLAND_AFTER: usize = 64;
const MAX_ITERATIONS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
    Feasibility,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Satisfaction with tolerance scaled by the row's magnitude.
    pub fn satisfied_by(&self, x: &[f64], tol: f64) -> bool {
        let scale = 1.0 + self.rhs.abs() + self.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
        self.relation.holds(self.lhs(x), self.rhs, tol * scale)
    }
}

/// `optimize objective · x subject to constraints, x >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub n_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<f64>,
    pub sense: Sense,
}

impl LinearProgram {
    pub fn new(n_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            n_vars,
            constraints: Vec::new(),
            objective: vec![0.0; n_vars],
            sense,
        }
    }

    pub fn with_objective(mut self, objective: Vec<f64>) -> Self {
        self.objective = objective;
        self
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.n_vars {
            return Err(Error::MalformedProgram(format!(
                "objective has {} coefficients for {} variables",
                self.objective.len(),
                self.n_vars
            )));
        }
        for (k, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.n_vars {
                return Err(Error::MalformedProgram(format!(
                    "constraint {k} has {} coefficients for {} variables",
                    c.coeffs.len(),
                    self.n_vars
                )));
            }
            if !c.rhs.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
                return Err(Error::MalformedProgram(format!("constraint {k} is not finite")));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::MalformedProgram("objective is not finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Objective value at `witness` when optimal (0 for feasibility programs).
    pub value: Option<f64>,
    /// Optimal point, or for unbounded programs the feasible point where the
    /// unbounded ray was detected.
    pub witness: Option<Vec<f64>>,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        self.status != LpStatus::Infeasible
    }
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · x` over the current basis. Returns `false` when unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Result<bool> {
        let m = self.rows.len();
        for iter in 0..MAX_ITERATIONS {
            let bland = iter >= BLAND_AFTER;
            let mut entering = None;
            let mut best = -COST_EPS;
            for j in (0..self.width).filter(|&j| allowed(j)) {
                if self.basis.contains(&j) {
                    continue;
                }
                let reduced = cost[j] - (0..m).map(|i| cost[self.basis[i]] * self.rows[i][j]).sum::<f64>();
                if reduced < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = reduced;
                }
            }
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((r, best_ratio)) => {
                            ratio < best_ratio - 1e-12
                                || (ratio <= best_ratio + 1e-12 && self.basis[i] < self.basis[r])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, col),
            }
        }
        Err(Error::NumericalFailure(format!(
            "no convergence after {MAX_ITERATIONS} pivots"
        )))
    }

    fn point(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs(i);
            }
        }
        x
    }
}

/// Solves `lp`, certifying that the returned witness satisfies every
/// constraint within [`tolerance::LP`].
pub fn solve(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let n = lp.n_vars;
    let m = lp.constraints.len();

    let mut n_slack = 0;
    let mut n_art = 0;
    for c in &lp.constraints {
        let rel = normalized_relation(c);
        match rel {
            Relation::Le => n_slack += 1,
            Relation::Ge => {
                n_slack += 1;
                n_art += 1
            }
            Relation::Eq => n_art += 1,
        }
    }
    let width = n + n_slack + n_art;
    let art_start = n + n_slack;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut s, mut a) = (n, art_start);
    for c in &lp.constraints {
        let flip = if c.rhs < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; width + 1];
        for (dst, v) in row.iter_mut().zip(&c.coeffs) {
            *dst = flip * v;
        }
        row[width] = flip * c.rhs;
        match normalized_relation(c) {
            Relation::Le => {
                row[s] = 1.0;
                basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -1.0;
                row[a] = 1.0;
                basis.push(a);
                s += 1;
                a += 1;
            }
            Relation::Eq => {
                row[a] = 1.0;
                basis.push(a);
                a += 1;
            }
        }
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, width };

    if n_art > 0 {
        let mut cost = vec![0.0; width];
        cost[art_start..].iter_mut().for_each(|c| *c = 1.0);
        tab.optimize(&cost, &|_| true)?;
        let infeasibility: f64 = (0..tab.rows.len())
            .filter(|&i| tab.basis[i] >= art_start)
            .map(|i| tab.rhs(i))
            .sum();
        let scale = 1.0 + lp.constraints.iter().map(|c| c.rhs.abs()).fold(0.0, f64::max);
        if infeasibility > 1e-9 * scale {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                value: None,
                witness: None,
            });
        }
        // Drive remaining artificials out of the basis, dropping redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= art_start {
                let col = (0..art_start)
                    .filter(|j| !tab.basis.contains(j))
                    .max_by(|&x, &y| tab.rows[i][x].abs().total_cmp(&tab.rows[i][y].abs()))
                    .filter(|&j| tab.rows[i][j].abs() > 1e-9);
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let not_artificial = move |j: usize| j < art_start;
    let bounded = match lp.sense {
        Sense::Feasibility => true,
        Sense::Minimize | Sense::Maximize => {
            let sign = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
            let mut cost = vec![0.0; width];
            for (c, v) in cost.iter_mut().zip(&lp.objective) {
                *c = sign * v;
            }
            tab.optimize(&cost, &not_artificial)?
        }
    };

    let x = tab.point(n);
    if let Some((k, _)) = lp
        .constraints
        .iter()
        .enumerate()
        .find(|(_, c)| !c.satisfied_by(&x, tolerance::LP))
    {
        return Err(Error::NumericalFailure(format!(
            "witness violates constraint {k} beyond tolerance"
        )));
    }
    if !bounded {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: None,
            witness: Some(x),
        });
    }
    let value = match lp.sense {
        Sense::Feasibility => 0.0,
        _ => lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum(),
    };
    Ok(LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        witness: Some(x),
    })
}

fn normalized_relation(c: &Constraint) -> Relation {
    match (c.relation, c.rhs < 0.0) {
        (Relation::Le, true) => Relation::Ge,
        (Relation::Ge, true) => Relation::Le,
        (r, _) => r,
    }
}

/// A hyperplane `normal · x = offset` with every vertex on the `<=` side and
/// the tested point strictly beyond it by `margin`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separator {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum HullMembership {
    /// Convex weights over the vertex list reproducing the point.
    Inside {
        weights: Vec<f64>,
    },
    Outside {
        separator: Separator,
    },
}

impl HullMembership {
    pub fn is_inside(&self) -> bool {
        matches!(self, HullMembership::Inside { .. })
    }
}

/// Tests whether `point` is a convex combination of `vertices`.
pub fn hull_membership(point: &Distribution, vertices: &[Distribution]) -> Result<HullMembership> {
    if vertices.is_empty() {
        return Err(Error::EmptySet);
    }
    for v in vertices {
        same_space(point.space(), v.space())?;
    }
    let n = point.space().len();
    let k = vertices.len();
    let mut lp = LinearProgram::new(k, Sense::Feasibility);
    for j in 0..n {
        lp.push(
            vertices.iter().map(|v| v.get(j)).collect(),
            Relation::Eq,
            point.get(j),
        );
    }
    lp.push(vec![1.0; k], Relation::Eq, 1.0);
    let res = solve(&lp)?;
    if let Some(w) = res.witness.filter(|_| res.status == LpStatus::Optimal) {
        return Ok(HullMembership::Inside { weights: w });
    }

    // Separation: maximize a·point - b over a in [-1,1]^n, b in [-2,2],
    // subject to a·v - b <= 0 for every vertex.
    let width = 2 * n + 2;
    let mut objective = vec![0.0; width];
    for j in 0..n {
        objective[j] = point.get(j);
        objective[n + j] = -point.get(j);
    }
    objective[2 * n] = -1.0;
    objective[2 * n + 1] = 1.0;
    let mut sep = LinearProgram::new(width, Sense::Maximize).with_objective(objective);
    for v in vertices {
        let mut row = vec![0.0; width];
        for j in 0..n {
            row[j] = v.get(j);
            row[n + j] = -v.get(j);
        }
        row[2 * n] = -1.0;
        row[2 * n + 1] = 1.0;
        sep.push(row, Relation::Le, 0.0);
    }
    for j in 0..width {
        let mut row = vec![0.0; width];
        row[j] = 1.0;
        sep.push(row, Relation::Le, if j >= 2 * n { 2.0 } else { 1.0 });
    }
    let res = solve(&sep)?;
    let x = res
        .witness
        .ok_or_else(|| Error::NumericalFailure("separation program has no solution".into()))?;
    let normal: Vec<f64> = (0..n).map(|j| x[j] - x[n + j]).collect();
    Ok(HullMembership::Outside {
        separator: Separator {
            normal,
            offset: x[2 * n] - x[2 * n + 1],
            margin: res.value.unwrap_or(0.0),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FractionalBound {
    pub value: f64,
    pub witness: Distribution,
}

/// Minimum or maximum of `p(A ∩ E) / p(E)` over a linear system, where
/// `numerator` is A and `denominator` is E.
///
/// Substitutes `y = p / p(E)`, `t = 1 / p(E)`, turning the ratio into the
/// linear objective `1_{A∩E} · y` under `1_E · y = 1`.
pub fn fractional_bounds(
    system: &LinearSystem,
    numerator: &Event,
    denominator: &Event,
    sense: Extremum,
) -> Result<FractionalBound> {
    let space = system.space();
    same_space(space, numerator.space())?;
    same_space(space, denominator.space())?;
    let upper = system.optimize(&denominator.indicator(), Extremum::Max)?;
    if upper.0 <= tolerance::ZERO {
        return Err(Error::DenominatorVanishes { upper: upper.0 });
    }
    let joint = numerator.intersect(denominator)?;
    let n = space.len();
    let t = n;
    let mut objective = joint.indicator();
    objective.push(0.0);
    let mut lp = LinearProgram::new(
        n + 1,
        match sense {
            Extremum::Min => Sense::Minimize,
            Extremum::Max => Sense::Maximize,
        },
    )
    .with_objective(objective);
    for c in system.constraints() {
        let mut row = c.coeffs.clone();
        row.push(-c.rhs);
        lp.push(row, c.relation, 0.0);
    }
    let mut total = vec![1.0; n];
    total.push(-1.0);
    lp.push(total, Relation::Eq, 0.0);
    let mut norm = denominator.indicator();
    norm.push(0.0);
    lp.push(norm, Relation::Eq, 1.0);
    let res = solve(&lp)?;
    match (res.status, res.witness, res.value) {
        (LpStatus::Optimal, Some(y), Some(value)) => {
            let scale = y[t];
            let p: Vec<f64> = if scale > tolerance::ZERO {
                y[..n].iter().map(|v| v / scale).collect()
            } else {
                y[..n].to_vec()
            };
            Ok(FractionalBound {
                value: value.clamp(0.0, 1.0),
                witness: Distribution::from_solver(space, &p),
            })
        }
        (LpStatus::Infeasible, ..) => Err(Error::Infeasible),
        _ => Err(Error::NumericalFailure("unbounded ratio program".into())),
    }
}

pub(crate) fn unit_row(n: usize, i: usize) -> Vec<f64> {
    let mut r = vec![0.0; n];
    r[i] = 1.0;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::OutcomeSpace;

    fn bounded_box(n: usize, lo: f64, hi: f64) -> LinearProgram {
        let mut lp = LinearProgram::new(n, Sense::Maximize);
        for i in 0..n {
            lp.push(unit_row(n, i), Relation::Ge, lo);
            lp.push(unit_row(n, i), Relation::Le, hi);
        }
        lp.push(vec![1.0; n], Relation::Eq, 1.0);
        lp
    }

    #[test]
    fn max_single_coordinate_in_box() {
        let mut lp = bounded_box(4, 0.15, 0.40);
        lp.objective = unit_row(4, 0);
        let r = solve(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value.unwrap() - 0.40).abs() < 1e-12);
        lp.sense = Sense::Minimize;
        let r = solve(&lp).unwrap();
        assert!((r.value.unwrap() - 0.15).abs() < 1e-12);
    }

    #[test]
    fn min_over_simplex() {
        let mut lp = LinearProgram::new(2, Sense::Minimize).with_objective(vec![1.0, 0.0]);
        lp.push(vec![1.0, 1.0], Relation::Eq, 1.0);
        let r = solve(&lp).unwrap();
        assert_eq!(r.value, Some(0.0));
    }

    #[test]
    fn infeasible_lower_bounds() {
        let mut lp = LinearProgram::new(2, Sense::Feasibility);
        lp.push(vec![1.0, 0.0], Relation::Ge, 0.6);
        lp.push(vec![0.0, 1.0], Relation::Ge, 0.6);
        lp.push(vec![1.0, 1.0], Relation::Eq, 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(2, Sense::Maximize).with_objective(vec![1.0, 1.0]);
        lp.push(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_equalities() {
        let mut lp = LinearProgram::new(3, Sense::Minimize).with_objective(vec![1.0, 2.0, 3.0]);
        lp.push(vec![-1.0, -1.0, -1.0], Relation::Le, -1.0);
        lp.push(vec![1.0, 1.0, 1.0], Relation::Eq, 1.0);
        lp.push(vec![2.0, 2.0, 2.0], Relation::Eq, 2.0);
        lp.push(vec![1.0, 0.0, 0.0], Relation::Le, 0.25);
        let r = solve(&lp).unwrap();
        assert!((r.value.unwrap() - (0.25 + 1.5)).abs() < 1e-12);
    }

    #[test]
    fn malformed_rejected() {
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.push(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(Error::MalformedProgram(_))));
    }

    #[test]
    fn degenerate_program_terminates() {
        // Classic Beale cycling example.
        let mut lp = LinearProgram::new(4, Sense::Minimize).with_objective(vec![-0.75, 150.0, -0.02, 6.0]);
        lp.push(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.push(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.push(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let r = solve(&lp).unwrap();
        assert!((r.value.unwrap() + 0.05).abs() < 1e-9);
    }

    #[test]
    fn hull_vertex_and_outside_point() {
        let s = OutcomeSpace::from_atoms(["c1", "c2", "c3"]).unwrap();
        let p = |v: [f64; 3]| Distribution::new(&s, v.to_vec()).unwrap();
        let verts = vec![
            p([0.125, 0.75, 0.125]),
            p([0.25, 0.5, 0.25]),
            p([0.375, 0.375, 0.25]),
        ];
        match hull_membership(&verts[1], &verts).unwrap() {
            HullMembership::Inside { weights } => {
                assert!((weights[1] - 1.0).abs() < 1e-9);
            }
            _ => panic!("vertex must be inside"),
        }
        let outside = p([1.0 / 3.0, 0.5, 1.0 / 6.0]);
        match hull_membership(&outside, &verts).unwrap() {
            HullMembership::Outside { separator } => {
                assert!(separator.margin > 1e-6);
                for v in &verts {
                    let lhs: f64 = separator.normal.iter().zip(v.probs()).map(|(a, b)| a * b).sum();
                    assert!(lhs <= separator.offset + 1e-9);
                }
            }
            _ => panic!("point lies outside the hull"),
        }
    }
}
