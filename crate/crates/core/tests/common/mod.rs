//! Independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use credal::{Constraint, Relation};

/// Vertices of `{p >= 0, Σp = 1} ∩ constraints`, by trying every choice of
/// `n − 1` tight inequalities.
pub fn polytope_vertices(n: usize, constraints: &[Constraint]) -> Vec<Vec<f64>> {
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut eqs: Vec<(Vec<f64>, f64)> = vec![(vec![1.0; n], 1.0)];
    for c in constraints {
        match c.relation {
            Relation::Eq => eqs.push((c.coeffs.clone(), c.rhs)),
            _ => rows.push((c.coeffs.clone(), c.rhs)),
        }
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        rows.push((e, 0.0));
    }
    let need = n.saturating_sub(eqs.len());
    let mut out = Vec::new();
    for combo in combinations(rows.len(), need) {
        let mut a: Vec<Vec<f64>> = eqs.iter().map(|e| e.0.clone()).collect();
        let mut b: Vec<f64> = eqs.iter().map(|e| e.1).collect();
        for &i in &combo {
            a.push(rows[i].0.clone());
            b.push(rows[i].1);
        }
        if a.len() != n {
            continue;
        }
        if let Some(p) = solve_square(a, b) {
            if satisfies(&p, constraints, 1e-9) {
                out.push(p);
            }
        }
    }
    out
}

pub fn satisfies(p: &[f64], constraints: &[Constraint], tol: f64) -> bool {
    (p.iter().all(|x| *x >= -tol) && (p.iter().sum::<f64>() - 1.0).abs() <= tol)
        && constraints.iter().all(|c| {
            let lhs = dot(&c.coeffs, p);
            match c.relation {
                Relation::Le => lhs <= c.rhs + tol,
                Relation::Ge => lhs >= c.rhs - tol,
                Relation::Eq => (lhs - c.rhs).abs() <= tol,
            }
        })
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(m, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-11 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Möbius inverse by direct subset enumeration: `m(A) = Σ_{B⊆A} (−1)^{|A∖B|} g(B)`.
pub fn mobius_by_subsets(g: &[f64]) -> Vec<f64> {
    (0..g.len())
        .map(|a| {
            let mut total = 0.0;
            let mut b = a;
            loop {
                let sign = if (a & !b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * g[b];
                if b == 0 {
                    break;
                }
                b = (b - 1) & a;
            }
            total
        })
        .collect()
}

/// Indices of the largest entries, within `tol`.
pub fn argmax_set(v: &[f64], tol: f64) -> Vec<usize> {
    let best = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..v.len()).filter(|&i| v[i] >= best - tol).collect()
}

pub fn expected(row: &[f64], p: &[f64]) -> f64 {
    dot(row, p)
}

/// Group minimax by definition: regret of each action for each member.
pub fn minimax_index(u: &[Vec<f64>], members: &[Vec<f64>]) -> (usize, Vec<f64>) {
    let max_loss: Vec<f64> = u
        .iter()
        .map(|row| {
            members
                .iter()
                .map(|p| {
                    let best = u.iter().map(|r| dot(r, p)).fold(f64::NEG_INFINITY, f64::max);
                    best - dot(row, p)
                })
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();
    let best = max_loss.iter().copied().fold(f64::INFINITY, f64::min);
    let idx = (0..u.len()).find(|&a| max_loss[a] <= best + 1e-8).unwrap();
    (idx, max_loss)
}

/// True when some other action is at least as good for every member and
/// strictly better for one.
pub fn dominated(u: &[Vec<f64>], members: &[Vec<f64>], a: usize, tol: f64) -> bool {
    (0..u.len()).any(|b| {
        b != a
            && members.iter().all(|p| dot(&u[b], p) >= dot(&u[a], p) - tol)
            && members.iter().any(|p| dot(&u[b], p) > dot(&u[a], p) + tol)
    })
}
