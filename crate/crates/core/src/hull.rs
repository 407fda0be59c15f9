//! Facet description of the convex hull of finitely many distributions.

use crate::credal::{LinearSystem, VertexSet};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::lp::{Constraint, Relation};

const RANK_EPS: f64 = 1e-10;
const SIDE_EPS: f64 = 1e-10;
/// Upper bound on the number of candidate facet subsets examined.
pub const MAX_FACET_CANDIDATES: u64 = 5_000_000;

/// Linear system describing `conv(vertices)`: equalities pinning its affine
/// hull plus one inequality per facet.
pub fn convex_hull_system(vertices: &VertexSet) -> Result<LinearSystem> {
    let pts = vertices.distinct();
    let space = vertices.space();
    let n = space.len();
    let origin = pts[0].probs().to_vec();
    let diffs: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p.probs(), &origin)).collect();
    let basis = orthonormal_basis(&diffs, n);
    let k = basis.len();

    let mut constraints = Vec::new();
    // Affine hull: every direction orthogonal to the span is pinned.
    let mut all = basis.clone();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        if let Some(c) = reduce(&e, &all) {
            let rhs = dot(&c, &origin);
            all.push(c.clone());
            constraints.push(Constraint::new(c, Relation::Eq, rhs));
        }
    }

    if k > 0 {
        let coords: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| {
                let d = sub(p.probs(), &origin);
                basis.iter().map(|b| dot(b, &d)).collect()
            })
            .collect();
        for normal_k in facet_normals(&coords, k)? {
            // normal_k · y <= b with y = B (p - origin)
            let b = coords
                .iter()
                .map(|y| dot(&normal_k, y))
                .fold(f64::NEG_INFINITY, f64::max);
            let mut normal = vec![0.0; n];
            for (w, bv) in normal_k.iter().zip(&basis) {
                for (acc, x) in normal.iter_mut().zip(bv) {
                    *acc += w * x;
                }
            }
            let rhs = b + dot(&normal, &origin);
            constraints.push(Constraint::new(normal, Relation::Le, rhs));
        }
    }
    LinearSystem::new(space, constraints)
}

/// Outward unit normals of the facets of a full-dimensional point cloud in
/// `R^k`.
fn facet_normals(points: &[Vec<f64>], k: usize) -> Result<Vec<Vec<f64>>> {
    if k == 1 {
        return Ok(vec![vec![1.0], vec![-1.0]]);
    }
    let m = points.len();
    if binomial(m as u64, k as u64) > MAX_FACET_CANDIDATES {
        return Err(Error::SpaceTooLarge {
            atoms: m,
            limit: MAX_FACET_CANDIDATES as usize,
        });
    }
    let mut normals: Vec<Vec<f64>> = Vec::new();
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let base = &points[combo[0]];
        let dirs: Vec<Vec<f64>> = combo[1..].iter().map(|&i| sub(&points[i], base)).collect();
        let span = orthonormal_basis(&dirs, k);
        if span.len() == k - 1 {
            let normal = (0..k).find_map(|i| {
                let mut e = vec![0.0; k];
                e[i] = 1.0;
                reduce(&e, &span)
            });
            if let Some(mut a) = normal {
                let offset = dot(&a, base);
                let sides: Vec<f64> = points.iter().map(|p| dot(&a, p) - offset).collect();
                let above = sides.iter().any(|s| *s > SIDE_EPS);
                let below = sides.iter().any(|s| *s < -SIDE_EPS);
                if above != below {
                    if above {
                        a.iter_mut().for_each(|x| *x = -*x);
                    }
                    if !normals.iter().any(|b| sub(b, &a).iter().all(|d| d.abs() < 1e-9)) {
                        normals.push(a);
                    }
                }
            }
        }
        if !next_combination(&mut combo, m) {
            break;
        }
    }
    Ok(normals)
}

fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Component of `v` orthogonal to the orthonormal `basis`, normalized;
/// `None` when it vanishes.
fn reduce(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut r = v.to_vec();
    // Two passes of Gram-Schmidt for stability.
    for _ in 0..2 {
        for b in basis {
            let c = dot(&r, b);
            r.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
    let norm = dot(&r, &r).sqrt();
    (norm > RANK_EPS * (1.0 + dot(v, v).sqrt())).then(|| r.into_iter().map(|x| x / norm).collect())
}

fn orthonormal_basis(vectors: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        if basis.len() == dim {
            break;
        }
        if let Some(b) = reduce(v, &basis) {
            basis.push(b);
        }
    }
    basis
}

/// Convenience for callers holding a plain list.
pub fn hull_of(members: &[Distribution]) -> Result<LinearSystem> {
    convex_hull_system(&VertexSet::new(members.to_vec())?)
}
