//! Seeded fixtures shared by the benches.

use std::sync::Arc;

use credal::{Constraint, Distribution, LinearSystem, OutcomeSpace, Relation, UtilityMatrix};

pub fn atoms(n: usize) -> Arc<OutcomeSpace> {
    OutcomeSpace::from_atoms((0..n).map(|i| format!("s{i}"))).unwrap()
}

/// Small deterministic generator so fixtures need no RNG dependency.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed.wrapping_mul(6364136223846793005).wrapping_add(1))
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub fn random_members(space: &Arc<OutcomeSpace>, k: usize, rng: &mut Lcg) -> Vec<Distribution> {
    (0..k)
        .map(|_| {
            let w: Vec<f64> = (0..space.len()).map(|_| 0.05 + rng.uniform()).collect();
            let t: f64 = w.iter().sum();
            Distribution::new(space, w.iter().map(|x| x / t).collect()).unwrap()
        })
        .collect()
}

/// A feasible system of `m` random half-spaces around a random interior point.
pub fn random_system(space: &Arc<OutcomeSpace>, m: usize, rng: &mut Lcg) -> LinearSystem {
    let center = random_members(space, 1, rng).remove(0);
    let cons = (0..m)
        .map(|_| {
            let a: Vec<f64> = (0..space.len()).map(|_| 2.0 * rng.uniform() - 1.0).collect();
            let at: f64 = a.iter().zip(center.probs()).map(|(x, y)| x * y).sum();
            Constraint::new(a, Relation::Le, at + 0.2 * rng.uniform())
        })
        .collect();
    LinearSystem::new(space, cons).unwrap()
}

pub fn random_utility(space: &Arc<OutcomeSpace>, actions: usize, rng: &mut Lcg) -> UtilityMatrix {
    let names: Vec<String> = (0..actions).map(|a| format!("a{a}")).collect();
    let rows = (0..actions)
        .map(|_| (0..space.len()).map(|_| 10.0 * rng.uniform()).collect())
        .collect();
    UtilityMatrix::new(space, names, rows).unwrap()
}
