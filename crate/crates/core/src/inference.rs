//! Envelopes, credal conditioning, independence checks, and the
//! belief-function correspondence.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::credal::{CredalSet, LinearSystem, VertexSet};
use crate::distribution::{Distribution, IntervalDistribution};
use crate::error::{Error, Result};
use crate::hull::convex_hull_system;
use crate::lp::{fractional_bounds, Constraint, Extremum, Relation};
use crate::space::{same_space, Event, OutcomeSpace};
use crate::tolerance;

/// Lower and upper probability of an event over a credal set.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub event: Event,
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Distribution,
    pub upper_witness: Distribution,
}

pub fn envelope(set: &CredalSet, event: &Event) -> Result<Envelope> {
    same_space(set.space(), event.space())?;
    let (lower, lower_witness, upper, upper_witness) = match set {
        CredalSet::Vertices(v) => {
            let mut lo = (f64::INFINITY, 0);
            let mut hi = (f64::NEG_INFINITY, 0);
            for (k, m) in v.members().iter().enumerate() {
                let p = m.prob(event)?;
                if p < lo.0 {
                    lo = (p, k);
                }
                if p > hi.0 {
                    hi = (p, k);
                }
            }
            (lo.0, v.members()[lo.1].clone(), hi.0, v.members()[hi.1].clone())
        }
        CredalSet::Linear(sys) => {
            let ind = event.indicator();
            let (lo, lw) = sys.optimize(&ind, Extremum::Min)?;
            let (hi, hw) = sys.optimize(&ind, Extremum::Max)?;
            (lo.clamp(0.0, 1.0), lw, hi.clamp(0.0, 1.0), hw)
        }
        CredalSet::Family(f) => {
            let ext = f.extrema_of(|d| d.prob(event).unwrap_or(f64::NAN))?;
            (
                ext.min,
                f.evaluate(ext.min_at.0, ext.min_at.1)?,
                ext.max,
                f.evaluate(ext.max_at.0, ext.max_at.1)?,
            )
        }
    };
    Ok(Envelope {
        event: event.clone(),
        lower,
        upper: upper.max(lower),
        lower_witness,
        upper_witness,
    })
}

/// Lower envelope only; one optimization per call.
pub fn lower_probability(set: &CredalSet, event: &Event) -> Result<f64> {
    match set {
        CredalSet::Linear(sys) => Ok(sys.optimize(&event.indicator(), Extremum::Min)?.0.clamp(0.0, 1.0)),
        _ => Ok(envelope(set, event)?.lower),
    }
}

/// Result of memberwise conditioning.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned {
    /// The conditioned set, over the sub-space of the event's atoms.
    pub set: CredalSet,
    /// Vertex-set members dropped because they gave the event zero probability.
    pub dropped: usize,
    /// False when `set` is an outer approximation (linear systems are
    /// returned as the box of per-atom conditional bounds).
    pub exact: bool,
    /// Per-atom conditional bounds, for linear systems.
    pub bounds: Option<IntervalDistribution>,
}

pub fn conditionalize(set: &CredalSet, event: &Event) -> Result<Conditioned> {
    same_space(set.space(), event.space())?;
    match set {
        CredalSet::Vertices(v) => {
            let mut kept: Vec<Distribution> = Vec::new();
            let mut dropped = 0;
            for m in v.members() {
                match m.condition_restricted(event) {
                    Ok(c) => kept.push(c),
                    Err(Error::ZeroEvidence { .. }) => dropped += 1,
                    Err(e) => return Err(e),
                }
            }
            if kept.is_empty() {
                return Err(Error::ZeroEvidenceEverywhere);
            }
            let space = Arc::clone(kept[0].space());
            let kept = kept
                .iter()
                .map(|d| d.rebase(&space))
                .collect::<Result<Vec<_>>>()?;
            let distinct = VertexSet::new(kept)?.distinct();
            Ok(Conditioned {
                set: CredalSet::Vertices(VertexSet::new(distinct)?),
                dropped,
                exact: true,
                bounds: None,
            })
        }
        CredalSet::Linear(sys) => {
            let upper = sys.optimize(&event.indicator(), Extremum::Max)?.0;
            if upper <= tolerance::ZERO {
                return Err(Error::ZeroEvidenceEverywhere);
            }
            let sub = set.space().restrict(event)?;
            let mut lo = Vec::with_capacity(event.len());
            let mut hi = Vec::with_capacity(event.len());
            for &i in event.indices() {
                let atom = Event::new(set.space(), &[i])?;
                lo.push(fractional_bounds(sys, &atom, event, Extremum::Min)?.value);
                hi.push(fractional_bounds(sys, &atom, event, Extremum::Max)?.value);
            }
            let bounds = IntervalDistribution::new(&sub, lo, hi)?;
            Ok(Conditioned {
                set: CredalSet::Linear(LinearSystem::from_intervals(&bounds)?),
                dropped: 0,
                exact: event.len() <= 2,
                bounds: Some(bounds),
            })
        }
        CredalSet::Family(f) => {
            let upper = f.extrema_of(|d| d.prob(event).unwrap_or(0.0))?.max;
            if upper <= tolerance::ZERO {
                return Err(Error::ZeroEvidenceEverywhere);
            }
            Ok(Conditioned {
                set: CredalSet::Family(f.condition(event)?),
                dropped: 0,
                exact: true,
                bounds: None,
            })
        }
    }
}

/// Exact lower and upper values of `p(A | E)` over the set.
pub fn conditional_envelope(set: &CredalSet, a: &Event, e: &Event) -> Result<(f64, f64)> {
    same_space(set.space(), a.space())?;
    same_space(set.space(), e.space())?;
    let joint = a.intersect(e)?;
    match set {
        CredalSet::Linear(sys) => Ok((
            fractional_bounds(sys, a, e, Extremum::Min)?.value,
            fractional_bounds(sys, a, e, Extremum::Max)?.value,
        )),
        CredalSet::Vertices(v) => {
            let ratios: Vec<f64> = v
                .members()
                .iter()
                .filter_map(|m| {
                    let pe = m.prob(e).ok()?;
                    (pe > tolerance::ZERO).then(|| m.prob(&joint).ok().map(|pa| pa / pe))?
                })
                .collect();
            if ratios.is_empty() {
                return Err(Error::ZeroEvidenceEverywhere);
            }
            Ok((
                ratios.iter().copied().fold(f64::INFINITY, f64::min),
                ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ))
        }
        CredalSet::Family(f) => {
            let ext = f.extrema_of(|d| {
                let pe = d.prob(e).unwrap_or(0.0);
                if pe > tolerance::ZERO {
                    d.prob(&joint).unwrap_or(f64::NAN) / pe
                } else {
                    f64::NAN
                }
            });
            let ext = ext?;
            if ext.min.is_nan() || ext.max.is_nan() {
                return Err(Error::ZeroEvidenceEverywhere);
            }
            Ok((ext.min, ext.max))
        }
    }
}

/// One cell of an independence check.
#[derive(Debug, Clone, PartialEq)]
pub struct CellCheck {
    /// Value labels, in `(x, y, z)` or `(x, z)` order.
    pub cell: Vec<String>,
    /// `d(x, y, z)` (or `d(x, z)`).
    pub joint: f64,
    /// `d(x, y) d(y, z) / d(y)` (or `d(x) d(z)`).
    pub factorized: f64,
    /// `|d(x, y, z) d(y) − d(x, y) d(y, z)|` (or `|d(x, z) − d(x) d(z)|`).
    pub violation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub passed: bool,
    pub tolerance: f64,
    pub max_violation: f64,
    pub worst: Option<CellCheck>,
    pub cells: Vec<CellCheck>,
    /// Conditioning values with `d(y) <= τ_zero`, whose cells were skipped.
    pub skipped: Vec<String>,
}

impl IndependenceReport {
    pub fn cell(&self, labels: &[&str]) -> Option<&CellCheck> {
        self.cells
            .iter()
            .find(|c| c.cell.iter().map(String::as_str).eq(labels.iter().copied()))
    }
}

/// Tests `X ⫫ Z | Y` on a factorized distribution.
pub fn check_conditional_independence(
    d: &Distribution,
    x: &str,
    z: &str,
    given: &str,
    tol: f64,
) -> Result<IndependenceReport> {
    independence(d, x, z, Some(given), tol)
}

/// Tests `X ⫫ Z` on a factorized distribution.
pub fn check_pairwise_independence(
    d: &Distribution,
    x: &str,
    z: &str,
    tol: f64,
) -> Result<IndependenceReport> {
    independence(d, x, z, None, tol)
}

/// Tests `X ⫫ Z | Y` on nonnegative, not necessarily normalized, weights
/// over a factorized space. Independence is unchanged by rescaling; cell
/// values are reported on the weights' own scale.
pub fn check_conditional_independence_weights(
    space: &Arc<OutcomeSpace>,
    weights: &[f64],
    x: &str,
    z: &str,
    given: &str,
    tol: f64,
) -> Result<IndependenceReport> {
    if weights.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            got: weights.len(),
        });
    }
    if let Some((atom, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(**w >= 0.0 && w.is_finite()))
    {
        return Err(Error::NegativeMass {
            atom: space.atom(atom).to_string(),
            value,
        });
    }
    if weights.iter().sum::<f64>() <= tolerance::ZERO {
        return Err(Error::ZeroEvidenceEverywhere);
    }
    independence_on(space, weights, x, z, Some(given), tol)
}

pub(crate) fn independence(
    d: &Distribution,
    x: &str,
    z: &str,
    given: Option<&str>,
    tol: f64,
) -> Result<IndependenceReport> {
    independence_on(d.space(), d.probs(), x, z, given, tol)
}

fn independence_on(
    space: &Arc<OutcomeSpace>,
    weights: &[f64],
    x: &str,
    z: &str,
    given: Option<&str>,
    tol: f64,
) -> Result<IndependenceReport> {
    if !space.is_factorized() {
        return Err(Error::NotFactorized);
    }
    let mut names = vec![x, z];
    names.extend(given);
    for n in &names {
        space.variable_index(n)?;
    }
    if x == z || given.is_some_and(|g| g == x || g == z) {
        return Err(Error::InvalidEvent(
            "independence needs distinct variables".into(),
        ));
    }
    let (js, keep) = space.sub_product(&names)?;
    let mut joint = vec![0.0; js.len()];
    for (i, w) in weights.iter().enumerate() {
        let t = space.tuple(i)?;
        let sub: Vec<usize> = keep.iter().map(|&k| t[k]).collect();
        joint[js.encode(&sub)?] += w;
    }
    let (ix, iz) = (js.variable_index(x)?, js.variable_index(z)?);
    let iy = given.map(|g| js.variable_index(g)).transpose()?;
    let vars = js.variables().expect("product space");
    let nx = vars[ix].arity();
    let nz = vars[iz].arity();
    let ny = iy.map_or(1, |i| vars[i].arity());

    let at = |xv: usize, yv: usize, zv: usize| -> Result<f64> {
        let mut t = vec![0; vars.len()];
        t[ix] = xv;
        t[iz] = zv;
        if let Some(i) = iy {
            t[i] = yv;
        }
        Ok(joint[js.encode(&t)?])
    };

    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for yv in 0..ny {
        let mut py = 0.0;
        let mut pxy = vec![0.0; nx];
        let mut pyz = vec![0.0; nz];
        for xv in 0..nx {
            for zv in 0..nz {
                let v = at(xv, yv, zv)?;
                py += v;
                pxy[xv] += v;
                pyz[zv] += v;
            }
        }
        if let Some(k) = iy.filter(|_| py <= tolerance::ZERO) {
            skipped.push(vars[k].values[yv].clone());
            continue;
        }
        for xv in 0..nx {
            for zv in 0..nz {
                let j = at(xv, yv, zv)?;
                let mut cell = vec![vars[ix].values[xv].clone()];
                if let Some(i) = iy {
                    cell.push(vars[i].values[yv].clone());
                }
                cell.push(vars[iz].values[zv].clone());
                cells.push(CellCheck {
                    cell,
                    joint: j,
                    factorized: pxy[xv] * pyz[zv] / py,
                    violation: (j * py - pxy[xv] * pyz[zv]).abs(),
                });
            }
        }
    }
    let worst = cells
        .iter()
        .max_by(|a, b| a.violation.total_cmp(&b.violation))
        .cloned();
    let max_violation = worst.as_ref().map_or(0.0, |c| c.violation);
    Ok(IndependenceReport {
        passed: max_violation <= tol,
        tolerance: tol,
        max_violation,
        worst,
        cells,
        skipped,
    })
}

/// Subset enumeration limit for mass and belief functions.
pub const MAX_FRAME: usize = 20;

fn check_frame(space: &OutcomeSpace) -> Result<()> {
    if space.len() > MAX_FRAME {
        return Err(Error::SpaceTooLarge {
            atoms: space.len(),
            limit: MAX_FRAME,
        });
    }
    Ok(())
}

/// A basic probability assignment over subsets of a frame, keyed by bitmask
/// (bit `i` set when atom `i` is in the subset).
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    space: Arc<OutcomeSpace>,
    masses: BTreeMap<u32, f64>,
}

impl MassFunction {
    pub fn new(space: &Arc<OutcomeSpace>, masses: BTreeMap<u32, f64>) -> Result<Self> {
        check_frame(space)?;
        let full = full_mask(space.len());
        let mut total = 0.0;
        for (&set, &m) in &masses {
            if set & !full != 0 {
                return Err(Error::InvalidMass(format!("subset {set:#b} outside the frame")));
            }
            if set == 0 && m != 0.0 {
                return Err(Error::InvalidMass("empty set carries mass".into()));
            }
            if !m.is_finite() || m < -tolerance::NORM {
                return Err(Error::InvalidMass(format!("negative mass {m}")));
            }
            total += m;
        }
        if (total - 1.0).abs() > tolerance::NORM {
            return Err(Error::NotNormalized { sum: total });
        }
        Ok(MassFunction {
            space: Arc::clone(space),
            masses,
        })
    }

    /// Builds from `(atom labels, mass)` pairs; repeated subsets accumulate.
    pub fn from_labeled<S: AsRef<str>>(space: &Arc<OutcomeSpace>, entries: &[(Vec<S>, f64)]) -> Result<Self> {
        check_frame(space)?;
        let mut masses = BTreeMap::new();
        for (labels, m) in entries {
            let mask = Event::from_labels(space, labels)?
                .indices()
                .iter()
                .fold(0u32, |acc, &i| acc | 1 << i);
            *masses.entry(mask).or_insert(0.0) += m;
        }
        Self::new(space, masses)
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn masses(&self) -> &BTreeMap<u32, f64> {
        &self.masses
    }

    pub fn mass(&self, mask: u32) -> f64 {
        self.masses.get(&mask).copied().unwrap_or(0.0)
    }

    /// Dense vector indexed by subset mask.
    pub fn dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1usize << self.space.len()];
        for (&k, &m) in &self.masses {
            v[k as usize] = m;
        }
        v
    }
}

/// Belief values `Bel(A)` for every subset, indexed by mask.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefFunction {
    space: Arc<OutcomeSpace>,
    values: Vec<f64>,
}

impl BeliefFunction {
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, mask: u32) -> f64 {
        self.values[mask as usize]
    }

    pub fn of(&self, event: &Event) -> Result<f64> {
        same_space(&self.space, event.space())?;
        Ok(self.get(event_mask(event)))
    }

    /// `{p : p(A) >= Bel(A) for every A}` as a linear system.
    pub fn core(&self) -> Result<LinearSystem> {
        core_system(&self.space, &self.values)
    }
}

/// `Bel(A) = Σ_{B ⊆ A} m(B)` for every subset A.
pub fn belief_from_mass(m: &MassFunction) -> Result<BeliefFunction> {
    check_frame(m.space())?;
    Ok(BeliefFunction {
        space: Arc::clone(m.space()),
        values: zeta(m.dense(), m.space().len()),
    })
}

/// Subset-sum transform: `out[A] = Σ_{B ⊆ A} f[B]`.
pub fn zeta(mut f: Vec<f64>, n: usize) -> Vec<f64> {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..f.len() {
            if a & bit != 0 {
                f[a] += f[a ^ bit];
            }
        }
    }
    f
}

/// Möbius inverse of [`zeta`]: `out[A] = Σ_{B ⊆ A} (−1)^{|A∖B|} g[B]`.
pub fn mobius(mut g: Vec<f64>, n: usize) -> Vec<f64> {
    for i in 0..n {
        let bit = 1usize << i;
        for a in 0..g.len() {
            if a & bit != 0 {
                g[a] -= g[a ^ bit];
            }
        }
    }
    g
}

pub fn event_mask(event: &Event) -> u32 {
    event.indices().iter().fold(0u32, |acc, &i| acc | 1 << i)
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn core_system(space: &Arc<OutcomeSpace>, bel: &[f64]) -> Result<LinearSystem> {
    let n = space.len();
    let full = full_mask(n);
    let mut constraints = Vec::new();
    for mask in 1..full {
        if bel[mask as usize] <= 0.0 {
            continue;
        }
        let coeffs = (0..n).map(|i| f64::from((mask >> i & 1) as u8)).collect();
        constraints.push(Constraint::new(coeffs, Relation::Ge, bel[mask as usize]));
    }
    LinearSystem::new(space, constraints)
}

/// Belief-function analysis of a credal set's lower envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusReport {
    pub space: Arc<OutcomeSpace>,
    /// Lower envelope `Bel(A)` per subset mask.
    pub belief: Vec<f64>,
    /// Möbius transform `m(A)` per subset mask.
    pub mass: Vec<f64>,
    /// Every Möbius mass is at least `−τ_lp`.
    pub envelope_is_belief: bool,
    /// The set itself equals `{p : p(A) >= Bel(A) ∀A}`.
    pub set_equals_core: bool,
    /// The convex hull of the set equals the core; `None` when undecided
    /// (nondegenerate parametric families).
    pub hull_equals_core: Option<bool>,
}

impl MobiusReport {
    pub fn mass_of(&self, event: &Event) -> f64 {
        self.mass[event_mask(event) as usize]
    }

    pub fn belief_of(&self, event: &Event) -> f64 {
        self.belief[event_mask(event) as usize]
    }

    pub fn min_mass(&self) -> f64 {
        self.mass.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn mobius_report(set: &CredalSet) -> Result<MobiusReport> {
    let space = Arc::clone(set.space());
    check_frame(&space)?;
    let n = space.len();
    let size = 1usize << n;
    let mut belief = vec![0.0; size];
    belief[size - 1] = 1.0;
    for mask in 1..size - 1 {
        let e = Event::from_mask(&space, mask as u64)?;
        belief[mask] = lower_probability(set, &e)?;
    }
    let mass = mobius(belief.clone(), n);
    let envelope_is_belief = mass.iter().all(|&m| m >= -tolerance::LP);
    let core = core_system(&space, &belief)?;

    let (set_equals_core, hull_equals_core) = match set {
        CredalSet::Linear(sys) => {
            let eq = core_within(&core, sys)?;
            (eq, Some(eq))
        }
        CredalSet::Vertices(v) => vertex_core(v, &core)?,
        CredalSet::Family(f) => match f.single_point() {
            Some(p) => vertex_core(&VertexSet::new(vec![p])?, &core)?,
            None => (false, None),
        },
    };
    Ok(MobiusReport {
        space,
        belief,
        mass,
        envelope_is_belief,
        set_equals_core,
        hull_equals_core,
    })
}

fn vertex_core(v: &VertexSet, core: &LinearSystem) -> Result<(bool, Option<bool>)> {
    let hull = convex_hull_system(v)?;
    let eq = core_within(core, &hull)?;
    Ok((eq && v.distinct().len() == 1, Some(eq)))
}

/// Whether every member of `core` satisfies every constraint of `target`.
fn core_within(core: &LinearSystem, target: &LinearSystem) -> Result<bool> {
    for c in target.constraints() {
        let scale = 1.0 + c.rhs.abs() + c.coeffs.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let tol = tolerance::LP * scale;
        let ok = match c.relation {
            Relation::Le => core.optimize(&c.coeffs, Extremum::Max)?.0 <= c.rhs + tol,
            Relation::Ge => core.optimize(&c.coeffs, Extremum::Min)?.0 >= c.rhs - tol,
            Relation::Eq => {
                core.optimize(&c.coeffs, Extremum::Max)?.0 <= c.rhs + tol
                    && core.optimize(&c.coeffs, Extremum::Min)?.0 >= c.rhs - tol
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
