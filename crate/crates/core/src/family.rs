//! Built-in one-parameter families of distributions.
//!
//! The registry is closed: every generator has event probabilities that are
//! polynomial in its (possibly reparametrized) parameter, which lets the
//! engines analyse a family exactly where that matters.

use std::fmt;
use std::sync::Arc;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::space::{same_space, Event, OutcomeSpace};
use crate::tolerance;

/// Grid step used by [`scan_extrema`].
pub const GRID_STEP: f64 = 1e-4;
/// Width to which [`scan_extrema`] refines a grid optimum.
pub const REFINE_TOL: f64 = 1e-8;

/// Product distribution of `n_tosses` independent tosses with heads
/// probability `p_heads`, over [`OutcomeSpace::coin_tosses`].
pub fn iid_coin(p_heads: f64, n_tosses: usize) -> Result<Distribution> {
    if n_tosses == 0 {
        return Err(Error::ParamRange {
            name: "n_tosses",
            value: 0.0,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let space = OutcomeSpace::coin_tosses(n_tosses)?;
    Generator::IidCoin { tosses: n_tosses }.generate(&space, p_heads)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DieBranch {
    /// `(1/12 + ε, 3/12 − ε, 1/6, …)`
    FavorTwo,
    /// `(3/12 + ε, 1/12 − ε, 1/6, …)`
    FavorOne,
}

/// Bias `ε ∈ [−1/48, 1/48]` applied to one of the two die branches.
pub fn die_bias(epsilon: f64, branch: DieBranch) -> Result<Distribution> {
    Generator::DieBias(branch).generate(&OutcomeSpace::die(), epsilon)
}

/// `(w, √w − w, √w − w, (1 − √w)²)` over two tosses: the independent
/// distribution with `P(HH) = w`.
pub fn independent_square(w: f64) -> Result<Distribution> {
    Generator::IndependentSquare.generate(&OutcomeSpace::coin_tosses(2)?, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    IidCoin { tosses: usize },
    DieBias(DieBranch),
    IndependentSquare,
}

impl Generator {
    pub fn space(&self) -> Result<Arc<OutcomeSpace>> {
        match self {
            Generator::IidCoin { tosses } => OutcomeSpace::coin_tosses(*tosses),
            Generator::DieBias(_) => Ok(OutcomeSpace::die()),
            Generator::IndependentSquare => OutcomeSpace::coin_tosses(2),
        }
    }

    /// Parameter values for which the generator is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Generator::IidCoin { .. } | Generator::IndependentSquare => (0.0, 1.0),
            Generator::DieBias(_) => (-1.0 / 48.0, 1.0 / 48.0),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::IidCoin { tosses } => format!("iid-coin({tosses})"),
            Generator::DieBias(DieBranch::FavorTwo) => "die-bias(favor-2)".into(),
            Generator::DieBias(DieBranch::FavorOne) => "die-bias(favor-1)".into(),
            Generator::IndependentSquare => "independent-square".into(),
        }
    }

    fn check(&self, theta: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let name = match self {
            Generator::IidCoin { .. } => "p_heads",
            Generator::DieBias(_) => "epsilon",
            Generator::IndependentSquare => "w",
        };
        if !(theta >= lo && theta <= hi) {
            return Err(Error::ParamRange {
                name,
                value: theta,
                lo,
                hi,
            });
        }
        Ok(())
    }

    pub fn generate(&self, space: &Arc<OutcomeSpace>, theta: f64) -> Result<Distribution> {
        self.check(theta)?;
        let t = self.reparametrize(theta);
        let probs = self.atom_polynomials().iter().map(|p| p.eval(t)).collect();
        Ok(Distribution::from_raw(space, clamped(probs)))
    }

    /// The variable in which [`Self::atom_polynomials`] are expressed.
    pub fn reparametrize(&self, theta: f64) -> f64 {
        match self {
            Generator::IndependentSquare => theta.sqrt(),
            _ => theta,
        }
    }

    /// Atom probabilities as polynomials in the reparametrized variable.
    pub fn atom_polynomials(&self) -> Vec<Polynomial> {
        match self {
            Generator::IidCoin { tosses } => {
                let n = *tosses;
                let heads = Polynomial::linear(0.0, 1.0);
                let tails = Polynomial::linear(1.0, -1.0);
                (0..1usize << n)
                    .map(|idx| {
                        // Most significant bit is the first toss; a 0 bit is H.
                        let tails_count = idx.count_ones() as usize;
                        heads.pow(n - tails_count).mul(&tails.pow(tails_count))
                    })
                    .collect()
            }
            Generator::DieBias(branch) => {
                let (first, second) = match branch {
                    DieBranch::FavorTwo => (1.0 / 12.0, 3.0 / 12.0),
                    DieBranch::FavorOne => (3.0 / 12.0, 1.0 / 12.0),
                };
                let mut polys = vec![Polynomial::linear(first, 1.0), Polynomial::linear(second, -1.0)];
                polys.extend((0..4).map(|_| Polynomial::constant(1.0 / 6.0)));
                polys
            }
            Generator::IndependentSquare => {
                let s = Polynomial::linear(0.0, 1.0);
                let cross = Polynomial::new(vec![0.0, 1.0, -1.0]);
                vec![
                    s.mul(&s),
                    cross.clone(),
                    cross,
                    Polynomial::linear(1.0, -1.0).pow(2),
                ]
            }
        }
    }
}

fn clamped(probs: Vec<f64>) -> Vec<f64> {
    probs.into_iter().map(|p| p.clamp(0.0, 1.0)).collect()
}

/// One generator swept over a parameter interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPiece {
    pub generator: Generator,
    pub lo: f64,
    pub hi: f64,
}

impl FamilyPiece {
    pub fn new(generator: Generator, lo: f64, hi: f64) -> Result<Self> {
        let (dlo, dhi) = generator.domain();
        if !(lo <= hi) {
            return Err(Error::ParamRange {
                name: "theta_lo",
                value: lo,
                lo: f64::NEG_INFINITY,
                hi,
            });
        }
        if lo < dlo || hi > dhi {
            return Err(Error::ParamRange {
                name: "theta",
                value: if lo < dlo { lo } else { hi },
                lo: dlo,
                hi: dhi,
            });
        }
        Ok(FamilyPiece { generator, lo, hi })
    }

    /// The piece's interval in the generator's polynomial variable.
    pub fn poly_interval(&self) -> (f64, f64) {
        (
            self.generator.reparametrize(self.lo),
            self.generator.reparametrize(self.hi),
        )
    }

    /// Parameter value whose reparametrization is `t`.
    pub fn theta_of(&self, t: f64) -> f64 {
        match self.generator {
            Generator::IndependentSquare => t * t,
            _ => t,
        }
    }
}

/// A union of one-parameter curves of distributions, optionally conditioned
/// on an event of the generators' space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricFamily {
    base: Arc<OutcomeSpace>,
    space: Arc<OutcomeSpace>,
    pieces: Vec<FamilyPiece>,
    conditioning: Option<Event>,
}

impl ParametricFamily {
    pub fn new(pieces: Vec<FamilyPiece>) -> Result<Self> {
        let first = pieces.first().ok_or(Error::EmptySet)?;
        let base = first.generator.space()?;
        for p in &pieces[1..] {
            same_space(&base, &p.generator.space()?)?;
        }
        Ok(ParametricFamily {
            space: Arc::clone(&base),
            base,
            pieces,
            conditioning: None,
        })
    }

    pub fn single(generator: Generator, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![FamilyPiece::new(generator, lo, hi)?])
    }

    /// `{iid_coin(p, n) : p ∈ [lo, hi]}`
    pub fn iid_coin(n_tosses: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::single(Generator::IidCoin { tosses: n_tosses }, lo, hi)
    }

    /// Both die branches over `ε ∈ [−half_width, half_width]`; a zero width
    /// gives the two-point set.
    pub fn die_bias(half_width: f64) -> Result<Self> {
        Self::new(vec![
            FamilyPiece::new(Generator::DieBias(DieBranch::FavorTwo), -half_width, half_width)?,
            FamilyPiece::new(Generator::DieBias(DieBranch::FavorOne), -half_width, half_width)?,
        ])
    }

    /// Distributions are expressed over this space (restricted to the
    /// conditioning event when conditioned).
    pub fn space(&self) -> &Arc<OutcomeSpace> {
        &self.space
    }

    /// The generators' space.
    pub fn base_space(&self) -> &Arc<OutcomeSpace> {
        &self.base
    }

    pub fn pieces(&self) -> &[FamilyPiece] {
        &self.pieces
    }

    pub fn conditioning(&self) -> Option<&Event> {
        self.conditioning.as_ref()
    }

    pub fn evaluate(&self, piece: usize, theta: f64) -> Result<Distribution> {
        let p = self
            .pieces
            .get(piece)
            .ok_or_else(|| Error::InvalidEvent(format!("family has no piece {piece}")))?;
        if theta < p.lo - 1e-15 || theta > p.hi + 1e-15 {
            return Err(Error::ParamRange {
                name: "theta",
                value: theta,
                lo: p.lo,
                hi: p.hi,
            });
        }
        let raw = p.generator.generate(&self.base, theta.clamp(p.lo, p.hi))?;
        match &self.conditioning {
            None => Ok(raw),
            Some(e) => {
                let c = raw.condition_restricted(e)?;
                c.rebase(&self.space)
            }
        }
    }

    /// Memberwise conditioning. Members giving `event` zero probability are
    /// excluded at evaluation time.
    pub fn condition(&self, event: &Event) -> Result<ParametricFamily> {
        let composed = match &self.conditioning {
            None => {
                same_space(&self.base, event.space())?;
                event.clone()
            }
            Some(prev) => {
                same_space(&self.space, event.space())?;
                let lifted: Vec<usize> = event.indices().iter().map(|&i| prev.indices()[i]).collect();
                Event::new(&self.base, &lifted)?
            }
        };
        Ok(ParametricFamily {
            space: self.base.restrict(&composed)?,
            base: Arc::clone(&self.base),
            pieces: self.pieces.clone(),
            conditioning: Some(composed),
        })
    }

    /// True when every piece is degenerate and all generate the same point.
    pub fn single_point(&self) -> Option<Distribution> {
        if self.pieces.iter().any(|p| p.lo != p.hi) {
            return None;
        }
        let first = self.evaluate(0, self.pieces[0].lo).ok()?;
        for k in 1..self.pieces.len() {
            let d = self.evaluate(k, self.pieces[k].lo).ok()?;
            if d.max_abs_diff(&first).ok()? > tolerance::NORM {
                return None;
            }
        }
        Some(first)
    }

    /// Each atom's probability as a polynomial in each piece's variable;
    /// `None` for conditioned families, whose probabilities are rational.
    pub fn piece_polynomials(&self, piece: usize) -> Option<Vec<Polynomial>> {
        if self.conditioning.is_some() {
            return None;
        }
        self.pieces.get(piece).map(|p| p.generator.atom_polynomials())
    }

    /// Smallest Euclidean distance from `d` to a member, with the piece and
    /// parameter attaining it.
    pub fn distance_to(&self, d: &Distribution) -> Result<(f64, usize, f64)> {
        same_space(&self.space, d.space())?;
        let mut best = (f64::INFINITY, 0, 0.0);
        for (k, piece) in self.pieces.iter().enumerate() {
            let (dist2, theta) = match self.piece_polynomials(k) {
                Some(polys) => {
                    let sq = polys
                        .iter()
                        .zip(d.probs())
                        .fold(Polynomial::constant(0.0), |acc, (p, &v)| {
                            let diff = p.add(&Polynomial::constant(-v));
                            acc.add(&diff.mul(&diff))
                        });
                    let (lo, hi) = piece.poly_interval();
                    let (min, at, _, _) = sq.extrema_on(lo, hi);
                    (min.max(0.0), piece.theta_of(at))
                }
                None => {
                    let ext = scan_extrema(piece.lo, piece.hi, |th| {
                        let m = self.evaluate(k, th).ok()?;
                        Some(
                            m.probs()
                                .iter()
                                .zip(d.probs())
                                .map(|(a, b)| (a - b) * (a - b))
                                .sum(),
                        )
                    });
                    match ext {
                        Some(e) => (e.min, e.argmin),
                        None => continue,
                    }
                }
            };
            if dist2.sqrt() < best.0 {
                best = (dist2.sqrt(), k, theta);
            }
        }
        Ok(best)
    }

    pub fn contains(&self, d: &Distribution, tol: f64) -> Result<bool> {
        Ok(self.distance_to(d)?.0 <= tol)
    }

    /// `(min, max)` over the family of `f(member)`, each with its
    /// `(piece, theta)` location.
    pub fn extrema_of<F>(&self, f: F) -> Result<FamilyExtrema>
    where
        F: Fn(&Distribution) -> f64,
    {
        let mut out: Option<FamilyExtrema> = None;
        for (k, piece) in self.pieces.iter().enumerate() {
            let ext = scan_extrema(piece.lo, piece.hi, |th| self.evaluate(k, th).ok().map(|d| f(&d)));
            let Some(e) = ext else { continue };
            let cur = FamilyExtrema {
                min: e.min,
                min_at: (k, e.argmin),
                max: e.max,
                max_at: (k, e.argmax),
                resolution: e.resolution,
            };
            out = Some(match out {
                None => cur,
                Some(mut acc) => {
                    if cur.min < acc.min {
                        acc.min = cur.min;
                        acc.min_at = cur.min_at;
                    }
                    if cur.max > acc.max {
                        acc.max = cur.max;
                        acc.max_at = cur.max_at;
                    }
                    acc.resolution = acc.resolution.max(cur.resolution);
                    acc
                }
            });
        }
        out.ok_or(Error::ZeroEvidenceEverywhere)
    }
}

impl fmt::Display for ParametricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|p| format!("{} on [{}, {}]", p.generator.name(), p.lo, p.hi))
            .collect();
        write!(f, "{}", parts.join(" ∪ "))?;
        if let Some(e) = &self.conditioning {
            write!(f, " | {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyExtrema {
    pub min: f64,
    pub min_at: (usize, f64),
    pub max: f64,
    pub max_at: (usize, f64),
    pub resolution: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanExtrema {
    pub min: f64,
    pub argmin: f64,
    pub max: f64,
    pub argmax: f64,
    /// Width of the final bracket around the reported optima.
    pub resolution: f64,
}

/// Extrema of `f` over `[lo, hi]` by a grid of step [`GRID_STEP`] (endpoints
/// included) followed by golden-section refinement of the best grid cells to
/// [`REFINE_TOL`]. Points where `f` returns `None` are skipped.
pub fn scan_extrema<F>(lo: f64, hi: f64, f: F) -> Option<ScanExtrema>
where
    F: Fn(f64) -> Option<f64>,
{
    let cells = (((hi - lo) / GRID_STEP).ceil() as usize).max(1);
    let grid: Vec<f64> = (0..=cells)
        .map(|i| {
            if i == cells {
                hi
            } else {
                lo + i as f64 * (hi - lo) / cells as f64
            }
        })
        .collect();
    let values: Vec<Option<f64>> = grid.iter().map(|&t| f(t)).collect();
    let mut best_min: Option<usize> = None;
    let mut best_max: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        let Some(v) = v else { continue };
        if best_min.is_none_or(|j| *v < values[j].unwrap()) {
            best_min = Some(i);
        }
        if best_max.is_none_or(|j| *v > values[j].unwrap()) {
            best_max = Some(i);
        }
    }
    let (imin, imax) = (best_min?, best_max?);
    let refine = |i: usize, sign: f64| -> (f64, f64) {
        let a = grid[i.saturating_sub(1)];
        let b = grid[(i + 1).min(cells)];
        let start = (grid[i], values[i].unwrap());
        let g = |t: f64| f(t).map(|v| sign * v);
        let (t, v) = golden_max(&g, a, b);
        if v > sign * start.1 {
            (t, sign * v)
        } else {
            start
        }
    };
    let (argmax, max) = refine(imax, 1.0);
    let (argmin, min) = refine(imin, -1.0);
    Some(ScanExtrema {
        min,
        argmin,
        max,
        argmax,
        resolution: REFINE_TOL,
    })
}

fn golden_max(g: &dyn Fn(f64) -> Option<f64>, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let eval = |t: f64| g(t).unwrap_or(f64::NEG_INFINITY);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > REFINE_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
    }
    let t = 0.5 * (a + b);
    (t, eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coin_points() {
        let low = iid_coin(0.1, 2).unwrap();
        for (a, b) in low.probs().iter().zip([0.01, 0.09, 0.09, 0.81]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(iid_coin(0.5, 2).unwrap().probs(), &[0.25; 4]);
        let mid = iid_coin(0.3, 2).unwrap();
        for (a, b) in mid.probs().iter().zip([0.09, 0.21, 0.21, 0.49]) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(iid_coin(1.2, 2), Err(Error::ParamRange { .. })));
        assert!(matches!(iid_coin(0.5, 0), Err(Error::ParamRange { .. })));
    }

    #[test]
    fn three_tosses_sum_to_one() {
        let d = iid_coin(0.2, 3).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((d.get(0) - 0.008).abs() < 1e-15);
        assert!((d.get(7) - 0.512).abs() < 1e-15);
    }

    #[test]
    fn die_branches() {
        let a = die_bias(0.0, DieBranch::FavorTwo).unwrap();
        assert_eq!(a.get(0), 1.0 / 12.0);
        assert_eq!(a.get(1), 3.0 / 12.0);
        let b = die_bias(0.0, DieBranch::FavorOne).unwrap();
        assert_eq!(b.get(0), 3.0 / 12.0);
        let edge = die_bias(1.0 / 48.0, DieBranch::FavorTwo).unwrap();
        assert!((edge.get(0) - 5.0 / 48.0).abs() < 1e-15);
        assert!(die_bias(0.05, DieBranch::FavorTwo).is_err());
    }

    #[test]
    fn independent_square_matches_coin() {
        let a = independent_square(0.09).unwrap();
        let b = iid_coin(0.3, 2).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        assert_eq!(independent_square(0.25).unwrap().probs(), &[0.25; 4]);
        assert!(independent_square(-0.1).is_err());
    }

    #[test]
    fn fair_die_is_not_on_either_branch() {
        let fam = ParametricFamily::die_bias(1.0 / 48.0).unwrap();
        let fair = Distribution::uniform(&OutcomeSpace::die());
        let (dist, _, _) = fam.distance_to(&fair).unwrap();
        assert!(dist > 0.05);
        let member = die_bias(0.01, DieBranch::FavorOne).unwrap();
        assert!(fam.contains(&member, 1e-9).unwrap());
    }

    #[test]
    fn scan_finds_interior_peak() {
        let e = scan_extrema(0.1, 0.5, |p| Some(-250.0 * p * p + 150.0 * p - 12.5)).unwrap();
        assert!((e.max - 10.0).abs() < 1e-9);
        assert!((e.argmax - 0.3).abs() < 1e-6);
        assert!(e.min.abs() < 1e-12);
    }

    #[test]
    fn conditioned_family_restricts_space() {
        let fam = ParametricFamily::iid_coin(2, 0.1, 0.5).unwrap();
        let e = Event::from_labels(fam.space(), &["HH", "HT"]).unwrap();
        let c = fam.condition(&e).unwrap();
        assert_eq!(c.space().atoms(), &["HH", "HT"]);
        let d = c.evaluate(0, 0.3).unwrap();
        assert!((d.get(0) - 0.3).abs() < 1e-12);
    }
}
