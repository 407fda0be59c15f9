//! Bet books and their expectation over credal sets.
//!
//! Payoffs are stated from the antagonist's side; the agent's payoff is the
//! negation. Prices and payouts are held in integer cents.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::credal::CredalSet;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::family::Generator;
use crate::lp::Extremum;
use crate::poly::Polynomial;
use crate::space::{same_space, Event, OutcomeSpace};
use crate::tolerance;

pub use crate::family::independent_square;

/// An amount of money in hundredths of a dollar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Cents(pub i64);

impl Cents {
    pub fn from_dollars(d: f64) -> Cents {
        Cents((d * 100.0).round() as i64)
    }

    pub fn dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        write!(f, "{sign}${}.{:02}", a / 100, a % 100)
    }
}

impl Add for Cents {
    type Output = Cents;
    fn add(self, o: Cents) -> Cents {
        Cents(self.0 + o.0)
    }
}

impl Sub for Cents {
    type Output = Cents;
    fn sub(self, o: Cents) -> Cents {
        Cents(self.0 - o.0)
    }
}

impl Neg for Cents {
    type Output = Cents;
    fn neg(self) -> Cents {
        Cents(-self.0)
    }
}

impl Mul<i64> for Cents {
    type Output = Cents;
    fn mul(self, k: i64) -> Cents {
        Cents(self.0 * k)
    }
}

/// Formats a dollar amount the way [`Cents`] displays.
pub fn format_dollars(d: f64) -> String {
    let sign = if d < -0.005 { "-" } else { "" };
    format!("{sign}${:.2}", d.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// The agent pays the price to the antagonist and collects the payout.
    #[serde(rename = "buy")]
    AgentBuys,
    /// The antagonist pays the price to the agent and collects the payout.
    #[serde(rename = "sell")]
    AgentSells,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ticket {
    pub side: Side,
    pub price: Cents,
    pub payout: Cents,
    pub event: Event,
}

impl Ticket {
    pub fn new(side: Side, price: Cents, payout: Cents, event: Event) -> Result<Self> {
        if price.0 < 0 || payout.0 < 0 {
            return Err(Error::InvalidTicket("negative amount".into()));
        }
        if price > payout {
            return Err(Error::InvalidTicket(format!(
                "price {price} exceeds payout {payout}"
            )));
        }
        Ok(Ticket {
            side,
            price,
            payout,
            event,
        })
    }

    /// Antagonist's net payoff if `atom` occurs.
    pub fn antagonist_payoff(&self, atom: usize) -> Cents {
        let paid = if self.event.contains(atom) {
            self.payout
        } else {
            Cents(0)
        };
        match self.side {
            Side::AgentBuys => self.price - paid,
            Side::AgentSells => paid - self.price,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BetBook {
    tickets: Vec<Ticket>,
}

impl BetBook {
    pub fn new(tickets: Vec<Ticket>) -> Result<Self> {
        let first = tickets
            .first()
            .ok_or_else(|| Error::InvalidTicket("empty book".into()))?;
        for t in &tickets[1..] {
            same_space(first.event.space(), t.event.space())?;
        }
        Ok(BetBook { tickets })
    }

    pub fn tickets(&self) -> &[Ticket] {
        &self.tickets
    }

    pub fn space(&self) -> &Arc<OutcomeSpace> {
        self.tickets[0].event.space()
    }

    /// The same tickets over another space with identical atom labels.
    pub fn rebase(&self, space: &Arc<OutcomeSpace>) -> Result<BetBook> {
        if space.atoms() != self.space().atoms() {
            return Err(Error::SpaceMismatch);
        }
        BetBook::new(
            self.tickets
                .iter()
                .map(|t| Ticket::new(t.side, t.price, t.payout, Event::new(space, t.event.indices())?))
                .collect::<Result<_>>()?,
        )
    }

    /// Every price and payout multiplied by `k`.
    pub fn scaled(&self, k: i64) -> Result<BetBook> {
        BetBook::new(
            self.tickets
                .iter()
                .map(|t| Ticket::new(t.side, t.price * k, t.payout * k, t.event.clone()))
                .collect::<Result<_>>()?,
        )
    }
}

/// Antagonist payoffs per ticket and net, per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    pub space: Arc<OutcomeSpace>,
    pub rows: Vec<Vec<Cents>>,
    pub net: Vec<Cents>,
}

impl PayoffTable {
    pub fn agent_net(&self) -> Vec<Cents> {
        self.net.iter().map(|c| -*c).collect()
    }

    pub fn net_dollars(&self) -> Vec<f64> {
        self.net.iter().map(|c| c.dollars()).collect()
    }
}

pub fn payoff_table(book: &BetBook) -> PayoffTable {
    let space = Arc::clone(book.space());
    let rows: Vec<Vec<Cents>> = book
        .tickets
        .iter()
        .map(|t| (0..space.len()).map(|a| t.antagonist_payoff(a)).collect())
        .collect();
    let net = (0..space.len())
        .map(|a| rows.iter().fold(Cents(0), |acc, r| acc + r[a]))
        .collect();
    PayoffTable { space, rows, net }
}

/// Antagonist's expected net payoff in dollars under `p`.
pub fn expectation_under(book: &BetBook, p: &Distribution) -> Result<f64> {
    same_space(book.space(), p.space())?;
    p.expectation(&payoff_table(book).net_dollars())
}

/// Antagonist's expectation as a polynomial in the generator's variable
/// (the heads probability for coin families, `√w` for the independent square).
pub fn expectation_polynomial(book: &BetBook, generator: Generator) -> Result<Polynomial> {
    let gspace = generator.space()?;
    if same_space(book.space(), &gspace).is_err() {
        return Err(Error::UnsupportedFamily(format!(
            "{} is not defined over {}",
            generator.name(),
            book.space()
        )));
    }
    let net = payoff_table(book).net_dollars();
    Ok(generator
        .atom_polynomials()
        .iter()
        .zip(net)
        .fold(Polynomial::constant(0.0), |acc, (p, v)| acc.add(&p.scale(v))))
}

/// Fair price of a ticket paying `payout` on `event` under `q`, in dollars.
pub fn fair_price(payout: Cents, event: &Event, q: &Distribution) -> Result<f64> {
    Ok(payout.dollars() * q.prob(event)?)
}

/// [`fair_price`] rounded to the nearest cent.
pub fn fair_price_cents(payout: Cents, event: &Event, q: &Distribution) -> Result<Cents> {
    fair_price(payout, event, q).map(Cents::from_dollars)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "BOOKED")]
    Booked,
    #[serde(rename = "NOT_BOOKED")]
    NotBooked,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Booked => "BOOKED",
            Verdict::NotBooked => "NOT_BOOKED",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BookAnalysis {
    pub verdict: Verdict,
    /// Largest agent expectation over the set, with a member attaining it.
    pub max_agent: f64,
    pub witness: Distribution,
    /// Smallest agent expectation over the set.
    pub min_agent: f64,
    /// Parametric families: parameter values where the agent expectation
    /// vanishes, per piece. Vertex sets: indices of members at zero.
    pub zeros: Vec<(usize, f64)>,
    /// Agent expectation polynomial per family piece, when available.
    pub polynomials: Vec<Polynomial>,
}

/// Whether the agent loses in expectation under every member of `set`,
/// except on a negligible subset where the expectation is exactly zero.
///
/// The verdict is BOOKED when the agent's maximum expectation is at most
/// `τ_lp` and its minimum is below `−τ_strict`: a nonconstant expectation
/// that never exceeds zero vanishes only on a proper face of a polytope or at
/// isolated parameter values of a family.
pub fn booked_in_expectation(book: &BetBook, set: &CredalSet) -> Result<BookAnalysis> {
    same_space(book.space(), set.space())?;
    let agent: Vec<f64> = payoff_table(book).net_dollars().into_iter().map(|v| -v).collect();
    let (max_agent, witness, min_agent, zeros, polynomials) = match set {
        CredalSet::Vertices(v) => {
            let values = v
                .members()
                .iter()
                .map(|m| m.expectation(&agent))
                .collect::<Result<Vec<_>>>()?;
            let (imax, max) = argext(&values, |a, b| a > b);
            let (_, min) = argext(&values, |a, b| a < b);
            let zeros = values
                .iter()
                .enumerate()
                .filter(|(_, v)| v.abs() <= tolerance::STRICT)
                .map(|(i, v)| (i, *v))
                .collect();
            (max, v.members()[imax].clone(), min, zeros, Vec::new())
        }
        CredalSet::Linear(sys) => {
            let (max, w) = sys.optimize(&agent, Extremum::Max)?;
            let (min, _) = sys.optimize(&agent, Extremum::Min)?;
            (max, w, min, Vec::new(), Vec::new())
        }
        CredalSet::Family(f) => {
            let mut best: Option<(f64, usize, f64)> = None;
            let mut min = f64::INFINITY;
            let mut zeros = Vec::new();
            let mut polys = Vec::new();
            for (k, piece) in f.pieces().iter().enumerate() {
                let (pmax, at_max, pmin) = match f.piece_polynomials(k) {
                    Some(atoms) => {
                        let poly = atoms
                            .iter()
                            .zip(&agent)
                            .fold(Polynomial::constant(0.0), |acc, (p, v)| acc.add(&p.scale(*v)));
                        let (lo, hi) = piece.poly_interval();
                        let (pmin, _, pmax, tmax) = poly.extrema_on(lo, hi);
                        let scale = 1.0 + poly.max_abs_coeff();
                        if poly.max_abs_coeff() > tolerance::STRICT {
                            zeros.extend(
                                poly.roots_in(lo, hi, 1e-12 * scale)
                                    .into_iter()
                                    .map(|t| (k, piece.theta_of(t))),
                            );
                        }
                        polys.push(poly);
                        (pmax, piece.theta_of(tmax), pmin)
                    }
                    None => {
                        let e = crate::family::scan_extrema(piece.lo, piece.hi, |th| {
                            f.evaluate(k, th).ok().and_then(|d| d.expectation(&agent).ok())
                        })
                        .ok_or(Error::ZeroEvidenceEverywhere)?;
                        (e.max, e.argmax, e.min)
                    }
                };
                min = min.min(pmin);
                if best.is_none_or(|b| pmax > b.0) {
                    best = Some((pmax, k, at_max));
                }
            }
            let (max, k, theta) = best.ok_or(Error::EmptySet)?;
            (max, f.evaluate(k, theta)?, min, zeros, polys)
        }
    };
    let verdict = if max_agent <= tolerance::LP && min_agent < -tolerance::STRICT {
        Verdict::Booked
    } else {
        Verdict::NotBooked
    };
    Ok(BookAnalysis {
        verdict,
        max_agent,
        witness,
        min_agent,
        zeros,
        polynomials,
    })
}

fn argext(values: &[f64], better: impl Fn(f64, f64) -> bool) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if better(v, best.1) {
            best = (i, v);
        }
    }
    best
}
