//! JSON problem documents.
//!
//! One document type carries every input the engines take. Sections are
//! optional; each command reads the ones it needs, so a document written by
//! one command can be read by another.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::betting::{BetBook, Cents, Side, Ticket};
use crate::credal::{CredalSet, LinearSystem};
use crate::decision::UtilityMatrix;
use crate::distribution::{Distribution, IntervalDistribution};
use crate::error::{Error, Result};
use crate::family::{FamilyPiece, Generator, ParametricFamily};
use crate::inference::MassFunction;
use crate::lp::Constraint;
use crate::pooling::PoolingProblem;
use crate::space::{Event, OutcomeSpace, Variable};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Variables { variables: Vec<Variable> },
    Atoms { atoms: Vec<String> },
}

impl SpaceSpec {
    pub fn of(space: &OutcomeSpace) -> SpaceSpec {
        match space.variables() {
            Some(vs) => SpaceSpec::Variables {
                variables: vs.to_vec(),
            },
            None => SpaceSpec::Atoms {
                atoms: space.atoms().to_vec(),
            },
        }
    }

    pub fn build(&self) -> Result<Arc<OutcomeSpace>> {
        match self {
            SpaceSpec::Variables { variables } => OutcomeSpace::product(variables.clone()),
            SpaceSpec::Atoms { atoms } => OutcomeSpace::from_atoms(atoms.iter()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum FamilySpec {
    IidCoin { tosses: usize, lo: f64, hi: f64 },
    DieBias { half_width: f64 },
    IndependentSquare { lo: f64, hi: f64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<ParametricFamily> {
        match self.clone() {
            FamilySpec::IidCoin { tosses, lo, hi } => ParametricFamily::iid_coin(tosses, lo, hi),
            FamilySpec::DieBias { half_width } => ParametricFamily::die_bias(half_width),
            FamilySpec::IndependentSquare { lo, hi } => {
                ParametricFamily::new(vec![FamilyPiece::new(Generator::IndependentSquare, lo, hi)?])
            }
        }
    }
}

/// A built-in family, optionally conditioned on an event of its base space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    #[serde(flatten)]
    pub spec: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub given: Option<Vec<String>>,
}

impl FamilyDoc {
    pub fn build(&self) -> Result<ParametricFamily> {
        let fam = self.spec.build()?;
        match &self.given {
            Some(labels) => fam.condition(&Event::from_labels(fam.base_space(), labels)?),
            None => Ok(fam),
        }
    }
}

/// How the document's credal set is formed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CredalSpec {
    /// Finite set of the named distributions.
    Vertices(Vec<String>),
    /// Linear system from the named interval distribution.
    Intervals(String),
    Constraints(Vec<Constraint>),
    Family(FamilyDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilitySpec {
    pub actions: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassSpec {
    pub set: Vec<String>,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TicketSpec {
    pub side: Side,
    pub price_cents: i64,
    pub payout_cents: i64,
    pub event: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub distributions: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub intervals: BTreeMap<String, IntervalSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub credal: Option<CredalSpec>,
    /// Ordered member names for group criteria and pooling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub utilities: Option<UtilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masses: Option<Vec<MassSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tickets: Option<Vec<TicketSpec>>,
    /// Results written by a command; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<serde_json::Value>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Document holding `space` and the given named distributions.
    pub fn with_distributions(space: &OutcomeSpace, dists: &[(&str, &Distribution)]) -> Document {
        Document {
            space: Some(SpaceSpec::of(space)),
            distributions: dists
                .iter()
                .map(|(n, d)| (n.to_string(), d.probs().to_vec()))
                .collect(),
            members: Some(dists.iter().map(|(n, _)| n.to_string()).collect()),
            ..Document::default()
        }
    }

    /// The declared space; books and families imply one when it is absent.
    pub fn space(&self) -> Result<Arc<OutcomeSpace>> {
        match (&self.space, &self.credal) {
            (Some(s), _) => s.build(),
            (None, Some(CredalSpec::Family(f))) => Ok(Arc::clone(f.build()?.space())),
            _ => Err(Error::Parse("missing \"space\"".into())),
        }
    }

    pub fn distribution(&self, name: &str) -> Result<Distribution> {
        let probs = self
            .distributions
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no distribution named {name:?}")))?;
        Distribution::new(&self.space()?, probs.clone())
    }

    /// Member names in order: `members` if given, else every distribution.
    pub fn member_names(&self) -> Vec<String> {
        self.members
            .clone()
            .unwrap_or_else(|| self.distributions.keys().cloned().collect())
    }

    pub fn members(&self) -> Result<Vec<(String, Distribution)>> {
        let names = self.member_names();
        if names.is_empty() {
            return Err(Error::Parse("no distributions".into()));
        }
        names
            .into_iter()
            .map(|n| self.distribution(&n).map(|d| (n, d)))
            .collect()
    }

    pub fn interval(&self, name: &str) -> Result<IntervalDistribution> {
        let iv = self
            .intervals
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no interval distribution named {name:?}")))?;
        IntervalDistribution::new(&self.space()?, iv.lo.clone(), iv.hi.clone())
    }

    /// The credal set: the `credal` section if present, else the only
    /// interval distribution, else the members as a finite set.
    pub fn credal_set(&self) -> Result<CredalSet> {
        match &self.credal {
            Some(CredalSpec::Vertices(names)) => CredalSet::vertices(
                names
                    .iter()
                    .map(|n| self.distribution(n))
                    .collect::<Result<_>>()?,
            ),
            Some(CredalSpec::Intervals(name)) => {
                LinearSystem::from_intervals(&self.interval(name)?).map(CredalSet::Linear)
            }
            Some(CredalSpec::Constraints(cs)) => {
                LinearSystem::new(&self.space()?, cs.clone()).map(CredalSet::Linear)
            }
            Some(CredalSpec::Family(f)) => {
                let fam = f.build()?;
                if let Some(s) = &self.space {
                    crate::space::same_space(&s.build()?, fam.space())?;
                }
                Ok(CredalSet::Family(fam))
            }
            None if self.intervals.len() == 1 => {
                let name = self.intervals.keys().next().expect("one interval");
                LinearSystem::from_intervals(&self.interval(name)?).map(CredalSet::Linear)
            }
            None => CredalSet::vertices(self.members()?.into_iter().map(|(_, d)| d).collect()),
        }
    }

    pub fn utilities(&self) -> Result<UtilityMatrix> {
        let u = self
            .utilities
            .as_ref()
            .ok_or_else(|| Error::Parse("missing \"utilities\"".into()))?;
        UtilityMatrix::new(&self.space()?, u.actions.clone(), u.matrix.clone())
    }

    pub fn mass_function(&self) -> Result<MassFunction> {
        let ms = self
            .masses
            .as_ref()
            .ok_or_else(|| Error::Parse("missing \"masses\"".into()))?;
        let labeled: Vec<(Vec<String>, f64)> = ms.iter().map(|m| (m.set.clone(), m.m)).collect();
        MassFunction::from_labeled(&self.space()?, &labeled)
    }

    pub fn pooling_problem(&self) -> Result<PoolingProblem> {
        let experts = self.members()?;
        match &self.weights {
            Some(w) => PoolingProblem::new(experts, w.clone()),
            None => PoolingProblem::equal_weights(experts),
        }
    }

    /// The bet book. Without a declared space, two-toss coin outcomes are
    /// assumed.
    pub fn book(&self) -> Result<BetBook> {
        let ts = self
            .tickets
            .as_ref()
            .ok_or_else(|| Error::Parse("missing \"tickets\"".into()))?;
        let space = match &self.space {
            Some(s) => s.build()?,
            None => match &self.credal {
                Some(CredalSpec::Family(f)) => Arc::clone(f.build()?.space()),
                _ => OutcomeSpace::coin_tosses(2)?,
            },
        };
        BetBook::new(
            ts.iter()
                .map(|t| {
                    Ticket::new(
                        t.side,
                        Cents(t.price_cents),
                        Cents(t.payout_cents),
                        Event::from_labels(&space, &t.event)?,
                    )
                })
                .collect::<Result<_>>()?,
        )
    }

    pub fn book_document(book: &BetBook) -> Document {
        Document {
            space: Some(SpaceSpec::of(book.space())),
            tickets: Some(
                book.tickets()
                    .iter()
                    .map(|t| TicketSpec {
                        side: t.side,
                        price_cents: t.price.0,
                        payout_cents: t.payout.0,
                        event: t.event.labels().iter().map(|s| s.to_string()).collect(),
                    })
                    .collect(),
            ),
            ..Document::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_forms() {
        let d = Document::parse(r#"{"space": {"atoms": ["a", "b"]}, "distributions": {"p": [0.25, 0.75]}}"#)
            .unwrap();
        assert_eq!(d.space().unwrap().len(), 2);
        assert_eq!(d.distribution("p").unwrap().get(1), 0.75);
        let d = Document::parse(
            r#"{"space": {"variables": [{"name": "R", "values": ["NJ", "CA"]}, {"name": "E", "values": ["Yes", "No"]}]}}"#,
        )
        .unwrap();
        assert!(d.space().unwrap().is_factorized());
        assert_eq!(d.space().unwrap().len(), 4);
    }

    #[test]
    fn credal_forms() {
        let d = Document::parse(
            r#"{"space": {"atoms": ["a","b","c","d"]},
                "intervals": {"box": {"lo": [0.15,0.15,0.15,0.15], "hi": [0.4,0.4,0.4,0.4]}}}"#,
        )
        .unwrap();
        assert_eq!(d.credal_set().unwrap().kind(), "linear-system");
        let d = Document::parse(
            r#"{"space": {"atoms": ["a","b"]},
                "credal": {"constraints": [{"coeffs": [1, 0], "relation": ">=", "rhs": 0.2}]}}"#,
        )
        .unwrap();
        assert_eq!(d.credal_set().unwrap().kind(), "linear-system");
        let d = Document::parse(
            r#"{"credal": {"family": {"generator": "iid_coin", "tosses": 2, "lo": 0.1, "hi": 0.5}}}"#,
        )
        .unwrap();
        assert_eq!(d.credal_set().unwrap().kind(), "parametric-family");
        assert_eq!(d.space().unwrap().atoms(), &["HH", "HT", "TH", "TT"]);
    }

    #[test]
    fn book_roundtrip() {
        let d = Document::parse(
            r#"{"tickets": [{"side": "buy", "price_cents": 1300, "payout_cents": 10000, "event": ["HH"]},
                           {"side": "sell", "price_cents": 2550, "payout_cents": 15000, "event": ["HT"]}]}"#,
        )
        .unwrap();
        let book = d.book().unwrap();
        let again = Document::parse(&Document::book_document(&book).to_json()).unwrap();
        assert_eq!(again.book().unwrap(), book);
    }

    #[test]
    fn malformed_is_parse_error() {
        assert!(matches!(Document::parse("{"), Err(Error::Parse(_))));
        assert!(matches!(Document::parse(r#"{"bogus": 1}"#), Err(Error::Parse(_))));
    }
}
