//! Sets of probability distributions over finite outcome spaces.
//!
//! Credal sets come in three representations: finite vertex lists, linear
//! constraint systems, and built-in one-parameter families. On top of them the
//! crate computes envelopes and conditional bounds, belief-function (Möbius)
//! analysis, E-admissibility and group decision criteria, linear opinion
//! pools, and expectation analysis of bet books.
// Index loops mirror the formulas; negated comparisons also reject NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod betting;
pub mod credal;
pub mod decision;
pub mod distribution;
pub mod error;
pub mod family;
pub mod hull;
pub mod inference;
pub mod io;
pub mod lp;
pub mod poly;
pub mod pooling;
pub mod space;
pub mod tolerance;

pub use betting::{BetBook, Cents, Side, Ticket, Verdict};
pub use credal::{interval_to_linear_system, CredalSet, LinearSystem, VertexSet};
pub use decision::UtilityMatrix;
pub use distribution::{mixture, Distribution, IntervalDistribution};
pub use error::{Error, Result};
pub use family::{
    die_bias, iid_coin, independent_square, DieBranch, FamilyPiece, Generator, ParametricFamily,
};
pub use inference::{BeliefFunction, MassFunction};
pub use io::Document;
pub use lp::{Constraint, Extremum, Relation};
pub use pooling::PoolingProblem;
pub use space::{Event, OutcomeSpace, Variable};
