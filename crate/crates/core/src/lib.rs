//! Agent-based collective search on the cryptarithm DONALD + GERALD = ROBERT.
//!
//! Groups of agents hunt for the puzzle's unique solution in the space of
//! 10! digit-to-letter assignments. Three dynamics are provided: agents
//! searching independently, agents imitating the lowest-cost member of the
//! group, and agents sharing column hints through a bounded blackboard.
//! Exact oracles for the cost landscape and the hint catalog sit alongside.

mod draw;
pub mod error;
pub mod experiment;
pub mod hints;
pub mod landscape;
pub mod puzzle;
pub mod search;
pub mod stats;

pub use error::{Error, Result};
pub use hints::{Hint, HintCatalog, HintId};
pub use puzzle::{Assignment, Letter};
pub use search::{run_search, SearchOutcome, SearchParams, Strategy};

/// Generator behind every simulation stream.
pub type SimRng = rand_xoshiro::Xoshiro256PlusPlus;

/// Scalar for sampled statistics.
pub type Real = f64;

/// Exact rational scalar.
pub type Exact = num_rational::BigRational;

pub type CostSample = stats::CostSample<Real>;
pub type CostSummary = stats::CostSummary<Real>;
pub type ExponentialFit = stats::ExponentialFit<Real>;
pub type PhiEstimate = stats::PhiEstimate<Real>;
