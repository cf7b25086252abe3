//! Solver and simulator for two-tier, two-candidate costly-voting elections.
//!
//! The electorate is split into three groups. Each voter privately prefers
//! candidate A or B, draws a participation cost, and votes iff the cost is
//! below her type's cutpoint. Group weights are awarded winner-take-all or
//! proportionally to vote shares, and the candidate with a majority of the
//! total weight wins. The crate computes exact pivot probabilities by tally
//! enumeration, solves the cutpoint equilibrium `c = beta * pi(c)` by damped
//! fixed-point iteration, estimates the same quantities by seeded Monte
//! Carlo, and derives welfare, inequality, and turnout-deviation summaries.

pub mod behavioral;
pub mod equilibrium;
pub mod exhaustive;
pub mod model;
pub mod montecarlo;
pub mod pivot;
mod util;
pub mod welfare;

pub use model::{Candidate, Category, ElectorateConfig, Rule, StrategyProfile, TieConvention};
pub use pivot::PivotVector;
