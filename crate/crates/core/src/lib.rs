//! Finite-horizon Kelly gambling as a numerical toolkit.
//!
//! The crate covers single-shot and n-round betting against posted odds:
//! method-of-types combinatorics, Renyi risk-reward frontiers with the
//! optimal tilted strategies, CRRA-utility equivalence, tripartite
//! side-information games with their asymptotic Nash value, resource-theory
//! monotones, and the Kraft-code realization of betting as communication.
//!
//! Rates are in bits throughout (base-2 logs). Desk scale is the contract:
//! everything is exact or oracle-checked at alphabet sizes and horizons a
//! laptop can enumerate.

pub mod cli;
pub mod dist;
pub mod divergence;
pub mod error;
pub mod kelly;
mod math;
pub mod resource;
pub mod sideinfo;
pub mod sim;
pub mod types;
pub mod utility;

pub use dist::{CondStrategy, Dist, JointDist, PROB_TOL};
pub use error::{Error, Result};
pub use kelly::RiskRewardPoint;
pub use sideinfo::TripartiteDist;
pub use types::{EmpiricalType, JointEmpiricalType};
