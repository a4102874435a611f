//! Markov chains with bounded increments and linear drift, the constants of
//! their Gaussian fluctuations, and three independent ways of checking them:
//! exact dynamic programming, exact moment recursions, and seeded Monte Carlo.
//!
//! The chains covered are the number of descents of a uniform permutation,
//! balanced two-colour urns (general random replacement, Friedman, removal),
//! balls on a circle, and internal DLA on the integer line.
//!
//! ```
//! use driftclt::models::make_descents_model;
//! use driftclt::theory::model_constants;
//! use driftclt::measure::q;
//!
//! let params = model_constants(&make_descents_model()).unwrap();
//! assert_eq!(params.limit_variance, q(1, 12));
//! ```

pub mod chain;
pub mod cli;
pub mod config;
pub mod error;
pub mod exact;
pub mod measure;
pub mod models;
pub mod rng;
pub mod stats;
pub mod theory;

pub use chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm};
pub use error::{Error, Result};
pub use measure::{FiniteMeasure, Prob, Q};
pub use models::Model;

/// Crate version with the git revision it was built from.
pub const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+git.", env!("DRIFTCLT_GIT_REV"));
