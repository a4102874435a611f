//! JSON model configurations.
//!
//! ```json
//! {"kind": "urn", "N": 2, "mu1": [[-1, 1, 2], [2, 1, 2]], "mu2": [[1, 1, 1]], "a0": 1, "b0": 1}
//! ```
//!
//! Measures are lists of `[value, numerator, denominator]` so that masses stay
//! exact. `a0` and `b0` default to 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{FiniteMeasure, Q};
use crate::models::{
    make_balanced_urn, make_circle_model, make_descents_model, make_friedman, make_idla_model,
    make_removal_urn, Model, UrnSpec,
};

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Descents {},
    Urn {
        #[serde(rename = "N")]
        balance: u32,
        mu1: Vec<[i64; 3]>,
        mu2: Vec<[i64; 3]>,
        #[serde(default = "one")]
        a0: u64,
        #[serde(default = "one")]
        b0: u64,
    },
    Friedman {
        alpha: u32,
        beta: u32,
        #[serde(default = "one")]
        a0: u64,
        #[serde(default = "one")]
        b0: u64,
    },
    Removal {
        b: u32,
        mu: Vec<[i64; 3]>,
        #[serde(default = "one")]
        a0: u64,
        #[serde(default = "one")]
        b0: u64,
    },
    Circle {},
    Idla {},
}

fn measure(triples: &[[i64; 3]]) -> Result<FiniteMeasure<Q>> {
    FiniteMeasure::from_triples(triples)
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            ModelConfig::Descents {} => make_descents_model(),
            ModelConfig::Circle {} => make_circle_model(),
            ModelConfig::Idla {} => make_idla_model(),
            ModelConfig::Urn { .. } => make_balanced_urn(self.urn_spec()?.expect("urn kind"))?.into(),
            ModelConfig::Friedman { alpha, beta, a0, b0 } => make_friedman(*alpha, *beta, *a0, *b0)?.into(),
            ModelConfig::Removal { b, mu, a0, b0 } => make_removal_urn(*b, measure(mu)?, *a0, *b0)?.into(),
        })
    }

    /// The urn specification for urn-family configs.
    pub fn urn_spec(&self) -> Result<Option<UrnSpec>> {
        match self {
            ModelConfig::Urn { balance, mu1, mu2, a0, b0 } => {
                Ok(Some(UrnSpec::new(*balance, measure(mu1)?, measure(mu2)?, *a0, *b0)?))
            }
            ModelConfig::Friedman { .. } | ModelConfig::Removal { .. } => {
                Ok(self.build()?.as_urn().map(|u| u.spec().clone()))
            }
            _ => Ok(None),
        }
    }
}
