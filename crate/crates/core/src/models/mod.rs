//! Concrete chains: descents, balanced urns (general, Friedman, removal),
//! balls on a circle, and internal DLA.

mod circle;
mod descents;
mod idla;
mod permutations;
mod urn;

pub use circle::Circle;
pub use descents::Descents;
pub use idla::{idla_exact, simulate_idla, Idla, IdlaState};
pub use permutations::{count_descents, descents_by_insertion, enumerate_descents, MAX_ENUMERATION};
pub use urn::{make_balanced_urn, make_friedman, make_removal_urn, BalancedUrn, UrnSpec};

use rand::RngCore;

use crate::chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm, RawRange};
use crate::error::Result;
use crate::measure::{FiniteMeasure, Prob, Q};

/// Any of the supported chains.
#[derive(Debug, Clone)]
pub enum Model {
    Descents(Descents),
    Urn(Box<BalancedUrn>),
    Circle(Circle),
    Idla(Idla),
}

pub fn make_descents_model() -> Model {
    Model::Descents(Descents)
}

pub fn make_circle_model() -> Model {
    Model::Circle(Circle)
}

pub fn make_idla_model() -> Model {
    Model::Idla(Idla)
}

impl From<BalancedUrn> for Model {
    fn from(urn: BalancedUrn) -> Self {
        Model::Urn(Box::new(urn))
    }
}

impl Model {
    pub fn as_urn(&self) -> Option<&BalancedUrn> {
        match self {
            Model::Urn(u) => Some(u.as_ref()),
            _ => None,
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $m:ident => $e:expr) => {
        match $self {
            Model::Descents($m) => $e,
            Model::Urn($m) => $e,
            Model::Circle($m) => $e,
            Model::Idla($m) => $e,
        }
    };
}

impl Chain for Model {
    fn name(&self) -> String {
        dispatch!(self, m => m.name())
    }

    fn start(&self) -> ChainState {
        dispatch!(self, m => m.start())
    }

    fn affine(&self) -> AffineMap {
        dispatch!(self, m => m.affine())
    }

    fn raw_range(&self, n: u64) -> RawRange {
        dispatch!(self, m => m.raw_range(n))
    }

    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>> {
        dispatch!(self, m => m.increment_law(state))
    }

    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64 {
        dispatch!(self, m => m.sample_increment(state, rng))
    }

    fn drift_term(&self, k: u32, n: u64) -> DriftTerm {
        dispatch!(self, m => m.drift_term(k, n))
    }

    fn drift_limits(&self) -> DriftLimits {
        dispatch!(self, m => m.drift_limits())
    }

    fn increment_bound(&self) -> Q {
        dispatch!(self, m => m.increment_bound())
    }

    fn drift_form_exact(&self, k: u32) -> bool {
        dispatch!(self, m => m.drift_form_exact(k))
    }
}
