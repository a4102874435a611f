//! Internal DLA on the integer line.
//!
//! Site 0 starts occupied. Each particle walks from 0 until it leaves the
//! occupied interval `[-L, R]`; by the gambler's-ruin exit law it settles at
//! `-(L + 1)` with probability `(R + 1) / (L + R + 2)` and at `R + 1`
//! otherwise. `N_n = L` after `n` particles.

use std::collections::BTreeMap;

use rand::{Rng, RngCore};
use serde::Serialize;

use crate::chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm, RawRange};
use crate::error::{Error, Result};
use crate::exact::LatticeDistribution;
use crate::measure::{q, q_int, FiniteMeasure, Prob, Q};

/// Occupied sites on each side of the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IdlaState {
    pub left: u64,
    pub right: u64,
}

impl IdlaState {
    pub fn particles(&self) -> u64 {
        self.left + self.right
    }

    /// Probability that the next particle settles on the left, as `(num, den)`.
    pub fn left_exit(&self) -> (i64, i64) {
        (self.right as i64 + 1, (self.left + self.right) as i64 + 2)
    }
}

/// Runs `n` particles with the exit law.
pub fn simulate_idla<R: RngCore>(n: u64, rng: &mut R) -> IdlaState {
    let mut state = IdlaState { left: 0, right: 0 };
    for _ in 0..n {
        let (num, den) = state.left_exit();
        if rng.random_range(0..den) < num {
            state.left += 1;
        } else {
            state.right += 1;
        }
    }
    state
}

/// Exact law of `N_n`, evolving the joint law of `(L, R)` particle by particle.
pub fn idla_exact<P: Prob>(n: u64) -> Result<LatticeDistribution<P>> {
    if n == 0 {
        return Err(Error::OutOfRange("idla_exact needs n >= 1".into()));
    }
    let mut law: BTreeMap<IdlaState, P> = BTreeMap::new();
    law.insert(IdlaState { left: 0, right: 0 }, P::one());
    for _ in 0..n {
        let mut next: BTreeMap<IdlaState, P> = BTreeMap::new();
        for (state, p) in law {
            let (num, den) = state.left_exit();
            let to_left = IdlaState { left: state.left + 1, ..state };
            let to_right = IdlaState { right: state.right + 1, ..state };
            let p_left = p.clone() * P::frac(num, den);
            let p_right = p * P::frac(den - num, den);
            for (s, m) in [(to_left, p_left), (to_right, p_right)] {
                let slot = next.entry(s).or_insert_with(P::zero);
                *slot = slot.clone() + m;
            }
        }
        law = next;
    }
    let mut probs = vec![P::zero(); n as usize + 1];
    for (state, p) in law {
        let slot = &mut probs[state.left as usize];
        *slot = slot.clone() + p;
    }
    Ok(LatticeDistribution { n, offset: 0, probs })
}

/// `N_n` as a one-dimensional chain: raw = `L`, with `R = n - L`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Idla;

impl Chain for Idla {
    fn name(&self) -> String {
        "idla".into()
    }

    fn start(&self) -> ChainState {
        ChainState::new(0, 0)
    }

    /// `S_n = N_n - n / 2`.
    fn affine(&self) -> AffineMap {
        AffineMap { a: 2, b: 0, c: -1, d: 2 }
    }

    fn raw_range(&self, n: u64) -> RawRange {
        RawRange { lo: 0, hi: n as i64 }
    }

    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>> {
        self.check_reachable(state)?;
        let n = state.n as i64;
        FiniteMeasure::new([
            (0, P::frac(state.raw + 1, n + 2)),
            (1, P::frac(n - state.raw + 1, n + 2)),
        ])
    }

    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64 {
        let n = state.n as i64;
        i64::from(rng.random_range(0..n + 2) < n - state.raw + 1)
    }

    fn drift_term(&self, k: u32, n: u64) -> DriftTerm {
        let n2 = n as i64 + 2;
        match k {
            1 => DriftTerm { d: q_int(0), slope: q(1, n2) },
            2 => DriftTerm { d: q(1, 4), slope: q_int(0) },
            3 => DriftTerm { d: q_int(0), slope: q(1, 4 * n2) },
            _ => panic!("drift order {k} not in 1..=3"),
        }
    }

    fn drift_limits(&self) -> DriftLimits {
        DriftLimits {
            alpha: [q_int(1), q_int(0), q(1, 4)],
            d: [q_int(0), q(1, 4), q_int(0)],
        }
    }

    fn increment_bound(&self) -> Q {
        q(1, 2)
    }
}
