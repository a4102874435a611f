//! Number of descents of a uniform permutation, grown by the insertion
//! algorithm: inserting `n + 1` at a uniform position adds a descent with
//! probability `(n - D_n) / (n + 1)`.

use rand::{Rng, RngCore};

use crate::chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm, RawRange};
use crate::error::Result;
use crate::measure::{q, q_int, FiniteMeasure, Prob, Q};

#[derive(Debug, Clone, Copy, Default)]
pub struct Descents;

impl Chain for Descents {
    fn name(&self) -> String {
        "descents".into()
    }

    fn start(&self) -> ChainState {
        ChainState::new(1, 0)
    }

    /// `S_n = D_n - (n - 1) / 2`.
    fn affine(&self) -> AffineMap {
        AffineMap { a: 2, b: 1, c: -1, d: 2 }
    }

    fn raw_range(&self, n: u64) -> RawRange {
        if n == 0 {
            return RawRange { lo: 0, hi: -1 };
        }
        RawRange { lo: 0, hi: n as i64 - 1 }
    }

    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>> {
        self.check_reachable(state)?;
        let n = state.n as i64;
        FiniteMeasure::new([
            (0, P::frac(state.raw + 1, n + 1)),
            (1, P::frac(n - state.raw, n + 1)),
        ])
    }

    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64 {
        let u = rng.random_range(0..=state.n as i64);
        i64::from(u < state.n as i64 - state.raw)
    }

    fn drift_term(&self, k: u32, n: u64) -> DriftTerm {
        let n1 = n as i64 + 1;
        match k {
            1 => DriftTerm { d: q_int(0), slope: q(1, n1) },
            2 => DriftTerm { d: q(1, 4), slope: q_int(0) },
            3 => DriftTerm { d: q_int(0), slope: q(1, 4 * n1) },
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::conditional_moment;

    #[test]
    fn law_at_three_one() {
        let law = Descents.increment_law::<Q>(ChainState::new(3, 1)).unwrap();
        assert_eq!(law.mass(1), q(1, 2));
        assert_eq!(law.mass(0), q(1, 2));
    }

    #[test]
    fn law_at_start() {
        let law = Descents.increment_law::<Q>(ChainState::new(1, 0)).unwrap();
        assert_eq!(law.mass(1), q(1, 2));
    }

    #[test]
    fn unreachable_state_is_named() {
        let err = Descents.increment_law::<f64>(ChainState::new(3, 3)).unwrap_err();
        assert!(err.to_string().contains("(n=3, raw=3)"), "{err}");
        assert!(Descents.increment_law::<f64>(ChainState::new(0, 0)).is_err());
    }

    #[test]
    fn conditional_moments() {
        let s = ChainState::new(3, 1);
        assert_eq!(conditional_moment::<Q, _>(&Descents, s, 1).unwrap(), q_int(0));
        for raw in 0..7 {
            let st = ChainState::new(7, raw);
            assert_eq!(conditional_moment::<Q, _>(&Descents, st, 2).unwrap(), q(1, 4));
        }
    }
}
