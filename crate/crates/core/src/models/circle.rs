//! Balls on a circle.
//!
//! At step `n` there are `T = 2n + 4` balls, `S` of them white, laid out as
//! `(W B)^S` followed by the `sigma = T - 2S` surplus blacks. Three adjacent
//! balls are removed uniformly among the `T` windows, then two whites and
//! three blacks are inserted, so the white count changes by
//! `2 - (whites removed)`.
//!
//! Counting windows gives, for `sigma >= 1`,
//! `{+1: (S+2)/T, 0: (S-1)/T, +2: (sigma-1)/T}`. When `sigma = 0` the layout
//! alternates perfectly, every window holds one or two whites, and the law is
//! `{0: 1/2, +1: 1/2}`; the three-atom formula would put mass `-1/T` on `+2`
//! there. The first drift form still holds exactly at those states, the
//! second and third do not.

use rand::{Rng, RngCore};

use crate::chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm, RawRange};
use crate::error::Result;
use crate::measure::{q, q_int, FiniteMeasure, Prob, Q};

#[derive(Debug, Clone, Copy, Default)]
pub struct Circle;

impl Circle {
    fn balls(n: u64) -> i64 {
        2 * n as i64 + 4
    }
}

impl Chain for Circle {
    fn name(&self) -> String {
        "circle".into()
    }

    /// Two whites and four blacks, which is the `T = 2n + 4` layout at `n = 1`.
    fn start(&self) -> ChainState {
        ChainState::new(1, 2)
    }

    fn affine(&self) -> AffineMap {
        AffineMap::IDENTITY
    }

    fn raw_range(&self, n: u64) -> RawRange {
        if n == 0 {
            return RawRange { lo: 0, hi: -1 };
        }
        RawRange { lo: 2, hi: n as i64 + 2 }
    }

    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>> {
        self.check_reachable(state)?;
        let t = Self::balls(state.n);
        let s = state.raw;
        let surplus = t - 2 * s;
        if surplus == 0 {
            return FiniteMeasure::new([(0, P::frac(1, 2)), (1, P::frac(1, 2))]);
        }
        FiniteMeasure::new([
            (0, P::frac(s - 1, t)),
            (1, P::frac(s + 2, t)),
            (2, P::frac(surplus - 1, t)),
        ])
    }

    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64 {
        let t = Self::balls(state.n);
        let s = state.raw;
        let u = rng.random_range(0..t);
        if t == 2 * s {
            return i64::from(u < s);
        }
        if u < s + 2 {
            1
        } else if u < 2 * s + 1 {
            0
        } else {
            2
        }
    }

    /// `D_k^n = (2 + 2^k (2n + 3)) / (2n + 4)`, `alpha_k^n / n = (2^{k+1} - 1) / (2n + 4)`.
    fn drift_term(&self, k: u32, n: u64) -> DriftTerm {
        assert!((1..=3).contains(&k), "drift order {k} not in 1..=3");
        let t = Self::balls(n);
        let pow = 1i64 << k;
        DriftTerm {
            d: q(2 + pow * (t - 1), t),
            slope: q(2 * pow - 1, t),
        }
    }

    fn drift_limits(&self) -> DriftLimits {
        DriftLimits {
            alpha: [q(3, 2), q(7, 2), q(15, 2)],
            d: [q_int(2), q_int(4), q_int(8)],
        }
    }

    fn increment_bound(&self) -> Q {
        q_int(2)
    }

    fn drift_form_exact(&self, k: u32) -> bool {
        k == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::conditional_moment;

    #[test]
    fn law_at_start_matches_three_atom_formula() {
        let law = Circle.increment_law::<Q>(ChainState::new(1, 2)).unwrap();
        assert_eq!(law.mass(1), q(4, 6));
        assert_eq!(law.mass(0), q(1, 6));
        assert_eq!(law.mass(2), q(1, 6));
    }

    #[test]
    fn law_at_perfect_alternation() {
        let law = Circle.increment_law::<Q>(ChainState::new(2, 4)).unwrap();
        assert_eq!(law.atoms(), &[(0, q(1, 2)), (1, q(1, 2))]);
    }

    #[test]
    fn first_moment_at_start() {
        let m: Q = conditional_moment(&Circle, ChainState::new(1, 2), 1).unwrap();
        assert_eq!(m, q_int(1));
    }

    #[test]
    fn too_many_whites_is_unreachable() {
        assert!(Circle.increment_law::<f64>(ChainState::new(2, 5)).is_err());
        assert!(Circle.increment_law::<f64>(ChainState::new(2, 1)).is_err());
    }
}
