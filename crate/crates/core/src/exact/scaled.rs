//! Exact DP over integer weights with one common denominator per step.
//!
//! Each step multiplies every weight by the lcm of the increment-law
//! denominators at that step, so no gcd is taken until a moment is read out.
//! This is much faster than rational arithmetic for a few hundred steps.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chain::{AffineMap, Chain, ChainState};
use crate::error::{Error, Result};
use crate::measure::Q;

use super::LatticeDistribution;

/// Law of the raw statistic as `weights[i] / denominator` at `offset + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledDistribution {
    pub n: u64,
    pub offset: i64,
    pub weights: Vec<BigInt>,
    pub denominator: BigInt,
}

impl ScaledDistribution {
    pub fn to_rational(&self) -> LatticeDistribution<Q> {
        LatticeDistribution {
            n: self.n,
            offset: self.offset,
            probs: self.weights.iter().map(|w| Q::new(w.clone(), self.denominator.clone())).collect(),
        }
    }

    /// `E S_n^k`, exact.
    pub fn moment(&self, map: &AffineMap, k: u32) -> Q {
        let mut acc = BigInt::zero();
        for (i, w) in self.weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let raw = self.offset + i as i64;
            let num = BigInt::from(map.a * raw + map.b + map.c * self.n as i64);
            acc += w * num.pow(k);
        }
        Q::new(acc, &self.denominator * BigInt::from(map.d).pow(k))
    }
}

/// Exact law at `n_target`; runs the same transitions as [`super::evolve_exact`].
pub fn evolve_scaled<C: Chain>(model: &C, n_target: u64, budget: u64) -> Result<ScaledDistribution> {
    evolve_scaled_each(model, n_target, budget, |_| {})
}

/// As [`evolve_scaled`], visiting every intermediate law.
pub fn evolve_scaled_each<C: Chain, F: FnMut(&ScaledDistribution)>(
    model: &C,
    n_target: u64,
    budget: u64,
    mut visit: F,
) -> Result<ScaledDistribution> {
    super::check_target(model, n_target, budget)?;
    let start = model.start();
    let mut dist = ScaledDistribution {
        n: start.n,
        offset: start.raw,
        weights: vec![BigInt::one()],
        denominator: BigInt::one(),
    };
    visit(&dist);
    while dist.n < n_target {
        let n = dist.n;
        let laws = dist
            .weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| {
                let raw = dist.offset + i as i64;
                model.increment_law::<Q>(ChainState::new(n, raw)).map(|law| (i, raw, law))
            })
            .collect::<Result<Vec<_>>>()?;
        let scale = laws
            .iter()
            .flat_map(|(_, _, law)| law.iter().map(|(_, m)| m.denom().clone()))
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let range = model.raw_range(n + 1);
        let mut next = vec![BigInt::zero(); range.len()];
        for (i, raw, law) in laws {
            let w = &dist.weights[i];
            for (inc, m) in law.iter() {
                let target = raw + inc;
                if !range.contains(target) {
                    return Err(Error::OutOfRange(format!(
                        "increment {inc} from {} leaves the declared range at step {}",
                        ChainState::new(n, raw),
                        n + 1
                    )));
                }
                let factor = m.numer() * (&scale / m.denom());
                next[(target - range.lo) as usize] += w * factor;
            }
        }
        dist = ScaledDistribution {
            n: n + 1,
            offset: range.lo,
            weights: next,
            denominator: &dist.denominator * scale,
        };
        visit(&dist);
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{evolve_exact, moment_of};
    use crate::models::{make_circle_model, make_descents_model, make_removal_urn};
    use crate::measure::FiniteMeasure;

    #[test]
    fn matches_rational_dp() {
        let removal = make_removal_urn(3, FiniteMeasure::from_triples(&[[0, 1, 3], [2, 2, 3]]).unwrap(), 1, 2).unwrap();
        for n in [2u64, 7, 19] {
            let a = evolve_scaled(&removal, n, u64::MAX).unwrap();
            let b: LatticeDistribution<Q> = evolve_exact(&removal, n).unwrap();
            assert!(a.to_rational().same_law(&b));
            assert_eq!(a.moment(&removal.affine(), 2), moment_of(&b, &removal.affine(), 2));
        }
        let circle = make_circle_model();
        let a = evolve_scaled(&circle, 12, u64::MAX).unwrap();
        let b: LatticeDistribution<Q> = evolve_exact(&circle, 12).unwrap();
        assert!(a.to_rational().same_law(&b));
    }

    #[test]
    fn descents_half_integer_scores() {
        let m = make_descents_model();
        let d = evolve_scaled(&m, 4, 100).unwrap();
        assert_eq!(d.moment(&m.affine(), 2), crate::measure::q(5, 12));
        assert_eq!(d.moment(&m.affine(), 1), Q::zero());
    }
}
