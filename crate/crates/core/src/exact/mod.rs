//! Exact oracles: forward dynamic programming over the raw state, the first
//! and second moment recursions, and the numeric lemma verifier.

mod gamma;
mod lemma;
mod scaled;

pub use gamma::gamma_ratio;
pub use lemma::{lemma_check, lemma_iterate, Hypothesis, KSequence, LemmaProblem, LemmaRun};
pub use scaled::{evolve_scaled, evolve_scaled_each, ScaledDistribution};

use crate::chain::{AffineMap, Chain, ChainState};
use crate::error::{Error, Result};
use crate::measure::Prob;

/// Default cap on the number of DP cells (states summed over steps).
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Exact law of the raw statistic at step `n`; `probs[i]` is the mass of `offset + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDistribution<P = f64> {
    pub n: u64,
    pub offset: i64,
    pub probs: Vec<P>,
}

impl<P: Prob> LatticeDistribution<P> {
    pub fn point_mass(n: u64, raw: i64) -> Self {
        Self { n, offset: raw, probs: vec![P::one()] }
    }

    pub fn pmf(&self, raw: i64) -> P {
        let idx = raw - self.offset;
        if idx < 0 || idx as usize >= self.probs.len() {
            return P::zero();
        }
        self.probs[idx as usize].clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &P)> {
        self.probs.iter().enumerate().map(move |(i, p)| (self.offset + i as i64, p))
    }

    /// Raw values carrying positive mass.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.iter().filter(|(_, p)| !p.is_zero()).map(|(raw, _)| raw)
    }

    pub fn total_mass(&self) -> P {
        self.probs.iter().fold(P::zero(), |acc, p| acc + p.clone())
    }

    pub fn to_f64(&self) -> LatticeDistribution<f64> {
        LatticeDistribution {
            n: self.n,
            offset: self.offset,
            probs: self.probs.iter().map(Prob::to_f64).collect(),
        }
    }

    /// Same law, re-indexed by `raw + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self { offset: self.offset + shift, ..self.clone() }
    }

    /// Largest absolute difference of masses over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.probs.len() as i64).max(other.offset + other.probs.len() as i64);
        (lo..hi)
            .map(|raw| (self.pmf(raw) - other.pmf(raw)).to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Equality of masses on the union of supports (zero padding ignored).
    pub fn same_law(&self, other: &Self) -> bool {
        let lo = self.offset.min(other.offset);
        let hi = (self.offset + self.probs.len() as i64).max(other.offset + other.probs.len() as i64);
        (lo..hi).all(|raw| self.pmf(raw) == other.pmf(raw))
    }
}

fn check_target<C: Chain>(model: &C, n_target: u64, budget: u64) -> Result<()> {
    let start = model.start().n;
    if n_target < start {
        return Err(Error::OutOfRange(format!("step {n_target} precedes start index {start}")));
    }
    let cells: u64 = (start..=n_target).map(|n| model.raw_range(n).len() as u64).sum();
    if cells > budget {
        return Err(Error::Budget { cells, budget });
    }
    Ok(())
}

/// One forward step of the DP.
fn step<P: Prob, C: Chain>(model: &C, dist: &LatticeDistribution<P>) -> Result<LatticeDistribution<P>> {
    let n = dist.n;
    let range = model.raw_range(n + 1);
    let mut next = vec![P::zero(); range.len()];
    for (raw, p) in dist.iter() {
        if p.is_zero() {
            continue;
        }
        let law = model.increment_law::<P>(ChainState::new(n, raw))?;
        for (inc, m) in law.iter() {
            let target = raw + inc;
            if !range.contains(target) {
                return Err(Error::OutOfRange(format!(
                    "increment {inc} from {} leaves the declared range at step {}",
                    ChainState::new(n, raw),
                    n + 1
                )));
            }
            let slot = &mut next[(target - range.lo) as usize];
            *slot = slot.clone() + p.clone() * m.clone();
        }
    }
    Ok(LatticeDistribution { n: n + 1, offset: range.lo, probs: next })
}

/// Exact law at `n_target` with the default budget.
pub fn evolve_exact<P: Prob, C: Chain>(model: &C, n_target: u64) -> Result<LatticeDistribution<P>> {
    evolve_exact_with_budget(model, n_target, DEFAULT_BUDGET)
}

pub fn evolve_exact_with_budget<P: Prob, C: Chain>(
    model: &C,
    n_target: u64,
    budget: u64,
) -> Result<LatticeDistribution<P>> {
    evolve_each(model, n_target, budget, |_| {})
}

/// Runs the DP to `n_target`, handing every intermediate law (start included) to `visit`.
pub fn evolve_each<P: Prob, C: Chain, F: FnMut(&LatticeDistribution<P>)>(
    model: &C,
    n_target: u64,
    budget: u64,
    mut visit: F,
) -> Result<LatticeDistribution<P>> {
    check_target(model, n_target, budget)?;
    let start = model.start();
    let mut dist = LatticeDistribution::point_mass(start.n, start.raw);
    visit(&dist);
    while dist.n < n_target {
        dist = step(model, &dist)?;
        visit(&dist);
    }
    Ok(dist)
}

/// Raw values with positive probability at each step `start..=n_max`.
pub fn reachable_states<C: Chain>(model: &C, n_max: u64) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    evolve_each::<f64, _, _>(model, n_max, DEFAULT_BUDGET, |d| out.push(d.support().collect()))?;
    Ok(out)
}

/// `E S_n^k` under `dist`, with `S_n` obtained through `map`.
pub fn moment_of<P: Prob>(dist: &LatticeDistribution<P>, map: &AffineMap, k: u32) -> P {
    dist.iter().fold(P::zero(), |acc, (raw, p)| {
        acc + map.s::<P>(dist.n, raw).powi(k) * p.clone()
    })
}

/// `(E S_n, E S_n^2)` for each step of a run.
#[derive(Debug, Clone)]
pub struct MomentTrace<P = f64> {
    pub start: u64,
    pub rows: Vec<(P, P)>,
    /// Set when the second drift form is not exact for the model, so the
    /// second-moment column is only an approximation.
    pub approximate: bool,
}

impl<P: Prob> MomentTrace<P> {
    pub fn at(&self, n: u64) -> Option<&(P, P)> {
        n.checked_sub(self.start).and_then(|i| self.rows.get(i as usize))
    }

    pub fn variance(&self, n: u64) -> Option<P> {
        self.at(n).map(|(m, s)| s.clone() - m.clone() * m.clone())
    }
}

/// First and second moments of `S_n` from the drift coefficients alone:
///
/// ```text
/// E S_{n+1}   = E S_n + D1 - slope1 E S_n
/// E S_{n+1}^2 = E S_n^2 + 2 (D1 E S_n - slope1 E S_n^2) + D2 - slope2 E S_n
/// ```
pub fn exact_moments12<P: Prob, C: Chain>(model: &C, n_target: u64) -> Result<MomentTrace<P>> {
    let start = model.start();
    if n_target < start.n {
        return Err(Error::OutOfRange(format!("step {n_target} precedes start index {}", start.n)));
    }
    let s0: P = model.affine().s(start.n, start.raw);
    let mut mean = s0.clone();
    let mut second = s0.clone() * s0;
    let mut rows = Vec::with_capacity((n_target - start.n + 1) as usize);
    rows.push((mean.clone(), second.clone()));
    let two = P::frac(2, 1);
    for n in start.n..n_target {
        let t1 = model.drift_term(1, n);
        let t2 = model.drift_term(2, n);
        let (d1, s1) = (P::from_q(&t1.d), P::from_q(&t1.slope));
        let (d2, s2) = (P::from_q(&t2.d), P::from_q(&t2.slope));
        let next_second = second.clone()
            + two.clone() * (d1.clone() * mean.clone() - s1.clone() * second.clone())
            + d2
            - s2 * mean.clone();
        mean = mean.clone() + d1 - s1 * mean;
        second = next_second;
        rows.push((mean.clone(), second.clone()));
    }
    Ok(MomentTrace { start: start.n, rows, approximate: !model.drift_form_exact(2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{q, Q};
    use crate::models::{make_descents_model, make_friedman};

    #[test]
    fn descents_three() {
        let d: LatticeDistribution<Q> = evolve_exact(&make_descents_model(), 3).unwrap();
        assert_eq!(d.probs, vec![q(1, 6), q(4, 6), q(1, 6)]);
        assert_eq!(d.offset, 0);
    }

    #[test]
    fn start_is_point_mass() {
        let m = make_descents_model();
        let d: LatticeDistribution<Q> = evolve_exact(&m, 1).unwrap();
        assert_eq!(d.probs, vec![q(1, 1)]);
        let urn = make_friedman(0, 1, 1, 1).unwrap();
        let d: LatticeDistribution<Q> = evolve_exact(&urn, 1).unwrap();
        assert_eq!(d.pmf(1), q(1, 2));
        assert_eq!(d.pmf(2), q(1, 2));
    }

    #[test]
    fn budget_is_enforced() {
        let err = evolve_exact_with_budget::<f64, _>(&make_descents_model(), 100, 1000).unwrap_err();
        assert!(matches!(err, Error::Budget { cells: 5050, budget: 1000 }));
        assert!(evolve_exact::<f64, _>(&make_descents_model(), 0).is_err());
    }

    #[test]
    fn moment_of_descents() {
        let m = make_descents_model();
        let map = m.affine();
        let d3: LatticeDistribution<Q> = evolve_exact(&m, 3).unwrap();
        assert_eq!(moment_of(&d3, &map, 1), q(0, 1));
        let d4: LatticeDistribution<Q> = evolve_exact(&m, 4).unwrap();
        assert_eq!(moment_of(&d4, &map, 2), q(5, 12));
        let point = LatticeDistribution::<Q>::point_mass(1, 0);
        assert_eq!(moment_of(&point, &map, 3), q(0, 1));
    }

    #[test]
    fn descents_mean_recursion_is_zero() {
        let trace: MomentTrace<Q> = exact_moments12(&make_descents_model(), 40).unwrap();
        assert!(trace.rows.iter().all(|(m, _)| *m == q(0, 1)));
        assert!(!trace.approximate);
        for n in 2..=40u64 {
            assert_eq!(trace.variance(n).unwrap(), q(n as i64 + 1, 12));
        }
    }
}
