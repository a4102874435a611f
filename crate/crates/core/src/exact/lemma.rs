//! Numeric check of the asymptotics of
//!
//! ```text
//! u_{n+1} = (1 - k_n / (n + c)) u_n + C n^alpha
//! ```
//!
//! which, for `alpha + k > -1` and `k_n -> k`, behaves like
//! `C n^{alpha + 1} / (alpha + k + 1)`. The little-o forcing term is taken to
//! be zero.

use crate::error::{Error, Result};

/// The coefficient sequence `k_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KSequence {
    Constant(f64),
    /// `k_n = limit + amplitude / n`.
    Perturbed { limit: f64, amplitude: f64 },
}

impl KSequence {
    pub fn at(&self, n: u64) -> f64 {
        match *self {
            KSequence::Constant(k) => k,
            KSequence::Perturbed { limit, amplitude } => limit + amplitude / n as f64,
        }
    }

    pub fn limit(&self) -> f64 {
        match *self {
            KSequence::Constant(k) => k,
            KSequence::Perturbed { limit, .. } => limit,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, KSequence::Constant(_)) || matches!(self, KSequence::Perturbed { amplitude, .. } if *amplitude == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaProblem {
    /// Forcing coefficient `C`.
    pub forcing: f64,
    /// Forcing exponent `alpha`.
    pub exponent: f64,
    /// Index shift `c`.
    pub shift: f64,
    pub k: KSequence,
    pub u0: f64,
    pub n0: u64,
}

impl LemmaProblem {
    pub fn new(forcing: f64, exponent: f64, shift: f64, k: KSequence, u0: f64, n0: u64) -> Result<Self> {
        if exponent + k.limit() <= -1.0 {
            return Err(Error::OutOfRange(format!(
                "need alpha + k > -1 (alpha = {exponent}, k = {})",
                k.limit()
            )));
        }
        if n0 == 0 {
            return Err(Error::OutOfRange("start index must be >= 1".into()));
        }
        Ok(Self { forcing, exponent, shift, k, u0, n0 })
    }

    /// `C n^{alpha + 1} / (alpha + k + 1)`.
    pub fn prediction(&self, n: u64) -> f64 {
        self.forcing * (n as f64).powf(self.exponent + 1.0) / (self.exponent + self.k.limit() + 1.0)
    }
}

/// Which side condition of the lemma the run satisfied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hypothesis {
    /// `k_n` is constant.
    ConstantK,
    /// `C > 0` and every iterate was non-negative.
    NonNegative,
    /// Neither holds; `n` is the first index with a negative iterate (or the
    /// start index when `C <= 0` or `u0 < 0`).
    Violated { n: u64, u: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRun {
    pub n: u64,
    pub u: f64,
    pub hypothesis: Hypothesis,
}

/// Iterates from `n0` to `n_target`, calling `visit(n, u_n)` at every index.
fn run(p: &LemmaProblem, n_target: u64, mut visit: impl FnMut(u64, f64)) -> Result<LemmaRun> {
    if n_target < p.n0 {
        return Err(Error::OutOfRange(format!("target {n_target} precedes start {}", p.n0)));
    }
    let mut hypothesis = if p.k.is_constant() {
        Hypothesis::ConstantK
    } else if p.forcing > 0.0 && p.u0 >= 0.0 {
        Hypothesis::NonNegative
    } else {
        Hypothesis::Violated { n: p.n0, u: p.u0 }
    };
    let mut u = p.u0;
    visit(p.n0, u);
    for n in p.n0..n_target {
        let denom = n as f64 + p.shift;
        if denom == 0.0 {
            return Err(Error::OutOfRange(format!("n + c vanishes at n = {n}")));
        }
        u = (1.0 - p.k.at(n) / denom) * u + p.forcing * (n as f64).powf(p.exponent);
        if hypothesis == Hypothesis::NonNegative && u < 0.0 {
            hypothesis = Hypothesis::Violated { n: n + 1, u };
        }
        visit(n + 1, u);
    }
    Ok(LemmaRun { n: n_target, u, hypothesis })
}

pub fn lemma_iterate(p: &LemmaProblem, n_target: u64) -> Result<LemmaRun> {
    run(p, n_target, |_, _| {})
}

/// Largest `|u_n / prediction(n) - 1|` over `grid`. Undefined when `C = 0`.
pub fn lemma_check(p: &LemmaProblem, grid: &[u64]) -> Result<f64> {
    if p.forcing == 0.0 {
        return Err(Error::OutOfRange("C = 0: the normalised ratio is undefined".into()));
    }
    let Some(&last) = grid.iter().max() else {
        return Err(Error::OutOfRange("empty grid".into()));
    };
    let mut worst: f64 = 0.0;
    run(p, last, |n, u| {
        if grid.contains(&n) {
            worst = worst.max((u / p.prediction(n) - 1.0).abs());
        }
    })?;
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_summation() {
        let p = LemmaProblem::new(1.0, 0.0, 0.0, KSequence::Constant(0.0), 0.0, 1).unwrap();
        for n in [1, 2, 10, 1000] {
            assert_eq!(lemma_iterate(&p, n).unwrap().u, (n - 1) as f64);
        }
    }

    #[test]
    fn closed_form_constant_k() {
        // n u_n = n (n + 1) / 2 - 1
        let p = LemmaProblem::new(1.0, 0.0, 1.0, KSequence::Constant(1.0), 0.0, 1).unwrap();
        for n in [2u64, 5, 100, 10_000] {
            let exact = (n as f64 + 1.0) / 2.0 - 1.0 / n as f64;
            let run = lemma_iterate(&p, n).unwrap();
            assert!((run.u - exact).abs() < 1e-9 * exact.max(1.0), "n = {n}");
            assert_eq!(run.hypothesis, Hypothesis::ConstantK);
        }
    }

    #[test]
    fn hypothesis_violation_is_reported() {
        let p = LemmaProblem::new(-1.0, 0.0, 1.0, KSequence::Perturbed { limit: 1.0, amplitude: 1.0 }, 0.0, 1)
            .unwrap();
        assert!(matches!(lemma_iterate(&p, 10).unwrap().hypothesis, Hypothesis::Violated { .. }));
        let q = LemmaProblem::new(1.0, 0.0, 1.0, KSequence::Perturbed { limit: 1.0, amplitude: 1.0 }, -50.0, 1)
            .unwrap();
        assert!(matches!(lemma_iterate(&q, 10).unwrap().hypothesis, Hypothesis::Violated { n: 1, .. }));
        let r = LemmaProblem::new(1.0, 0.0, 5.0, KSequence::Perturbed { limit: 0.0, amplitude: -60.0 }, 0.0, 1)
            .unwrap();
        let run = lemma_iterate(&r, 40).unwrap();
        assert_eq!(run.hypothesis, Hypothesis::NonNegative);
        let s = LemmaProblem::new(1.0, 0.0, 5.0, KSequence::Perturbed { limit: 0.0, amplitude: 60.0 }, 0.0, 1)
            .unwrap();
        assert!(matches!(lemma_iterate(&s, 40).unwrap().hypothesis, Hypothesis::Violated { n: 3, .. }));
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(LemmaProblem::new(1.0, -1.5, 0.0, KSequence::Constant(0.4), 0.0, 1).is_err());
        assert!(LemmaProblem::new(1.0, 0.0, 0.0, KSequence::Constant(0.0), 0.0, 0).is_err());
    }

    #[test]
    fn vanishing_denominator() {
        let p = LemmaProblem::new(1.0, 0.0, -3.0, KSequence::Constant(1.0), 0.0, 1).unwrap();
        assert!(lemma_iterate(&p, 10).is_err());
    }

    #[test]
    fn check_needs_forcing() {
        let p = LemmaProblem::new(0.0, 0.0, 1.0, KSequence::Constant(1.0), 0.0, 1).unwrap();
        assert!(lemma_check(&p, &[10]).is_err());
    }

    #[test]
    fn zero_forcing_from_zero_stays_zero() {
        let p = LemmaProblem::new(0.0, 0.0, 1.0, KSequence::Constant(1.0), 0.0, 1).unwrap();
        assert_eq!(lemma_iterate(&p, 10_000).unwrap().u, 0.0);
    }
}
