//! Bounded-increment chains whose conditional increment moments are affine
//! in the current position, plus seeded simulation.
//!
//! A chain lives on a single integer "raw" statistic (descents, white balls,
//! occupied sites). The centred process `S_n` is obtained from it by an
//! [`AffineMap`], and the chain declares exact coefficient sequences so that
//!
//! ```text
//! E[a_{n+1}^k | past] = D_k^n - (alpha_k^n / n) S_n,   k = 1, 2, 3
//! ```
//!
//! where `a_{n+1} = S_{n+1} - S_n`.

use std::fmt;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::reachable_states;
use crate::measure::{q_int, FiniteMeasure, Prob, Q};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainState {
    pub n: u64,
    pub raw: i64,
}

impl ChainState {
    pub fn new(n: u64, raw: i64) -> Self {
        Self { n, raw }
    }
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, raw={})", self.n, self.raw)
    }
}

/// `S_n = (a * raw + b + c * n) / d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if d <= 0 || a == 0 {
            return Err(Error::OutOfRange(format!(
                "affine map needs d > 0 and a != 0 (got a={a}, d={d})"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn s<P: Prob>(&self, n: u64, raw: i64) -> P {
        P::frac(self.a * raw + self.b + self.c * n as i64, self.d)
    }

    pub fn s_f64(&self, n: u64, raw: i64) -> f64 {
        (self.a * raw + self.b + self.c * n as i64) as f64 / self.d as f64
    }

    /// Change of `S` produced by a raw increment during one step.
    pub fn step<P: Prob>(&self, raw_increment: i64) -> P {
        P::frac(self.a * raw_increment + self.c, self.d)
    }
}

/// Inclusive range of raw values a chain may occupy at a given step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawRange {
    pub lo: i64,
    pub hi: i64,
}

impl RawRange {
    pub fn contains(&self, raw: i64) -> bool {
        self.lo <= raw && raw <= self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

/// One term of the drift form: `E[a_{n+1}^k | past] = d - slope * S_n`,
/// where `slope = alpha_k^n / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftTerm {
    pub d: Q,
    pub slope: Q,
}

impl DriftTerm {
    /// `alpha_k^n = n * slope`.
    pub fn alpha(&self, n: u64) -> Q {
        &self.slope * q_int(n as i64)
    }
}

/// Limits `alpha_k`, `D_k` of the drift coefficients for `k = 1, 2, 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftLimits {
    pub alpha: [Q; 3],
    pub d: [Q; 3],
}

/// A chain in the linear-drift class.
///
/// Implementations are immutable and shareable across threads.
pub trait Chain: Send + Sync {
    fn name(&self) -> String;

    fn start(&self) -> ChainState;

    fn affine(&self) -> AffineMap;

    /// Declared reachable raw range at step `n`; empty before the start.
    fn raw_range(&self, n: u64) -> RawRange;

    /// Exact law of the raw increment from `state`.
    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>>;

    /// Draws one raw increment from `state`. The state must be reachable.
    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64;

    /// Exact drift coefficients at step `n` for `k = 1, 2, 3`.
    fn drift_term(&self, k: u32, n: u64) -> DriftTerm;

    fn drift_limits(&self) -> DriftLimits;

    /// Bound `M` on `|a_n|` in `S` units.
    fn increment_bound(&self) -> Q;

    /// Whether the declared `k`-th drift form holds exactly at every reachable state.
    fn drift_form_exact(&self, _k: u32) -> bool {
        true
    }

    fn is_reachable(&self, state: ChainState) -> bool {
        state.n >= self.start().n && self.raw_range(state.n).contains(state.raw)
    }

    fn check_reachable(&self, state: ChainState) -> Result<()> {
        if self.is_reachable(state) {
            Ok(())
        } else {
            Err(Error::Unreachable { model: self.name(), state })
        }
    }
}

/// Exact law of the raw increment at `state`.
pub fn increment_pmf<C: Chain>(model: &C, state: ChainState) -> Result<FiniteMeasure<Q>> {
    model.increment_law(state)
}

/// `E[a_{n+1}^k | state]` in `S` units.
pub fn conditional_moment<P: Prob, C: Chain>(model: &C, state: ChainState, k: u32) -> Result<P> {
    if !(1..=3).contains(&k) {
        return Err(Error::OutOfRange(format!("moment order {k} not in 1..=3")));
    }
    let map = model.affine();
    let law = model.increment_law::<P>(state)?;
    Ok(law
        .iter()
        .fold(P::zero(), |acc, (v, m)| acc + map.step::<P>(*v).powi(k) * m.clone()))
}

/// Outcome of [`validate_drift_form`].
#[derive(Debug, Clone)]
pub struct DriftFormReport {
    pub k: u32,
    pub max_deviation: f64,
    pub states_checked: usize,
    /// States where the deviation is nonzero, with the exact deviation.
    pub offending: Vec<(ChainState, Q)>,
}

/// Compares the exact conditional moment with the declared drift form at
/// every reachable state with `n <= n_max`. Arithmetic is exact.
pub fn validate_drift_form<C: Chain>(model: &C, n_max: u64, k: u32) -> Result<DriftFormReport> {
    let start = model.start().n;
    if n_max < start + 1 {
        return Err(Error::OutOfRange(format!("n_max = {n_max} must exceed start index {start}")));
    }
    let map = model.affine();
    let mut report = DriftFormReport { k, max_deviation: 0.0, states_checked: 0, offending: Vec::new() };
    for (n, raws) in reachable_states(model, n_max)?.into_iter().enumerate() {
        let n = start + n as u64;
        let term = model.drift_term(k, n);
        for raw in raws {
            let state = ChainState::new(n, raw);
            let lhs: Q = conditional_moment(model, state, k)?;
            let rhs = &term.d - &term.slope * map.s::<Q>(n, raw);
            let dev = lhs - rhs;
            report.states_checked += 1;
            let abs = dev.to_f64().abs();
            report.max_deviation = report.max_deviation.max(abs);
            if !num_traits::Zero::is_zero(&dev) {
                report.offending.push((state, dev));
            }
        }
    }
    Ok(report)
}

/// Raw value at step `n` of one trajectory driven by `rng`.
pub fn simulate_final<C: Chain, R: RngCore>(model: &C, n: u64, rng: &mut R) -> Result<i64> {
    let start = model.start();
    if n < start.n {
        return Err(Error::OutOfRange(format!("step {n} precedes start index {}", start.n)));
    }
    let mut raw = start.raw;
    for step in start.n..n {
        raw += model.sample_increment(ChainState::new(step, raw), rng);
    }
    Ok(raw)
}

/// `reps` independent final values; replicate `i` uses [`rng::stream`]`(master_seed, i)`.
///
/// The output depends only on the arguments, not on the rayon pool size.
pub fn replicate_final<C: Chain>(model: &C, n: u64, reps: usize, master_seed: u64) -> Result<Vec<i64>> {
    if reps == 0 {
        return Err(Error::OutOfRange("reps must be at least 1".into()));
    }
    if n < model.start().n {
        return Err(Error::OutOfRange(format!("step {n} precedes start index {}", model.start().n)));
    }
    Ok((0..reps as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(master_seed, i);
            simulate_final(model, n, &mut rng).expect("n checked above")
        })
        .collect())
}

/// [`replicate_final`] on a dedicated pool of `workers` threads.
pub fn replicate_final_with_workers<C: Chain>(
    model: &C,
    n: u64,
    reps: usize,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<i64>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::OutOfRange(format!("thread pool: {e}")))?;
    pool.install(|| replicate_final(model, n, reps, master_seed))
}
