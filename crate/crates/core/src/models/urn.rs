//! Balanced two-colour urns with random replacement.
//!
//! Each step draws a ball uniformly. A white draw returns it with `B1 ~ mu1`
//! extra whites and `N - B1` blacks; a black draw returns it with `B2 ~ mu2`
//! whites and `N - B2` blacks. Negative additions of `-1` remove the drawn
//! ball, which is why `mu1` may charge `-1` and `mu2` may charge `N + 1`.

use rand::{Rng, RngCore};

use crate::chain::{AffineMap, Chain, ChainState, DriftLimits, DriftTerm, RawRange};
use crate::error::{Error, Result};
use crate::measure::{q_int, FiniteMeasure, Prob, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct UrnSpec {
    /// Balls added per step (`N`).
    pub balance: u32,
    /// Law of the whites added after a white draw.
    pub mu_white: FiniteMeasure<Q>,
    /// Law of the whites added after a black draw.
    pub mu_black: FiniteMeasure<Q>,
    pub a0: u64,
    pub b0: u64,
}

impl UrnSpec {
    pub fn new(
        balance: u32,
        mu_white: FiniteMeasure<Q>,
        mu_black: FiniteMeasure<Q>,
        a0: u64,
        b0: u64,
    ) -> Result<Self> {
        let spec = Self { balance, mu_white, mu_black, a0, b0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.balance == 0 {
            return Err(Error::InvalidSpec("balance N must be positive".into()));
        }
        if self.a0 + self.b0 == 0 {
            return Err(Error::InvalidSpec("the urn must start with at least one ball".into()));
        }
        let n = self.balance as i64;
        let bad_white: Vec<i64> =
            self.mu_white.iter().map(|a| a.0).filter(|v| !(-1..=n).contains(v)).collect();
        let bad_black: Vec<i64> =
            self.mu_black.iter().map(|a| a.0).filter(|v| !(0..=n + 1).contains(v)).collect();
        if !bad_white.is_empty() || !bad_black.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "support violation: mu1 atoms {bad_white:?} outside [-1, {n}], mu2 atoms {bad_black:?} outside [0, {}]",
                n + 1
            )));
        }
        Ok(())
    }

    pub fn total(&self, n: u64) -> i64 {
        (self.a0 + self.b0) as i64 + n as i64 * self.balance as i64
    }

    /// `m_{i,k}` for `i = 1` (white draw) or `2` (black draw).
    pub fn moment(&self, colour: usize, k: u32) -> Q {
        match colour {
            1 => self.mu_white.moment(k),
            2 => self.mu_black.moment(k),
            _ => panic!("colour index {colour} not in {{1, 2}}"),
        }
    }
}

/// Integer weights over a common denominator, for exact sampling.
#[derive(Debug, Clone)]
struct Sampler {
    den: u64,
    cumulative: Vec<(i64, u64)>,
}

impl Sampler {
    fn new(mu: &FiniteMeasure<Q>) -> Self {
        let (den, weights) = mu.integer_weights();
        let mut acc = 0;
        let cumulative = weights
            .into_iter()
            .map(|(v, w)| {
                acc += w;
                (v, acc)
            })
            .collect();
        Self { den, cumulative }
    }

    fn sample<R: RngCore>(&self, rng: &mut R) -> i64 {
        if let [(v, _)] = self.cumulative.as_slice() {
            return *v;
        }
        let u = rng.random_range(0..self.den);
        self.cumulative.iter().find(|(_, c)| u < *c).map(|(v, _)| *v).expect("weights sum to den")
    }
}

#[derive(Debug, Clone)]
pub struct BalancedUrn {
    name: String,
    spec: UrnSpec,
    moments: [[Q; 3]; 2],
    white: Sampler,
    black: Sampler,
    min_increment: i64,
    max_increment: i64,
}

impl BalancedUrn {
    pub fn new(name: impl Into<String>, spec: UrnSpec) -> Result<Self> {
        spec.validate()?;
        let moments = [1, 2].map(|i| [1, 2, 3].map(|k| spec.moment(i, k)));
        Ok(Self {
            name: name.into(),
            white: Sampler::new(&spec.mu_white),
            black: Sampler::new(&spec.mu_black),
            min_increment: spec.mu_white.min_value().min(spec.mu_black.min_value()),
            max_increment: spec.mu_white.max_value().max(spec.mu_black.max_value()),
            moments,
            spec,
        })
    }

    pub fn spec(&self) -> &UrnSpec {
        &self.spec
    }

    fn m(&self, colour: usize, k: u32) -> &Q {
        &self.moments[colour - 1][k as usize - 1]
    }
}

impl Chain for BalancedUrn {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn start(&self) -> ChainState {
        ChainState::new(0, self.spec.a0 as i64)
    }

    /// `S_n = whites - a0`.
    fn affine(&self) -> AffineMap {
        AffineMap { a: 1, b: -(self.spec.a0 as i64), c: 0, d: 1 }
    }

    fn raw_range(&self, n: u64) -> RawRange {
        let a0 = self.spec.a0 as i64;
        let n_i = n as i64;
        RawRange {
            lo: (a0 + n_i * self.min_increment).max(0),
            hi: (a0 + n_i * self.max_increment).min(self.spec.total(n)),
        }
    }

    fn increment_law<P: Prob>(&self, state: ChainState) -> Result<FiniteMeasure<P>> {
        self.check_reachable(state)?;
        let total = self.spec.total(state.n);
        let whites = state.raw;
        let blacks = total - whites;
        let p_white = P::frac(whites, total);
        let p_black = P::frac(blacks, total);
        let parts = self
            .spec
            .mu_white
            .iter()
            .map(|(v, m)| (*v, p_white.clone() * P::from_q(m)))
            .chain(self.spec.mu_black.iter().map(|(v, m)| (*v, p_black.clone() * P::from_q(m))));
        FiniteMeasure::from_parts(parts)
    }

    fn sample_increment<R: RngCore>(&self, state: ChainState, rng: &mut R) -> i64 {
        let total = self.spec.total(state.n);
        if rng.random_range(0..total) < state.raw {
            self.white.sample(rng)
        } else {
            self.black.sample(rng)
        }
    }

    /// `D_k^n = m_{2,k} + a0 (m_{1,k} - m_{2,k}) / total`,
    /// `alpha_k^n / n = (m_{2,k} - m_{1,k}) / total`.
    fn drift_term(&self, k: u32, n: u64) -> DriftTerm {
        let total = q_int(self.spec.total(n));
        let gap = self.m(2, k) - self.m(1, k);
        DriftTerm {
            d: self.m(2, k) - &gap * q_int(self.spec.a0 as i64) / &total,
            slope: gap / total,
        }
    }

    fn drift_limits(&self) -> DriftLimits {
        let n = q_int(self.spec.balance as i64);
        DriftLimits {
            alpha: [1, 2, 3].map(|k| (self.m(2, k) - self.m(1, k)) / &n),
            d: [1, 2, 3].map(|k| self.m(2, k).clone()),
        }
    }

    fn increment_bound(&self) -> Q {
        q_int(self.min_increment.abs().max(self.max_increment.abs()))
    }
}

pub fn make_balanced_urn(spec: UrnSpec) -> Result<BalancedUrn> {
    BalancedUrn::new("urn", spec)
}

/// Adds `alpha` balls of the drawn colour and `beta` of the other.
pub fn make_friedman(alpha: u32, beta: u32, a0: u64, b0: u64) -> Result<BalancedUrn> {
    if alpha + beta == 0 {
        return Err(Error::InvalidSpec("Friedman urn needs alpha + beta >= 1".into()));
    }
    let spec = UrnSpec::new(
        alpha + beta,
        FiniteMeasure::dirac(alpha as i64),
        FiniteMeasure::dirac(beta as i64),
        a0,
        b0,
    )?;
    BalancedUrn::new(format!("friedman({alpha},{beta})"), spec)
}

/// Removes the drawn ball, then adds `b` balls of which `B ~ mu` are white.
pub fn make_removal_urn(b: u32, mu: FiniteMeasure<Q>, a0: u64, b0: u64) -> Result<BalancedUrn> {
    if b < 2 {
        return Err(Error::InvalidSpec(format!("removal urn needs b >= 2 (got {b})")));
    }
    if mu.min_value() < 0 || mu.max_value() > b as i64 {
        return Err(Error::InvalidSpec(format!("mu must live on [0, {b}]")));
    }
    if let Some(v) = mu.as_dirac() {
        if v == 0 || v == b as i64 {
            return Err(Error::Degenerate { d: 0.0 });
        }
    }
    let spec = UrnSpec::new(b - 1, mu.shifted(-1), mu, a0, b0)?;
    BalancedUrn::new(format!("removal(b={b})"), spec)
}
