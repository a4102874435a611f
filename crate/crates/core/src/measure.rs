//! Probability scalars and finitely supported measures on the integers.
//!
//! Everything that the chains need is generic over [`Prob`], which is
//! implemented for `f64` (fast, used for large-n runs and simulation) and for
//! [`Q`], an arbitrary-precision rational used by the exact oracles.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Build an exact rational from an integer fraction.
pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_to_f64(v: &Q) -> f64 {
    ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
}

/// Scalar used for probability masses and moments.
pub trait Prob:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` when arithmetic is exact.
    const EXACT: bool;

    fn frac(num: i64, den: i64) -> Self;

    fn from_q(v: &Q) -> Self;

    fn to_f64(&self) -> f64;

    /// Whether a total mass is one: exactly in rational mode, within 1e-12 otherwise.
    fn is_unit(&self) -> bool;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Prob for f64 {
    const EXACT: bool = false;

    fn frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_q(v: &Q) -> Self {
        q_to_f64(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-12
    }

    fn powi(&self, k: u32) -> Self {
        f64::powi(*self, k as i32)
    }
}

impl Prob for Q {
    const EXACT: bool = true;

    fn frac(num: i64, den: i64) -> Self {
        q(num, den)
    }

    fn from_q(v: &Q) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }

    fn is_unit(&self) -> bool {
        self.is_one()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// A probability measure with finite support on the integers.
///
/// Atoms are kept sorted by value, with distinct values and strictly positive
/// masses summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMeasure<P = f64> {
    atoms: Vec<(i64, P)>,
}

impl<P: Prob> FiniteMeasure<P> {
    /// Validates and normalises the atom list: zero-mass atoms are dropped,
    /// but duplicated values and negative masses are rejected.
    pub fn new(atoms: impl IntoIterator<Item = (i64, P)>) -> Result<Self> {
        let mut atoms: Vec<(i64, P)> = atoms.into_iter().collect();
        atoms.sort_by_key(|(v, _)| *v);
        for w in atoms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidMeasure(format!("duplicate atom at {}", w[0].0)));
            }
        }
        if let Some((v, m)) = atoms.iter().find(|(_, m)| m.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative mass {m:?} at {v}")));
        }
        atoms.retain(|(_, m)| !m.is_zero());
        let total = atoms.iter().fold(P::zero(), |acc, (_, m)| acc + m.clone());
        if !total.is_unit() {
            return Err(Error::InvalidMeasure(format!("masses sum to {total:?}, not 1")));
        }
        Ok(Self { atoms })
    }

    /// Like [`FiniteMeasure::new`] but merges atoms sharing a value first.
    pub fn from_parts(parts: impl IntoIterator<Item = (i64, P)>) -> Result<Self> {
        let mut merged: Vec<(i64, P)> = Vec::new();
        for (v, m) in parts {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some((_, acc)) => *acc = acc.clone() + m,
                None => merged.push((v, m)),
            }
        }
        Self::new(merged)
    }

    pub fn dirac(value: i64) -> Self {
        Self { atoms: vec![(value, P::one())] }
    }

    /// Uniform measure on distinct values.
    pub fn uniform(values: &[i64]) -> Result<Self> {
        let len = values.len() as i64;
        if len == 0 {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        Self::new(values.iter().map(|&v| (v, P::frac(1, len))))
    }

    pub fn atoms(&self) -> &[(i64, P)] {
        &self.atoms
    }

    pub fn iter(&self) -> impl Iterator<Item = &(i64, P)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn min_value(&self) -> i64 {
        self.atoms.first().map(|a| a.0).unwrap_or(0)
    }

    pub fn max_value(&self) -> i64 {
        self.atoms.last().map(|a| a.0).unwrap_or(0)
    }

    pub fn mass(&self, value: i64) -> P {
        self.atoms
            .iter()
            .find(|(v, _)| *v == value)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(P::zero)
    }

    /// `Some(v)` when the measure is the point mass at `v`.
    pub fn as_dirac(&self) -> Option<i64> {
        match self.atoms.as_slice() {
            [(v, _)] => Some(*v),
            _ => None,
        }
    }

    /// Raw moment `sum v^k * mass`.
    pub fn moment(&self, k: u32) -> P {
        self.atoms.iter().fold(P::zero(), |acc, (v, m)| {
            acc + P::frac(*v, 1).powi(k) * m.clone()
        })
    }

    /// Pushes the measure through `v -> v + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|(v, m)| (v + shift, m.clone())).collect(),
        }
    }

    pub fn to_f64(&self) -> FiniteMeasure<f64> {
        FiniteMeasure {
            atoms: self.atoms.iter().map(|(v, m)| (*v, m.to_f64())).collect(),
        }
    }
}

impl FiniteMeasure<Q> {
    /// Builds a measure from `[value, numerator, denominator]` triples.
    pub fn from_triples(triples: &[[i64; 3]]) -> Result<Self> {
        let mut atoms = Vec::with_capacity(triples.len());
        for &[v, num, den] in triples {
            if den <= 0 {
                return Err(Error::InvalidMeasure(format!("non-positive denominator {den} at {v}")));
            }
            atoms.push((v, q(num, den)));
        }
        Self::new(atoms)
    }

    /// Convolution with another integer measure.
    pub fn convolve(&self, other: &Self) -> Self {
        let parts = self.atoms.iter().flat_map(|(v, m)| {
            other.atoms.iter().map(move |(w, p)| (v + w, m * p))
        });
        Self::from_parts(parts).expect("convolution of probability measures")
    }

    /// Least common multiple of the mass denominators, with the masses
    /// rescaled to integer weights over it.
    pub fn integer_weights(&self) -> (u64, Vec<(i64, u64)>) {
        use num_integer::Integer;
        let lcm = self
            .atoms
            .iter()
            .fold(BigInt::one(), |acc, (_, m)| acc.lcm(m.denom()));
        let weights = self
            .atoms
            .iter()
            .map(|(v, m)| {
                let w = (m * Q::from_integer(lcm.clone())).to_integer();
                (*v, w.to_u64().expect("weight fits in u64"))
            })
            .collect();
        (lcm.to_u64().expect("denominator fits in u64"), weights)
    }
}

impl<P: Prob> fmt::Display for FiniteMeasure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, m)) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}: {m:?}")?;
        }
        write!(f, "}}")
    }
}
