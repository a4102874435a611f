//! Limit constants of the Gaussian fluctuations and their closed forms for
//! the urn families.
//!
//! For a chain with drift limits `alpha_k`, `D_k`:
//!
//! ```text
//! ell = D1 / (alpha1 + 1)
//! D   = D2 - ell (ell + alpha2)
//! (S_n - n ell) / sqrt(n)  ->  N(0, D / (2 alpha1 + 1))      when alpha1 > -1/2, D > 0
//! ```
//!
//! All arithmetic here is exact.

use num_traits::{One, Signed, Zero};

use crate::chain::{Chain, DriftLimits};
use crate::error::{Error, Result};
use crate::measure::{q, q_int, q_to_f64, FiniteMeasure, Prob, Q};
use crate::models::{make_friedman, make_removal_urn, UrnSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct CltParams {
    pub alpha1: Q,
    pub alpha2: Q,
    pub alpha3: Option<Q>,
    pub d1: Q,
    pub d2: Q,
    pub d3: Option<Q>,
    pub ell: Q,
    /// `D = D2 - ell (ell + alpha2)`.
    pub big_d: Q,
    pub limit_variance: Q,
}

impl CltParams {
    pub fn ell_f64(&self) -> f64 {
        q_to_f64(&self.ell)
    }

    pub fn variance_f64(&self) -> f64 {
        q_to_f64(&self.limit_variance)
    }

    pub fn is_degenerate(&self) -> bool {
        !self.big_d.is_positive()
    }
}

/// Constants without the `D > 0` requirement; fails only when `alpha1 <= -1/2`.
pub fn clt_constants(alpha1: Q, alpha2: Q, d1: Q, d2: Q, third: Option<(Q, Q)>) -> Result<CltParams> {
    let two = q_int(2);
    let denom = &two * &alpha1 + Q::one();
    if !denom.is_positive() {
        return Err(Error::SmallUrn { alpha1: q_to_f64(&alpha1) });
    }
    let ell = &d1 / (&alpha1 + Q::one());
    let big_d = &d2 - &ell * (&ell + &alpha2);
    let limit_variance = &big_d / denom;
    let (alpha3, d3) = match third {
        Some((a, d)) => (Some(a), Some(d)),
        None => (None, None),
    };
    Ok(CltParams { alpha1, alpha2, alpha3, d1, d2, d3, ell, big_d, limit_variance })
}

/// Constants of a non-degenerate limit: errors on `alpha1 <= -1/2` and on `D <= 0`.
pub fn clt_params(alpha1: Q, alpha2: Q, d1: Q, d2: Q, third: Option<(Q, Q)>) -> Result<CltParams> {
    let params = clt_constants(alpha1, alpha2, d1, d2, third)?;
    if params.is_degenerate() {
        return Err(Error::Degenerate { d: q_to_f64(&params.big_d) });
    }
    Ok(params)
}

fn from_limits(lim: DriftLimits) -> Result<CltParams> {
    let [a1, a2, a3] = lim.alpha;
    let [d1, d2, d3] = lim.d;
    clt_constants(a1, a2, d1, d2, Some((a3, d3)))
}

/// Constants read off a chain's drift limits (degenerate `D` allowed).
pub fn model_constants<C: Chain>(model: &C) -> Result<CltParams> {
    from_limits(model.drift_limits())
}

/// `m_k = sum x^k mu(x)`.
pub fn measure_moment(mu: &FiniteMeasure<Q>, k: u32) -> Q {
    mu.moment(k)
}

/// `alpha_k = (m_{2,k} - m_{1,k}) / N`, `D_k = m_{2,k}`.
pub fn urn_drift_limits(spec: &UrnSpec) -> DriftLimits {
    let n = q_int(spec.balance as i64);
    DriftLimits {
        alpha: [1, 2, 3].map(|k| (spec.moment(2, k) - spec.moment(1, k)) / &n),
        d: [1, 2, 3].map(|k| spec.moment(2, k)),
    }
}

/// Variance of the limit written through the replacement statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnVarianceDecomposition {
    /// Eigenvalue ratio `(m_{1,1} - m_{2,1}) / N`.
    pub rho: Q,
    pub r1: Q,
    pub r2: Q,
    /// `Var(B^i / N) = m_{i,2} / N^2 - r_i^2`.
    pub v1: Q,
    pub v2: Q,
    pub r: Q,
    pub s: Q,
    pub variance: Q,
}

/// `variance = N^2 (R + S) / ((2 alpha1 + 1)(alpha1 + 1)^2)` with
/// `R = r2 alpha1^2 (1 - r1)` and `S = (alpha1 + 1)(v2 (1 - r1) + v1 r2)`.
pub fn urn_variance_decomposition(spec: &UrnSpec) -> Result<UrnVarianceDecomposition> {
    let n = q_int(spec.balance as i64);
    let n2 = &n * &n;
    let r1 = spec.moment(1, 1) / &n;
    let r2 = spec.moment(2, 1) / &n;
    let v1 = spec.moment(1, 2) / &n2 - &r1 * &r1;
    let v2 = spec.moment(2, 2) / &n2 - &r2 * &r2;
    let rho = &r1 - &r2;
    let alpha1 = -rho.clone();
    let one = Q::one();
    let denom = q_int(2) * &alpha1 + &one;
    if !denom.is_positive() {
        return Err(Error::SmallUrn { alpha1: q_to_f64(&alpha1) });
    }
    let a1p = &alpha1 + &one;
    let r = &r2 * &alpha1 * &alpha1 * (&one - &r1);
    let s = &a1p * (&v2 * (&one - &r1) + &v1 * &r2);
    let variance = &n2 * (&r + &s) / (denom * &a1p * &a1p);
    Ok(UrnVarianceDecomposition { rho, r1, r2, v1, v2, r, s, variance })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegeneracyReason {
    /// `mu1 = delta_N`: a white draw always adds `N` whites.
    WhiteAddsAll,
    /// `mu2 = delta_0`: a black draw never adds a white.
    BlackAddsNone,
    /// `mu1 = mu2 = delta_k`.
    CommonDirac(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    NonDegenerate,
    Degenerate(DegeneracyReason),
}

impl Degeneracy {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Degeneracy::Degenerate(_))
    }
}

/// Structural classification of `D = 0`.
///
/// `D = N^2 (R + S) / (alpha1 + 1)^2` vanishes exactly when `R = S = 0`,
/// which happens iff `mu1 = delta_N`, or `mu2 = delta_0`, or both measures are
/// the same point mass.
pub fn urn_degeneracy_check(spec: &UrnSpec) -> Degeneracy {
    let n = spec.balance as i64;
    let white = spec.mu_white.as_dirac();
    let black = spec.mu_black.as_dirac();
    if white == Some(n) {
        Degeneracy::Degenerate(DegeneracyReason::WhiteAddsAll)
    } else if black == Some(0) {
        Degeneracy::Degenerate(DegeneracyReason::BlackAddsNone)
    } else if let (Some(a), Some(b)) = (white, black) {
        if a == b {
            Degeneracy::Degenerate(DegeneracyReason::CommonDirac(a))
        } else {
            Degeneracy::NonDegenerate
        }
    } else {
        Degeneracy::NonDegenerate
    }
}

/// General-pipeline constants together with a family's closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub params: CltParams,
    pub ell: Q,
    pub variance: Q,
}

/// Friedman urn: `ell = (alpha + beta) / 2`,
/// variance `(alpha - beta)^2 (alpha + beta) / (4 (3 beta - alpha))`. Needs `3 beta > alpha`.
pub fn friedman_params(alpha: u32, beta: u32) -> Result<ClosedForm> {
    let (a, b) = (alpha as i64, beta as i64);
    if 3 * b <= a {
        return Err(Error::SmallUrn { alpha1: (b - a) as f64 / (a + b).max(1) as f64 });
    }
    let urn = make_friedman(alpha, beta, 1, 1)?;
    let params = from_limits(urn_drift_limits(urn.spec()))?;
    Ok(ClosedForm {
        params,
        ell: q(a + b, 2),
        variance: q((a - b) * (a - b) * (a + b), 4 * (3 * b - a)),
    })
}

/// Removal urn: `ell = m (b - 1) / b`,
/// variance `(b - 1)/(b + 1) (sigma^2 + (m / b)(1 - m / b))`.
pub fn removal_params(b: u32, mu: &FiniteMeasure<Q>) -> Result<ClosedForm> {
    let urn = make_removal_urn(b, mu.clone(), 1, 1)?;
    let params = from_limits(urn_drift_limits(urn.spec()))?;
    let m = mu.moment(1);
    let sigma2 = mu.moment(2) - &m * &m;
    let bq = q_int(b as i64);
    let one = Q::one();
    let ratio = &m / &bq;
    Ok(ClosedForm {
        params,
        ell: &m * (&bq - &one) / &bq,
        variance: (&bq - &one) / (&bq + &one) * (sigma2 + &ratio * (&one - &ratio)),
    })
}

/// Moments `C_0..=C_kmax` of `N(0, d)`: `C_0 = 1`, `C_1 = 0`, `C_k = d (k - 1) C_{k-2}`.
pub fn gaussian_moments<P: Prob>(d: P, k_max: usize) -> Vec<P> {
    let mut c: Vec<P> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let v = match k {
            0 => P::one(),
            1 => P::zero(),
            _ => d.clone() * P::frac(k as i64 - 1, 1) * c[k - 2].clone(),
        };
        c.push(v);
    }
    c
}

/// `true` when `x` is zero within `tol`, used to compare floating `D` with the classifier.
pub fn is_zero_within(x: &Q, tol: f64) -> bool {
    x.is_zero() || q_to_f64(x).abs() <= tol
}
