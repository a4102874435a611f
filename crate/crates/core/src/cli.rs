//! Report builders behind the `driftclt` binary. Everything here returns
//! values; the binary only does argument parsing and I/O.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chain::Chain;
use crate::config::ModelConfig;
use crate::error::{Error, Result};
use crate::exact::{evolve_exact_with_budget, evolve_scaled, moment_of, LatticeDistribution};
use crate::measure::{q_int, q_to_f64, FiniteMeasure, Prob, Q};
use crate::models::Model;
use crate::rng::RNG_ID;
use crate::stats::{standardize, verify, ExperimentReport, Tolerances};
use crate::theory::{friedman_params, removal_params, urn_degeneracy_check, urn_variance_decomposition, Degeneracy};

/// Reads a config given either inline (`{...}`) or as a path to a JSON file.
pub fn load_config(arg: &str) -> Result<ModelConfig> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return ModelConfig::from_json(trimmed);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Config(format!("{arg}: {e}")))?;
    ModelConfig::from_json(&text)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormSummary {
    pub ell: f64,
    pub variance: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub rho: String,
    pub r1: String,
    pub r2: String,
    pub v1: String,
    pub v2: String,
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "S")]
    pub s: String,
    pub variance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoryReport {
    pub model: String,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(rename = "D1")]
    pub d1: f64,
    #[serde(rename = "D2")]
    pub d2: f64,
    /// `None` when `alpha1 = -1`.
    pub ell: Option<f64>,
    #[serde(rename = "D")]
    pub big_d: Option<f64>,
    /// `None` unless `alpha1 > -1/2`.
    pub variance: Option<f64>,
    /// `alpha1 > -1/2`.
    pub small_urn: bool,
    pub degenerate: bool,
    pub degeneracy_reason: Option<String>,
    /// Exact rational forms of the fields above.
    pub exact: BTreeMap<String, String>,
    pub closed_form: Option<ClosedFormSummary>,
    pub decomposition: Option<DecompositionSummary>,
}

impl TheoryReport {
    /// Whether a Gaussian limit with positive variance is predicted.
    pub fn nondegenerate(&self) -> bool {
        self.small_urn && !self.degenerate
    }
}

pub fn theory_report(cfg: &ModelConfig) -> Result<TheoryReport> {
    let model = cfg.build()?;
    let lim = model.drift_limits();
    let [a1, a2, _] = lim.alpha.clone();
    let [d1, d2, _] = lim.d.clone();
    let one = Q::one();
    let a1p = &a1 + &one;
    let ell = (!a1p.is_zero()).then(|| &d1 / &a1p);
    let big_d = ell.as_ref().map(|l| &d2 - l * (l + &a2));
    let small_urn = (q_int(2) * &a1 + &one).is_positive();
    let variance = match (&big_d, small_urn) {
        (Some(d), true) => Some(d / (q_int(2) * &a1 + &one)),
        _ => None,
    };

    let spec = cfg.urn_spec()?;
    let (degenerate, degeneracy_reason) = match &spec {
        Some(spec) => match urn_degeneracy_check(spec) {
            Degeneracy::NonDegenerate => (false, None),
            Degeneracy::Degenerate(reason) => (true, Some(format!("{reason:?}"))),
        },
        None => (big_d.as_ref().is_none_or(|d| !d.is_positive()), None),
    };

    let mut exact = BTreeMap::new();
    exact.insert("alpha1".into(), a1.to_string());
    exact.insert("alpha2".into(), a2.to_string());
    exact.insert("D1".into(), d1.to_string());
    exact.insert("D2".into(), d2.to_string());
    for (key, val) in [("ell", &ell), ("D", &big_d), ("variance", &variance)] {
        if let Some(v) = val {
            exact.insert(key.into(), v.to_string());
        }
    }

    let closed = match cfg {
        ModelConfig::Friedman { alpha, beta, .. } => friedman_params(*alpha, *beta).ok(),
        ModelConfig::Removal { b, mu, .. } => {
            removal_params(*b, &FiniteMeasure::from_triples(mu)?).ok()
        }
        _ => None,
    };
    let closed_form = closed.map(|c| ClosedFormSummary {
        ell: q_to_f64(&c.ell),
        variance: q_to_f64(&c.variance),
        matches: Some(&c.ell) == ell.as_ref() && Some(&c.variance) == variance.as_ref(),
    });
    let decomposition = spec
        .as_ref()
        .and_then(|s| urn_variance_decomposition(s).ok())
        .map(|d| DecompositionSummary {
            rho: d.rho.to_string(),
            r1: d.r1.to_string(),
            r2: d.r2.to_string(),
            v1: d.v1.to_string(),
            v2: d.v2.to_string(),
            r: d.r.to_string(),
            s: d.s.to_string(),
            variance: d.variance.to_string(),
        });

    Ok(TheoryReport {
        model: model.name(),
        alpha1: q_to_f64(&a1),
        alpha2: q_to_f64(&a2),
        d1: q_to_f64(&d1),
        d2: q_to_f64(&d2),
        ell: ell.as_ref().map(q_to_f64),
        big_d: big_d.as_ref().map(q_to_f64),
        variance: variance.as_ref().map(q_to_f64),
        small_urn,
        degenerate,
        degeneracy_reason,
        exact,
        closed_form,
        decomposition,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactSummary {
    pub model: String,
    pub n: u64,
    pub rational: bool,
    pub support_size: usize,
    pub total_mass: String,
    pub mean_s: f64,
    pub variance_s: f64,
}

/// Exact law of `S_n` as CSV (`raw,S,probability`, ascending in `raw`)
/// plus a summary.
pub fn exact_table(cfg: &ModelConfig, n: u64, budget: u64, rational: bool) -> Result<(String, ExactSummary)> {
    let model = cfg.build()?;
    if rational {
        let dist = evolve_scaled(&model, n, budget)?.to_rational();
        Ok(render_exact(&model, &dist, true))
    } else {
        let dist: LatticeDistribution<f64> = evolve_exact_with_budget(&model, n, budget)?;
        Ok(render_exact(&model, &dist, false))
    }
}

fn render_exact<P: Prob>(model: &Model, dist: &LatticeDistribution<P>, rational: bool) -> (String, ExactSummary) {
    let map = model.affine();
    let mut csv = String::from("raw,S,probability\n");
    let mut support = 0;
    for (raw, p) in dist.iter() {
        if p.is_zero() {
            continue;
        }
        support += 1;
        let (s, prob) = if rational {
            (map.s::<Q>(dist.n, raw).to_string(), p.to_string())
        } else {
            (format!("{:?}", map.s_f64(dist.n, raw)), format!("{:e}", p.to_f64()))
        };
        writeln!(csv, "{raw},{s},{prob}").expect("writing to a String");
    }
    let mean = moment_of(dist, &map, 1).to_f64();
    let second = moment_of(dist, &map, 2).to_f64();
    let summary = ExactSummary {
        model: model.name(),
        n: dist.n,
        rational,
        support_size: support,
        total_mass: format!("{}", dist.total_mass()),
        mean_s: mean,
        variance_s: second - mean * mean,
    };
    (csv, summary)
}

/// `reps` simulated final values as CSV with a provenance comment line.
/// The `z` column is empty when no non-degenerate limit is predicted.
pub fn simulate_table(cfg: &ModelConfig, n: u64, reps: usize, seed: u64) -> Result<String> {
    let model = cfg.build()?;
    let raw = crate::chain::replicate_final(&model, n, reps, seed)?;
    let z = standardize(&raw, &model, n).ok();
    let map = model.affine();
    let mut out = format!(
        "# driftclt {} rng={} seed={} model={} n={} reps={}\nreplicate,raw,S,z\n",
        crate::VERSION,
        RNG_ID,
        seed,
        model.name(),
        n,
        reps
    );
    for (i, &r) in raw.iter().enumerate() {
        let s = map.s_f64(n, r);
        let zi = z.as_ref().map(|z| format!("{:?}", z[i])).unwrap_or_default();
        writeln!(out, "{i},{r},{s:?},{zi}").expect("writing to a String");
    }
    Ok(out)
}

pub fn verify_report(cfg: &ModelConfig, n: u64, reps: usize, seed: u64, k_max: u32) -> Result<ExperimentReport> {
    let model = cfg.build()?;
    verify(&model, n, reps, seed, k_max, &Tolerances::default())
}

/// Exit code for a finished verification.
pub fn verify_exit_code(report: &ExperimentReport) -> i32 {
    if report.passed {
        0
    } else {
        1
    }
}
