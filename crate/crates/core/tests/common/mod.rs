#![allow(dead_code)]

use driftclt::measure::{FiniteMeasure, Q};
use driftclt::models::UrnSpec;
use num_rational::BigRational;
use proptest::prelude::*;

/// Measure on `lo..=hi` with small integer weights, or a point mass.
fn measure_on(lo: i64, hi: i64) -> impl Strategy<Value = FiniteMeasure<Q>> {
    let width = (hi - lo + 1) as usize;
    let spread = proptest::collection::vec(0u32..4, width)
        .prop_filter("needs mass", |w| w.iter().any(|&x| x > 0))
        .prop_map(move |w| {
            let total: u32 = w.iter().sum();
            let atoms = w
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| (lo + i as i64, BigRational::new((x as i64).into(), (total as i64).into())));
            FiniteMeasure::new(atoms).expect("weights normalised")
        });
    let dirac = (lo..=hi).prop_map(FiniteMeasure::dirac);
    prop_oneof![3 => spread, 1 => dirac]
}

/// Valid urn specs with `N <= 4` and small starting compositions.
pub fn urn_spec() -> impl Strategy<Value = UrnSpec> {
    (1u32..=4)
        .prop_flat_map(|n| {
            let n_i = n as i64;
            (Just(n), measure_on(-1, n_i), measure_on(0, n_i + 1), 0u64..3, 0u64..3)
        })
        .prop_filter("urn must start non-empty", |(_, _, _, a0, b0)| a0 + b0 > 0)
        .prop_map(|(n, mu1, mu2, a0, b0)| UrnSpec::new(n, mu1, mu2, a0, b0).expect("supports respected"))
}
