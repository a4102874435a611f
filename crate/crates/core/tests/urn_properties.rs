mod common;

use driftclt::chain::{validate_drift_form, Chain};
use driftclt::exact::{evolve_exact, exact_moments12, LatticeDistribution, MomentTrace};
use driftclt::measure::{q_to_f64, Q};
use driftclt::models::make_balanced_urn;
use driftclt::theory::{clt_constants, urn_degeneracy_check, urn_drift_limits, urn_variance_decomposition};
use num_traits::{One, Signed};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn decomposition_matches_direct_variance(spec in common::urn_spec()) {
        let lim = urn_drift_limits(&spec);
        let [a1, a2, _] = lim.alpha.clone();
        let [d1, d2, _] = lim.d.clone();
        match clt_constants(a1, a2, d1, d2, None) {
            Err(_) => prop_assert!(urn_variance_decomposition(&spec).is_err()),
            Ok(direct) => {
                let dec = urn_variance_decomposition(&spec).unwrap();
                prop_assert_eq!(&dec.variance, &direct.limit_variance);
                prop_assert!(!Signed::is_negative(&dec.r));
                prop_assert!(!Signed::is_negative(&dec.s));
                let d_zero = q_to_f64(&direct.big_d).abs() <= 1e-12;
                prop_assert_eq!(urn_degeneracy_check(&spec).is_degenerate(), d_zero);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn urn_dp_is_a_law_and_obeys_the_drift_form(spec in common::urn_spec()) {
        let urn = make_balanced_urn(spec).unwrap();
        let dist: LatticeDistribution<Q> = evolve_exact(&urn, 8).unwrap();
        prop_assert!(dist.total_mass().is_one());
        prop_assert!(dist.probs.iter().all(|p| !Signed::is_negative(p)));
        for k in 1..=3 {
            prop_assert_eq!(validate_drift_form(&urn, 8, k).unwrap().max_deviation, 0.0);
        }
        let rec: MomentTrace<Q> = exact_moments12(&urn, 8).unwrap();
        let map = urn.affine();
        prop_assert_eq!(&rec.at(8).unwrap().0, &driftclt::exact::moment_of(&dist, &map, 1));
        prop_assert_eq!(&rec.at(8).unwrap().1, &driftclt::exact::moment_of(&dist, &map, 2));
    }
}
