use driftclt::chain::{increment_pmf, Chain, ChainState};
use driftclt::exact::{
    evolve_each, lemma_check, reachable_states, KSequence, LatticeDistribution, LemmaProblem, DEFAULT_BUDGET,
};
use driftclt::measure::{q, FiniteMeasure, Q};
use driftclt::models::{
    make_balanced_urn, make_circle_model, make_descents_model, make_friedman, make_idla_model, make_removal_urn,
    Model, UrnSpec,
};
use driftclt::rng::stream;
use driftclt::stats::{check_moments, verify, Tolerances};
use driftclt::theory::{friedman_params, removal_params, urn_drift_limits, urn_variance_decomposition, clt_constants};
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::Rng;

fn all_models() -> Vec<Model> {
    vec![
        make_descents_model(),
        make_circle_model(),
        make_idla_model(),
        make_friedman(0, 1, 1, 1).unwrap().into(),
        make_friedman(2, 1, 0, 3).unwrap().into(),
        make_removal_urn(3, FiniteMeasure::from_triples(&[[0, 1, 4], [2, 1, 2], [3, 1, 4]]).unwrap(), 1, 1)
            .unwrap()
            .into(),
        make_balanced_urn(
            UrnSpec::new(
                2,
                FiniteMeasure::from_triples(&[[-1, 1, 3], [2, 2, 3]]).unwrap(),
                FiniteMeasure::from_triples(&[[0, 1, 2], [3, 1, 2]]).unwrap(),
                1,
                0,
            )
            .unwrap(),
        )
        .unwrap()
        .into(),
    ]
}

fn reachable(model: &Model, n_max: u64) -> Vec<ChainState> {
    let start = model.start().n;
    reachable_states(model, n_max)
        .unwrap()
        .into_iter()
        .enumerate()
        .flat_map(|(i, raws)| raws.into_iter().map(move |r| ChainState::new(start + i as u64, r)))
        .collect()
}

#[test]
fn increment_laws_are_probabilities_and_bounded() {
    for model in all_models() {
        let map = model.affine();
        let bound = model.increment_bound();
        for state in reachable(&model, 50) {
            let law = increment_pmf(&model, state).unwrap();
            let total = law.iter().fold(Q::from_integer(0.into()), |acc, (_, m)| acc + m);
            assert!(total.is_one(), "{} at {state}", model.name());
            for (inc, m) in law.iter() {
                assert!(m.is_positive());
                let step: Q = map.step(*inc);
                assert!(step.abs() <= bound, "{} at {state}: step {step} > {bound}", model.name());
            }
        }
    }
}

#[test]
fn urn_counts_stay_valid() {
    for model in all_models() {
        let Some(urn) = model.as_urn() else { continue };
        let spec = urn.spec();
        for state in reachable(&model, 50) {
            let total = spec.total(state.n);
            assert_eq!(total, (spec.a0 + spec.b0) as i64 + state.n as i64 * spec.balance as i64);
            assert!(state.raw >= 0 && total - state.raw >= 0, "{} at {state}", model.name());
        }
    }
}

#[test]
fn circle_matches_three_atom_law_off_perfect_alternation() {
    let model = make_circle_model();
    let mut surplus_zero = 0;
    for state in reachable(&model, 50) {
        let (n, s) = (state.n as i64, state.raw);
        let t = 2 * n + 4;
        let law = increment_pmf(&model, state).unwrap();
        if t == 2 * s {
            surplus_zero += 1;
            assert_eq!(law.atoms(), &[(0, q(1, 2)), (1, q(1, 2))]);
            continue;
        }
        let three_atom = FiniteMeasure::from_parts([(1, q(s + 2, t)), (0, q(s - 1, t)), (2, q(2 * n + 3 - 2 * s, t))]).unwrap();
        assert_eq!(law, three_atom, "{state}");
    }
    assert!(surplus_zero > 0);
}

#[test]
fn dp_conserves_mass() {
    for model in all_models() {
        let mut worst: f64 = 0.0;
        evolve_each::<f64, _, _>(&model, 500, DEFAULT_BUDGET, |d: &LatticeDistribution<f64>| {
            worst = worst.max((d.total_mass() - 1.0).abs());
        })
        .unwrap();
        assert!(worst <= 1e-12, "{}: {worst}", model.name());
    }
}

#[test]
fn lemma_error_shrinks_with_the_grid() {
    let problems = [
        LemmaProblem::new(1.0, 0.5, 1.0, KSequence::Constant(1.0), 0.0, 1).unwrap(),
        LemmaProblem::new(1.0, 0.25, 1.0, KSequence::Perturbed { limit: 1.5, amplitude: 0.7 }, 0.0, 1).unwrap(),
        LemmaProblem::new(1.0, -0.5, 2.0, KSequence::Constant(-0.25), 0.0, 1).unwrap(),
        LemmaProblem::new(-1.0, 1.0, 0.0, KSequence::Constant(3.0), 5.0, 1).unwrap(),
    ];
    for p in &problems {
        let errs: Vec<f64> = [100u64, 1_000, 10_000, 100_000].iter().map(|&n| lemma_check(p, &[n]).unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{p:?}: {errs:?}");
    }
}

#[test]
fn verify_is_deterministic() {
    let model: Model = make_friedman(1, 2, 1, 1).unwrap().into();
    let tol = Tolerances::default();
    let a = verify(&model, 300, 500, 9, 4, &tol).unwrap();
    let b = verify(&model, 300, 500, 9, 4, &tol).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_json(), b.to_json());
}

fn normal<R: Rng>(rng: &mut R, sd: f64) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    sd * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[test]
fn synthetic_normal_samples_pass() {
    let variance: f64 = 7.0 / 50.0;
    let trials = 300;
    let passes = (0..trials)
        .filter(|&t| {
            let mut rng = stream(123, t);
            let z: Vec<f64> = (0..4000).map(|_| normal(&mut rng, variance.sqrt())).collect();
            check_moments(&z, variance, 4, &Tolerances::default(), 0.0).iter().all(|c| c.pass)
        })
        .count();
    assert!(passes as f64 >= 0.97 * trials as f64, "{passes}/{trials}");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn friedman_closed_form_matches_pipeline(alpha in 0u32..12, beta in 1u32..12) {
        prop_assume!(3 * beta > alpha);
        let cf = friedman_params(alpha, beta).unwrap();
        let urn = make_friedman(alpha, beta, 1, 1).unwrap();
        let dec = urn_variance_decomposition(urn.spec()).unwrap();
        prop_assert_eq!(&cf.variance, &dec.variance);
        prop_assert_eq!(&cf.variance, &cf.params.limit_variance);
        prop_assert_eq!(&cf.ell, &cf.params.ell);
    }

    #[test]
    fn removal_closed_form_matches_pipeline(b in 2u32..6, weights in proptest::collection::vec(0i64..4, 6)) {
        let atoms: Vec<[i64; 3]> = (0..=b as usize).filter(|&v| weights[v] > 0).map(|v| [v as i64, weights[v], 1]).collect();
        prop_assume!(!atoms.is_empty());
        let total: i64 = atoms.iter().map(|a| a[1]).sum();
        let triples: Vec<[i64; 3]> = atoms.iter().map(|a| [a[0], a[1], total]).collect();
        let mu = FiniteMeasure::from_triples(&triples).unwrap();
        prop_assume!(mu.as_dirac() != Some(0) && mu.as_dirac() != Some(b as i64));
        let cf = removal_params(b, &mu).unwrap();
        let urn = make_removal_urn(b, mu, 1, 1).unwrap();
        let lim = urn_drift_limits(urn.spec());
        let [a1, a2, _] = lim.alpha;
        let [d1, d2, _] = lim.d;
        let direct = clt_constants(a1, a2, d1, d2, None).unwrap();
        prop_assert_eq!(&cf.variance, &direct.limit_variance);
        prop_assert_eq!(&cf.ell, &direct.ell);
    }
}
