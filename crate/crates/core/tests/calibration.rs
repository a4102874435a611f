//! The moment bands should accept correct models most of the time and reject
//! a wrong variance.

use driftclt::chain::replicate_final;
use driftclt::models::{make_circle_model, make_descents_model, make_friedman};
use driftclt::stats::{check_moments, standardize, verify, Tolerances};
use driftclt::Model;

#[test]
fn pass_rate_over_seeds() {
    let models: Vec<Model> = vec![make_descents_model(), make_friedman(0, 1, 1, 1).unwrap().into()];
    let tol = Tolerances::default();
    for model in &models {
        let passes = (0..30u64).filter(|&seed| verify(model, 400, 2000, seed, 4, &tol).unwrap().passed).count();
        assert!(passes >= 24, "{passes}/30");
    }
}

#[test]
fn wrong_variance_is_rejected() {
    let model = make_descents_model();
    let raw = replicate_final(&model, 1000, 20_000, 1).unwrap();
    let z = standardize(&raw, &model, 1000).unwrap();
    let right = check_moments(&z, 1.0 / 12.0, 4, &Tolerances::default(), 0.0);
    assert!(right.iter().all(|c| c.pass));
    let wrong = check_moments(&z, 1.15 / 12.0, 4, &Tolerances::default(), 0.0);
    assert!(!wrong[1].pass);
}

#[test]
fn circle_needs_the_centering_allowance() {
    let model = make_circle_model();
    let report = verify(&model, 2000, 20_000, 4, 4, &Tolerances::default()).unwrap();
    assert!(report.passed);
    assert!(report.empirical.centering_offset > 0.03);
    let strict = Tolerances { centering_allowance: false, ..Tolerances::default() };
    let report = verify(&model, 2000, 20_000, 4, 4, &strict).unwrap();
    assert!(!report.empirical.moments[0].pass);
}
