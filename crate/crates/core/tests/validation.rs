//! The identity suite and its controls.

use vortexlab::potentials::{ParaxialLg, PhotonPotential, Superposition, Weighting};
use vortexlab::validation::{
    dalembert_residual, frozen_photon_potential, maxwell_residual, run_suite, propagation_invariance,
    PointSet, SuiteConfig, Thresholds,
};

#[test]
fn default_suite_passes_and_controls_fail() {
    let rep = run_suite(&SuiteConfig {
        negative_controls: true,
        ..SuiteConfig::default()
    })
    .unwrap();
    assert!(rep.all_passed, "{:#?}", rep.checks);
    assert!(rep.controls_failed, "{:#?}", rep.controls);
    assert_eq!(rep.controls.len(), 4);
}

#[test]
fn too_strict_threshold_fails() {
    let mut thresholds = Thresholds::default();
    thresholds.set("dalembert", 1e-16).unwrap();
    let rep = run_suite(&SuiteConfig {
        thresholds,
        points: 20,
        trace_points: 20,
        ..SuiteConfig::default()
    })
    .unwrap();
    assert!(!rep.all_passed);
}

#[test]
fn frozen_beam_parameter_breaks_wave_equation() {
    let pts = PointSet::random(30, 7, (5.0, 30.0), (-5.0, 5.0), (-5.0, 5.0));
    let good = Superposition::pair(&PhotonPotential::new(15, 7.75).unwrap(), Weighting::Cosine);
    assert!(dalembert_residual(&good, &pts, 1e-6).unwrap().passed);
    let bad = dalembert_residual(&frozen_photon_potential(15, 7.75), &pts, 1e-6).unwrap();
    assert!(bad.max_residual > 0.1);
}

#[test]
fn maxwell_residuals_for_a_single_charge() {
    let chi = PhotonPotential::new(1, 3.0).unwrap();
    let pts = PointSet::random(20, 11, (0.5, 6.0), (-2.0, 2.0), (-2.0, 2.0));
    let (div, evo) = maxwell_residual(&chi, &pts, 3e-4, &Thresholds::default()).unwrap();
    assert!(div.passed && evo.passed, "{div:?} {evo:?}");
}

#[test]
fn lg_pair_shape_drifts_without_rescaling() {
    let lg = ParaxialLg::new(0, 3, 1.0, 0.1).unwrap();
    let zr = lg.rayleigh_range();
    assert!(propagation_invariance(&lg, &[0.0, zr], true, 1e-8).passed);
    assert!(propagation_invariance(&lg, &[0.0, zr], false, 1e-8).max_residual > 0.1);
}

#[test]
fn thresholds_deserialize_strictly() {
    let t: Thresholds = serde_json::from_str(r#"{"dalembert": 1e-7}"#).unwrap();
    assert_eq!(t.dalembert, 1e-7);
    assert_eq!(t.trace, Thresholds::default().trace);
    assert!(serde_json::from_str::<Thresholds>(r#"{"bogus": 1}"#).is_err());
}
