//! Structural invariants of the photon, electron and gravitational fields.

use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use vortexlab::analysis::IntensityField;
use vortexlab::electron::ElectronBeam;
use vortexlab::gw::{gw_intensity, Contraction, GwBeam};
use vortexlab::photon::{em_intensity, extract_eb, PhotonBeam, RsVector};
use vortexlab::units::{EPSILON_0, MU_0};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_density_identity(x in complex(), y in complex(), z in complex()) {
        let f = RsVector { x, y, z };
        let (e, b) = extract_eb(&f);
        let e2: f64 = e.iter().map(|v| v * v).sum();
        let b2: f64 = b.iter().map(|v| v * v).sum();
        let u = EPSILON_0 * e2 / 2.0 + b2 / (2.0 * MU_0);
        prop_assert!((u - em_intensity(&f)).abs() <= 1e-12 * em_intensity(&f).max(1e-300));
    }

    #[test]
    fn gw_curvature_is_trace_free(r in 2.0f64..40.0, phi in 0.0f64..TAU, l in 1i32..=15) {
        let beam = GwBeam::new(l, 7.41, 150.0, Some(Default::default())).unwrap();
        let g = beam.field(r, phi).unwrap();
        let scale = g.components().iter().map(|c| c.norm()).fold(0.0, f64::max);
        prop_assert!(g.trace().norm() <= 1e-13 * scale);
        let i = gw_intensity(&g, Contraction::Independent);
        prop_assert!(i >= 0.0 && i <= gw_intensity(&g, Contraction::FullSymmetric));
    }

    #[test]
    fn electron_second_component_vanishes(r in 0.02f64..1.5, phi in 0.0f64..TAU, t in -1.0f64..1.0) {
        let mut beam = ElectronBeam::new(15, 142.1, 1.9, Some(Default::default())).unwrap();
        beam.t = t;
        let psi = beam.field(r, phi).unwrap();
        prop_assert_eq!(psi.psi[1], Complex64::new(0.0, 0.0));
        prop_assert!(beam.intensity(r, phi).unwrap() >= 0.0);
    }

    #[test]
    fn single_charge_photon_ring_is_flat(r in 5.0f64..40.0, phi in 0.0f64..TAU) {
        let beam = PhotonBeam::new(15, 6.2e-6, 800e-9, None).unwrap();
        let a = beam.intensity(r, phi).unwrap();
        let b = beam.intensity(r, 0.0).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b);
    }

    #[test]
    fn pair_intensity_has_fringe_period(r in 5.0f64..40.0, phi in 0.0f64..TAU) {
        let beam = PhotonBeam::new(15, 6.2e-6, 800e-9, Some(Default::default())).unwrap();
        let period = std::f64::consts::PI / 15.0;
        let a = beam.intensity(r, phi).unwrap();
        let b = beam.intensity(r, phi + period).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(b));
    }
}

#[test]
fn sine_weighting_rotates_fringes_by_half_a_period() {
    use vortexlab::potentials::Weighting;
    let cos = PhotonBeam::new(15, 6.2e-6, 800e-9, Some(Weighting::Cosine)).unwrap();
    let sin = PhotonBeam::new(15, 6.2e-6, 800e-9, Some(Weighting::Sine)).unwrap();
    let half = std::f64::consts::PI / 30.0;
    for phi in [0.0, 0.1, 0.77] {
        let a = cos.intensity(20.0, phi).unwrap();
        let b = sin.intensity(20.0, phi + half).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.max(b), "{a} vs {b}");
    }
}

#[test]
fn frames_convert_ring_to_metres() {
    let beam = PhotonBeam::new(15, 149e-6, 800e-9, None).unwrap();
    assert!((beam.length_unit() - 800e-9).abs() < 1e-20);
    assert!((beam.w0() * beam.length_unit() - 149e-6).abs() < 1e-15);
}
