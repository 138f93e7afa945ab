//! Scalar generating potentials and their ±ℓ superpositions.
//!
//! Every potential works in its own dimensionless frame (see [`crate::units`])
//! and is written once against seeded [`Coords`], so values and derivative
//! jets come from the same expression.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Coords, Potential, Series, SpacetimePoint};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A potential family indexed by the topological charge ℓ.
pub trait ChargedFamily: Potential + Clone {
    fn charge(&self) -> i32;
    fn with_charge(&self, l: i32) -> Self;
    /// Names the first non-charge parameter that differs from `other`.
    fn mismatch(&self, other: &Self) -> Option<String>;
}

fn differ(name: &str, a: f64, b: f64) -> Option<String> {
    (a != b).then(|| format!("{name}: {a} vs {b}"))
}

/// Circular polarization handedness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Polarization {
    #[default]
    Right,
    Left,
}

impl Polarization {
    pub fn sign(self) -> f64 {
        match self {
            Polarization::Right => 1.0,
            Polarization::Left => -1.0,
        }
    }
}

/// Paraxial Laguerre-Gauss mode. `w0` and `wavelength` share one length unit
/// and coordinates are expected in that unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParaxialLg {
    pub p: u32,
    pub l: i32,
    pub w0: f64,
    pub wavelength: f64,
}

impl ParaxialLg {
    pub fn new(p: u32, l: i32, w0: f64, wavelength: f64) -> Result<Self> {
        if !(w0 > 0.0 && wavelength > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "waist and wavelength must be positive (w0 = {w0}, λ = {wavelength})"
            )));
        }
        Ok(ParaxialLg { p, l, w0, wavelength })
    }

    pub fn rayleigh_range(&self) -> f64 {
        PI * self.w0 * self.w0 / self.wavelength
    }

    pub fn waist_at(&self, z: f64) -> f64 {
        self.w0 * (1.0 + (z / self.rayleigh_range()).powi(2)).sqrt()
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    fn prefactor(&self) -> f64 {
        let m = self.l.unsigned_abs();
        let ln_fact = |n: u32| (1..=n).map(|k| (k as f64).ln()).sum::<f64>();
        (2.0 / PI * (ln_fact(self.p) - ln_fact(self.p + m)).exp()).sqrt()
    }

    /// Amplitude at a point; `t` is ignored.
    pub fn amplitude(&self, point: &SpacetimePoint) -> Complex64 {
        self.value(point)
    }
}

/// Generalized Laguerre polynomial `L_p^α(x)` by the three-term recurrence.
fn laguerre(p: u32, alpha: f64, x: &Series) -> Series {
    let order = x.order();
    let mut prev = Series::real(1.0, order);
    if p == 0 {
        return prev;
    }
    let mut cur = -*x + (1.0 + alpha);
    for k in 1..p {
        let k = k as f64;
        let next = ((-*x + (2.0 * k + 1.0 + alpha)) * cur - prev * (k + alpha)) * (1.0 / (k + 1.0));
        prev = cur;
        cur = next;
    }
    cur
}

impl Potential for ParaxialLg {
    fn series(&self, at: &Coords) -> Series {
        let m = self.l.unsigned_abs() as i32;
        let zr = self.rayleigh_range();
        let zeta = at.z * (1.0 / zr);
        let spread = zeta * zeta + 1.0;
        let w2 = spread * (self.w0 * self.w0);
        let inv_w2 = w2.recip();
        let r2 = at.r * at.r;
        let x = r2 * inv_w2 * 2.0;
        let inv_w = w2.sqrt().recip();
        let envelope = (at.r * inv_w * std::f64::consts::SQRT_2).powi(m)
            * laguerre(self.p, m as f64, &x)
            * (-(r2 * inv_w2)).exp()
            * inv_w;
        // k r² / 2R(z) = k r² z / 2(z² + z_R²)
        let curvature = r2 * at.z * (at.z * at.z + zr * zr).recip() * (self.wavenumber() / 2.0);
        // e^{i(2p+|ℓ|+1)·arctan(z/z_R)} = ((1 + iz/z_R)/√(1 + (z/z_R)²))^(2p+|ℓ|+1)
        let gouy = ((zeta * I + 1.0) * spread.sqrt().recip()).powi(2 * self.p as i32 + m + 1);
        let phase = (curvature * (-I) + at.phi * (-I * self.l as f64)).exp();
        envelope * phase * gouy * self.prefactor()
    }
}

impl ChargedFamily for ParaxialLg {
    fn charge(&self) -> i32 {
        self.l
    }
    fn with_charge(&self, l: i32) -> Self {
        ParaxialLg { l, ..*self }
    }
    fn mismatch(&self, other: &Self) -> Option<String> {
        differ("p", self.p as f64, other.p as f64)
            .or_else(|| differ("w0", self.w0, other.w0))
            .or_else(|| differ("wavelength", self.wavelength, other.wavelength))
    }
}

/// Exact photon potential of a focused vortex beam, in units where lengths
/// are `c/Ω`, times `1/Ω` and `c = 1`:
///
/// `χ = N·e^{−iσ(t − z − ℓφ)}·(r/w0)^{|ℓ|}·(a/w0²)^{−(|ℓ|+1)}·e^{−r²/a}`,
/// `a = w0² + iσ(t + z)`.
///
/// Relative to the unscaled form this carries a factor `w0^{|ℓ|+2}`, which
/// keeps values O(1) for large waists and charges; it is the same for every
/// ℓ-term of a superposition sharing `w0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonPotential {
    pub l: i32,
    /// Focal waist in units of `c/Ω`.
    pub w0: f64,
    pub polarization: Polarization,
    pub norm: Complex64,
}

impl PhotonPotential {
    pub fn new(l: i32, w0: f64) -> Result<Self> {
        if !(w0 > 0.0 && w0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "waist must be positive, got {w0}"
            )));
        }
        Ok(PhotonPotential {
            l,
            w0,
            polarization: Polarization::Right,
            norm: ONE,
        })
    }

    pub fn with_polarization(mut self, polarization: Polarization) -> Self {
        self.polarization = polarization;
        self
    }

    /// The complex beam parameter `a(t, z)`.
    pub fn beam_parameter(&self, t: f64, z: f64) -> Complex64 {
        Complex64::new(self.w0 * self.w0, self.polarization.sign() * (t + z))
    }
}

impl Potential for PhotonPotential {
    fn series(&self, at: &Coords) -> Series {
        let sigma = self.polarization.sign();
        let m = self.l.unsigned_abs() as i32;
        let inv_w2 = 1.0 / (self.w0 * self.w0);
        let a_scaled = (at.t + at.z) * (I * sigma * inv_w2) + 1.0;
        let inv_a = a_scaled.recip();
        let rho = at.r * (1.0 / self.w0);
        let phase = (at.t - at.z - at.phi * self.l as f64) * (-I * sigma);
        let exponent = phase - rho * rho * inv_a;
        exponent.exp() * rho.powi(m) * inv_a.powi(m + 1) * self.norm
    }
}

impl ChargedFamily for PhotonPotential {
    fn charge(&self) -> i32 {
        self.l
    }
    fn with_charge(&self, l: i32) -> Self {
        PhotonPotential { l, ..*self }
    }
    fn mismatch(&self, other: &Self) -> Option<String> {
        differ("w0", self.w0, other.w0)
            .or_else(|| {
                differ(
                    "polarization",
                    self.polarization.sign(),
                    other.polarization.sign(),
                )
            })
            .or_else(|| (self.norm != other.norm).then(|| "normalization".to_string()))
    }
}

/// Relativistic electron generating function in units where lengths are
/// `1/q`, times `1/(qc)` and `c = 1`:
///
/// `f = N·e^{ik_z z}·e^{iℓφ}·e^{−b(h−1)}/h·(r/(h + 1 + it))^{|ℓ|}`,
/// `h = √((1 + it)² + r²)` on the principal branch.
///
/// The factor `e^{b}` relative to `e^{−bh}` is absorbed into `N`; without it
/// the envelope underflows for wide packets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectronPotential {
    pub l: i32,
    /// Dimensionless packet width.
    pub b: f64,
    /// Lorentz factor.
    pub gamma: f64,
    pub norm: Complex64,
}

impl ElectronPotential {
    pub fn new(l: i32, b: f64, gamma: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "width b must be positive, got {b}"
            )));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Lorentz factor must be at least 1, got {gamma}"
            )));
        }
        Ok(ElectronPotential {
            l,
            b,
            gamma,
            norm: ONE,
        })
    }

    /// Reduced Compton wavelength in frame units, `γ/b`.
    pub fn compton_length(&self) -> f64 {
        self.gamma / self.b
    }

    /// Longitudinal wavenumber `p_z/ħ` in frame units.
    pub fn longitudinal_wavenumber(&self) -> f64 {
        (self.gamma * self.gamma - 1.0).max(0.0).sqrt() / self.compton_length()
    }

    /// Argument of the square root defining `h`.
    pub fn radicand(&self, t: f64, r: f64) -> Complex64 {
        let u = Complex64::new(1.0, t);
        u * u + r * r
    }
}

impl Potential for ElectronPotential {
    fn series(&self, at: &Coords) -> Series {
        let m = self.l.unsigned_abs() as i32;
        let u = at.t * I + 1.0;
        let h = (u * u + at.r * at.r).sqrt();
        let ratio = at.r * (h + u).recip();
        let phase = at.z * (I * self.longitudinal_wavenumber()) + at.phi * (I * self.l as f64);
        let exponent = phase - (h - Series::real(1.0, at.order())) * self.b;
        exponent.exp() * h.recip() * ratio.powi(m) * self.norm
    }

    fn check_point(&self, point: &SpacetimePoint) -> Result<()> {
        let w = self.radicand(point.t, point.r);
        if w.im == 0.0 && w.re <= 0.0 {
            return Err(Error::BranchCut { re: w.re, im: w.im });
        }
        Ok(())
    }
}

impl ChargedFamily for ElectronPotential {
    fn charge(&self) -> i32 {
        self.l
    }
    fn with_charge(&self, l: i32) -> Self {
        ElectronPotential { l, ..*self }
    }
    fn mismatch(&self, other: &Self) -> Option<String> {
        differ("b", self.b, other.b)
            .or_else(|| differ("gamma", self.gamma, other.gamma))
            .or_else(|| (self.norm != other.norm).then(|| "normalization".to_string()))
    }
}

/// Relative phase of a ±ℓ pair. `Cosine` adds the two charges with equal
/// weights; `Sine` subtracts them, which shifts the fringes by half a period.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    #[default]
    Cosine,
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionTerm {
    pub weight: Complex64,
    pub l: i32,
}

/// Weighted charges making up a superposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    pub terms: Vec<SuperpositionTerm>,
}

impl SuperpositionSpec {
    pub fn single(l: i32) -> Self {
        SuperpositionSpec {
            terms: vec![SuperpositionTerm { weight: ONE, l }],
        }
    }

    /// `(1/√2)(χ_{+ℓ} ± χ_{−ℓ})`.
    pub fn pair(l: i32, weighting: Weighting) -> Self {
        let sign = match weighting {
            Weighting::Cosine => 1.0,
            Weighting::Sine => -1.0,
        };
        SuperpositionSpec {
            terms: vec![
                SuperpositionTerm {
                    weight: Complex64::new(FRAC_1_SQRT_2, 0.0),
                    l: l.abs(),
                },
                SuperpositionTerm {
                    weight: Complex64::new(sign * FRAC_1_SQRT_2, 0.0),
                    l: -l.abs(),
                },
            ],
        }
    }

    /// Largest |ℓ| among the terms.
    pub fn max_charge(&self) -> u32 {
        self.terms.iter().map(|t| t.l.unsigned_abs()).max().unwrap_or(0)
    }
}

/// Pointwise weighted sum of potentials from one family.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition<P> {
    terms: Vec<(Complex64, P)>,
}

impl<P: ChargedFamily> Superposition<P> {
    pub fn new(terms: Vec<(Complex64, P)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("superposition needs at least one term".into()))?;
        for (_, p) in &terms[1..] {
            if let Some(what) = first.1.mismatch(p) {
                return Err(Error::MismatchedParameters(what));
            }
        }
        Ok(Superposition { terms })
    }

    pub fn from_spec(base: &P, spec: &SuperpositionSpec) -> Result<Self> {
        Self::new(
            spec.terms
                .iter()
                .map(|t| (t.weight, base.with_charge(t.l)))
                .collect(),
        )
    }

    pub fn pair(base: &P, weighting: Weighting) -> Self {
        Self::from_spec(base, &SuperpositionSpec::pair(base.charge(), weighting))
            .expect("pair shares all parameters")
    }

    pub fn single(base: P) -> Self {
        Superposition {
            terms: vec![(ONE, base)],
        }
    }

    pub fn terms(&self) -> &[(Complex64, P)] {
        &self.terms
    }

    pub fn base(&self) -> &P {
        &self.terms[0].1
    }

    pub fn max_charge(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, p)| p.charge().unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Azimuthal maxima expected on a ring: none for one charge, `2|ℓ|` for
    /// a mixture.
    pub fn expected_fringes(&self) -> u32 {
        if self.terms.len() == 1 {
            0
        } else {
            2 * self.max_charge()
        }
    }

    /// Applies `f` to every term and sums the weighted results.
    pub fn combine<T, F>(&self, mut f: F) -> T
    where
        F: FnMut(&P) -> T,
        T: std::ops::Mul<Complex64, Output = T> + std::ops::Add<Output = T>,
    {
        let mut iter = self.terms.iter();
        let (w, p) = iter.next().expect("non-empty");
        iter.fold(f(p) * *w, |acc, (w, p)| acc + f(p) * *w)
    }
}

impl<P: ChargedFamily> Potential for Superposition<P> {
    fn series(&self, at: &Coords) -> Series {
        self.combine(|p| p.series(at))
    }

    fn check_point(&self, point: &SpacetimePoint) -> Result<()> {
        self.terms.iter().try_for_each(|(_, p)| p.check_point(point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{evaluate_jet, fd};
    use approx::assert_relative_eq;

    #[test]
    fn lg_vanishes_on_axis_and_is_ring_symmetric() {
        let lg = ParaxialLg::new(0, 15, 149.0, 0.8).unwrap();
        assert_eq!(lg.amplitude(&SpacetimePoint::focal(0.0, 0.0)).norm(), 0.0);
        let a = lg.amplitude(&SpacetimePoint::focal(300.0, 0.2)).norm();
        let b = lg.amplitude(&SpacetimePoint::focal(300.0, 2.9)).norm();
        assert_relative_eq!(a, b, max_relative = 1e-13);
    }

    #[test]
    fn lg_focal_plane_is_real_envelope_times_vortex() {
        let lg = ParaxialLg::new(0, 3, 2.0, 0.5).unwrap();
        let v = lg.amplitude(&SpacetimePoint::focal(1.3, 0.4));
        let unwound = v * (I * 3.0 * 0.4).exp();
        assert!(unwound.re > 0.0);
        assert!(unwound.im.abs() < 1e-15 * unwound.re);
    }

    #[test]
    fn lg_matches_closed_form_off_focus() {
        // p = 1 mode at z = z_R/2 against a direct evaluation
        let lg = ParaxialLg::new(1, 2, 1.5, 0.6).unwrap();
        let (r, phi, z) = (0.9, 0.7, lg.rayleigh_range() / 2.0);
        let w = lg.waist_at(z);
        let x = 2.0 * r * r / (w * w);
        let laguerre = 3.0 - x;
        let zr = lg.rayleigh_range();
        let radius = z * (1.0 + (zr / z).powi(2));
        let gouy = (z / zr).atan();
        let c = (2.0 / (PI * 6.0)).sqrt();
        let expect = c / w
            * (2f64.sqrt() * r / w).powi(2)
            * laguerre
            * (-r * r / (w * w)).exp()
            * (-I * (lg.wavenumber() * r * r / (2.0 * radius) + 2.0 * phi - 5.0 * gouy)).exp();
        let got = lg.amplitude(&SpacetimePoint::new(0.0, r, phi, z));
        assert_relative_eq!((got - expect).norm(), 0.0, epsilon = 1e-14 * expect.norm());
    }

    #[test]
    fn photon_focal_plane_reduction() {
        let chi = PhotonPotential::new(4, 3.0).unwrap();
        let (r, phi) = (2.2, 0.9);
        let v = chi.value(&SpacetimePoint::focal(r, phi));
        let expect = (I * 4.0 * phi).exp() * (r / 3.0f64).powi(4) * (-r * r / 9.0).exp();
        assert_relative_eq!((v - expect).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn photon_matches_unscaled_form() {
        let chi = PhotonPotential::new(-3, 2.5).unwrap();
        let p = SpacetimePoint::new(0.4, 1.7, 2.0, -0.3);
        let a = chi.beam_parameter(p.t, p.z);
        let m = 3;
        let raw =
            (-I * ((p.t - p.z) + 3.0 * p.phi)).exp() * p.r.powi(m) / a.powi(m + 1) * (-p.r * p.r / a).exp();
        let scaled = raw * 2.5f64.powi(m + 2);
        assert_relative_eq!((chi.value(&p) - scaled).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn electron_focal_envelope_is_positive() {
        let f = ElectronPotential::new(5, 1500.0, 1.00005).unwrap();
        let v = f.value(&SpacetimePoint::focal(0.05, 0.3));
        let unwound = v * (-I * 5.0 * 0.3).exp();
        assert!(unwound.re > 0.0 && unwound.im.abs() < 1e-14 * unwound.re);
        assert_eq!(f.value(&SpacetimePoint::focal(0.0, 0.0)).norm(), 0.0);
    }

    #[test]
    fn electron_radial_derivative_matches_oracle() {
        let f = ElectronPotential::new(5, 1500.0, 1.00005).unwrap();
        let p = SpacetimePoint::focal(1.0, 0.0);
        let jet = evaluate_jet(&f, &p, 1).unwrap();
        let oracle = fd::richardson_partial(
            &|q: &SpacetimePoint| f.value(q),
            &p,
            crate::jet::MultiIndex::new(0, 1, 0, 0).unwrap(),
            [1e-4; 4],
            2,
        );
        let exact = jet.d(0, 1, 0, 0);
        assert!((exact - oracle).norm() < 1e-6 * exact.norm());
    }

    #[test]
    fn superposition_rejects_mismatch() {
        let a = PhotonPotential::new(2, 3.0).unwrap();
        let b = PhotonPotential::new(-2, 4.0).unwrap();
        assert!(matches!(
            Superposition::new(vec![(ONE, a), (ONE, b)]),
            Err(Error::MismatchedParameters(_))
        ));
        let e = ElectronPotential::new(2, 100.0, 1.5).unwrap();
        let spec = SuperpositionSpec::pair(2, Weighting::Cosine);
        assert!(Superposition::from_spec(&e, &spec).is_ok());
    }

    #[test]
    fn single_term_is_identity() {
        let chi = PhotonPotential::new(7, 5.0).unwrap();
        let s = Superposition::from_spec(&chi, &SuperpositionSpec::single(7)).unwrap();
        let p = SpacetimePoint::new(0.1, 3.0, 0.4, 0.2);
        assert_eq!(s.value(&p), chi.value(&p));
    }

    #[test]
    fn pair_has_two_l_zeros_on_a_ring() {
        let chi = PhotonPotential::new(15, 10.0).unwrap();
        for weighting in [Weighting::Cosine, Weighting::Sine] {
            let s = Superposition::pair(&chi, weighting);
            let n = 15 * 64;
            // the unwound focal-plane value is real, so count its sign changes
            let samples: Vec<f64> = (0..n)
                .map(|k| {
                    let phi = (k as f64 + 0.5) * std::f64::consts::TAU / n as f64;
                    let v = s.value(&SpacetimePoint::focal(27.0, phi));
                    if weighting == Weighting::Cosine {
                        v.re
                    } else {
                        v.im
                    }
                })
                .collect();
            let changes = (0..n)
                .filter(|&k| samples[k].signum() != samples[(k + 1) % n].signum())
                .count();
            assert_eq!(changes, 30);
        }
    }
}
