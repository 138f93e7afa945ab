//! Electromagnetic field of a vortex beam as a Riemann–Silberstein vector.
//!
//! `F = √(ε₀/2)·E + iB/√(2μ₀)` is generated from a scalar potential `χ` by
//!
//! ```text
//! F_x = (∂x∂z + i∂y∂t)χ
//! F_y = (∂y∂z − i∂x∂t)χ
//! F_z = −(∂r² + (1/r)∂r + (1/r²)∂φ²)χ
//! ```
//!
//! with `c = 1` in the potential's frame.
//!
//! Fields follow from `F` as `E = √(2/ε₀)·Re F` and `B = √(2μ₀)·Im F`, so
//! that `|F|²` is the energy density `ε₀|E|²/2 + |B|²/2μ₀`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::IntensityField;
use crate::error::{Error, Result};
use crate::jet::{evaluate_jet, Jet, Potential, SpacetimePoint};
use crate::potentials::{PhotonPotential, Superposition, SuperpositionSpec, Weighting};
use crate::units::{Frame, EPSILON_0, MU_0};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RsVector {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl RsVector {
    pub fn components(&self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn transverse_intensity(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    pub fn longitudinal_intensity(&self) -> f64 {
        self.z.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

impl std::ops::Add for RsVector {
    type Output = RsVector;
    fn add(self, rhs: RsVector) -> RsVector {
        RsVector {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
            z: self.z + rhs.z,
        }
    }
}

impl std::ops::Mul<Complex64> for RsVector {
    type Output = RsVector;
    fn mul(self, k: Complex64) -> RsVector {
        RsVector {
            x: self.x * k,
            y: self.y * k,
            z: self.z * k,
        }
    }
}

/// Builds `F` from an order-2 jet of the potential.
pub fn rs_from_jet(jet: &Jet) -> RsVector {
    let p = jet.point;
    let (c, s, inv_r) = (p.phi.cos(), p.phi.sin(), 1.0 / p.r);
    // ∂x and ∂y of the first derivative along `var` (t = index 0, z = index 3)
    let dx = |dr: Complex64, dphi: Complex64| dr * c - dphi * (s * inv_r);
    let dy = |dr: Complex64, dphi: Complex64| dr * s + dphi * (c * inv_r);
    let (rz, pz) = (jet.d(0, 1, 0, 1), jet.d(0, 0, 1, 1));
    let (rt, pt) = (jet.d(1, 1, 0, 0), jet.d(1, 0, 1, 0));
    RsVector {
        x: dx(rz, pz) + I * dy(rt, pt),
        y: dy(rz, pz) - I * dx(rt, pt),
        z: -(jet.d(0, 2, 0, 0) + jet.d(0, 1, 0, 0) * inv_r + jet.d(0, 0, 2, 0) * inv_r * inv_r),
    }
}

/// Riemann–Silberstein vector at a point off the beam axis.
pub fn rs_vector<P: Potential + ?Sized>(potential: &P, point: &SpacetimePoint) -> Result<RsVector> {
    let jet = evaluate_jet(potential, point, 2)?;
    let f = rs_from_jet(&jet);
    if !f.is_finite() {
        return Err(Error::NonFinite {
            t: point.t,
            r: point.r,
            phi: point.phi,
            z: point.z,
        });
    }
    Ok(f)
}

/// `|F_x|² + |F_y|² + |F_z|²`.
pub fn em_intensity(f: &RsVector) -> f64 {
    f.transverse_intensity() + f.longitudinal_intensity()
}

/// Electric and magnetic fields, `E = √(2/ε₀)·Re F`, `B = √(2μ₀)·Im F`.
pub fn extract_eb(f: &RsVector) -> ([f64; 3], [f64; 3]) {
    let (ke, kb) = ((2.0 / EPSILON_0).sqrt(), (2.0 * MU_0).sqrt());
    let c = f.components();
    (c.map(|v| ke * v.re), c.map(|v| kb * v.im))
}

/// A photon beam in the focal plane (or any fixed `t`, `z` slice).
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonBeam {
    pub potential: Superposition<PhotonPotential>,
    pub frame: Frame,
    pub t: f64,
    pub z: f64,
}

impl PhotonBeam {
    /// `w0` and `wavelength` in metres; `weighting = None` gives a single ℓ.
    pub fn new(l: i32, w0: f64, wavelength: f64, weighting: Option<Weighting>) -> Result<Self> {
        let frame = Frame::wave(wavelength);
        let base = PhotonPotential::new(l, frame.from_si_length(w0))?;
        let spec = match weighting {
            Some(w) => SuperpositionSpec::pair(l, w),
            None => SuperpositionSpec::single(l),
        };
        Ok(PhotonBeam {
            potential: Superposition::from_spec(&base, &spec)?,
            frame,
            t: 0.0,
            z: 0.0,
        })
    }

    /// Waist in frame units (wavelengths).
    pub fn w0(&self) -> f64 {
        self.potential.base().w0
    }

    pub fn field(&self, r: f64, phi: f64) -> Result<RsVector> {
        rs_vector(&self.potential, &SpacetimePoint::new(self.t, r, phi, self.z))
    }
}

impl IntensityField for PhotonBeam {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        Ok(em_intensity(&self.field(r, phi)?))
    }
    fn charge(&self) -> u32 {
        self.potential.max_charge()
    }
    fn waist_hint(&self) -> f64 {
        self.w0()
    }
    fn expected_fringes(&self) -> u32 {
        self.potential.expected_fringes()
    }
    fn length_unit(&self) -> f64 {
        self.frame.length
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::operator::{apply_operator, Atom, DiffOpSpec};
    use approx::assert_relative_eq;

    #[test]
    fn zero_field_has_zero_intensity() {
        assert_eq!(em_intensity(&RsVector::default()), 0.0);
    }

    #[test]
    fn real_and_imaginary_parts_split_into_e_and_b() {
        let real = RsVector {
            x: Complex64::new(1.0, 0.0),
            y: Complex64::new(-2.0, 0.0),
            z: Complex64::new(0.5, 0.0),
        };
        let (_, b) = extract_eb(&real);
        assert_eq!(b, [0.0; 3]);
        let (e, _) = extract_eb(&(real * I));
        assert!(e.iter().all(|v| v.abs() < 1e-30));
    }

    #[test]
    fn energy_density_identity() {
        let f = RsVector {
            x: Complex64::new(0.3, -1.2),
            y: Complex64::new(2.0, 0.7),
            z: Complex64::new(-0.1, 0.4),
        };
        let (e, b) = extract_eb(&f);
        let e2: f64 = e.iter().map(|v| v * v).sum();
        let b2: f64 = b.iter().map(|v| v * v).sum();
        assert_relative_eq!(
            EPSILON_0 * e2 / 2.0 + b2 / (2.0 * MU_0),
            em_intensity(&f),
            max_relative = 1e-12
        );
    }

    #[test]
    fn jet_formula_matches_composed_operators() {
        let beam = PhotonBeam::new(3, 4e-6, 800e-9, Some(Weighting::Cosine)).unwrap();
        let chi = &beam.potential;
        let p = SpacetimePoint::new(0.3, 3.1, 0.7, -0.2);
        let f = rs_vector(chi, &p).unwrap();
        let op = |atoms: Vec<Atom>| apply_operator(&DiffOpSpec::new(atoms).unwrap(), chi, &p).unwrap();
        let fx = op(vec![Atom::Dx, Atom::Dz]) + op(vec![Atom::Scale(I), Atom::Dy, Atom::Dt]);
        let fy = op(vec![Atom::DyDz]) - op(vec![Atom::IDxDt]);
        let fz = -op(vec![Atom::Dx, Atom::Dx]) - op(vec![Atom::Dy, Atom::Dy]);
        let scale = f.z.norm();
        assert_relative_eq!((f.x - fx).norm(), 0.0, epsilon = 1e-12 * scale);
        assert_relative_eq!((f.y - fy).norm(), 0.0, epsilon = 1e-12 * scale);
        assert_relative_eq!((f.z - fz).norm(), 0.0, epsilon = 1e-12 * scale);
    }

    #[test]
    fn on_axis_is_rejected() {
        let beam = PhotonBeam::new(15, 6.2e-6, 800e-9, Some(Weighting::Cosine)).unwrap();
        assert!(matches!(beam.field(0.0, 0.0), Err(Error::OnAxis { .. })));
    }

    #[test]
    fn field_vanishes_towards_axis_for_high_charge() {
        let beam = PhotonBeam::new(15, 6.2e-6, 800e-9, Some(Weighting::Cosine)).unwrap();
        let near = beam.field(1e-3, 0.2).unwrap();
        let nearer = beam.field(5e-4, 0.2).unwrap();
        // r^15 e^{±15iφ} is harmonic, so F_z starts at r^15 and F_⊥ at r^14
        let ratio = (em_intensity(&nearer) / em_intensity(&near)).sqrt();
        assert_relative_eq!(ratio, 2f64.powi(-14), max_relative = 1e-3);
        assert!(nearer.longitudinal_intensity() < 1e-6 * nearer.transverse_intensity());
    }
}
