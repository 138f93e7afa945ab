//! Dirac spinor of a relativistic vortex electron built from the scalar
//! generating function `f`:
//!
//! ```text
//! ψ1 = f,  ψ2 = 0,
//! ψ3 = iƛ(∂t + ∂z)f,
//! ψ4 = iƛ·e^{iφ}(∂r + (i/r)∂φ)f
//! ```
//!
//! in the packet frame (`c = 1`, `ƛ = γ/b`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::IntensityField;
use crate::error::{Error, Result};
use crate::jet::{evaluate_jet, Jet, Potential, SpacetimePoint};
use crate::potentials::{ChargedFamily, ElectronPotential, Superposition, SuperpositionSpec, Weighting};
use crate::units::Frame;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A generating function that knows its reduced Compton wavelength.
pub trait ElectronSource: Potential {
    fn compton_length(&self) -> f64;
}

impl ElectronSource for ElectronPotential {
    fn compton_length(&self) -> f64 {
        ElectronPotential::compton_length(self)
    }
}

impl ElectronSource for Superposition<ElectronPotential> {
    fn compton_length(&self) -> f64 {
        self.base().compton_length()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DiracSpinor {
    pub psi: [Complex64; 4],
}

impl DiracSpinor {
    pub fn component_densities(&self) -> [f64; 4] {
        self.psi.map(|c| c.norm_sqr())
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().all(|c| c.is_finite())
    }
}

impl std::ops::Add for DiracSpinor {
    type Output = DiracSpinor;
    fn add(self, rhs: DiracSpinor) -> DiracSpinor {
        DiracSpinor {
            psi: std::array::from_fn(|k| self.psi[k] + rhs.psi[k]),
        }
    }
}

impl std::ops::Mul<Complex64> for DiracSpinor {
    type Output = DiracSpinor;
    fn mul(self, k: Complex64) -> DiracSpinor {
        DiracSpinor {
            psi: self.psi.map(|c| c * k),
        }
    }
}

/// Spinor from an order-1 jet of `f` and the Compton length in frame units.
pub fn spinor_from_jet(jet: &Jet, compton: f64) -> DiracSpinor {
    let p = jet.point;
    let light_cone = jet.d(1, 0, 0, 0) + jet.d(0, 0, 0, 1);
    let raise = (I * p.phi).exp() * (jet.d(0, 1, 0, 0) + I * jet.d(0, 0, 1, 0) / p.r);
    DiracSpinor {
        psi: [
            jet.value(),
            Complex64::new(0.0, 0.0),
            I * compton * light_cone,
            I * compton * raise,
        ],
    }
}

pub fn dirac_spinor<S: ElectronSource + ?Sized>(f: &S, point: &SpacetimePoint) -> Result<DiracSpinor> {
    let jet = evaluate_jet(f, point, 1)?;
    let psi = spinor_from_jet(&jet, f.compton_length());
    if !psi.is_finite() {
        return Err(Error::NonFinite {
            t: point.t,
            r: point.r,
            phi: point.phi,
            z: point.z,
        });
    }
    Ok(psi)
}

/// `ψ†ψ`.
pub fn electron_density(psi: &DiracSpinor) -> f64 {
    psi.component_densities().iter().sum()
}

/// `w₊Ψ_{+ℓ} + w₋Ψ_{−ℓ}` for two packets that differ only in the sign of ℓ.
pub fn superposed_spinor(
    point: &SpacetimePoint,
    plus: &ElectronPotential,
    minus: &ElectronPotential,
    weights: (Complex64, Complex64),
) -> Result<DiracSpinor> {
    if plus.charge() != -minus.charge() {
        return Err(Error::MismatchedParameters(format!(
            "charges {} and {} are not opposite",
            plus.charge(),
            minus.charge()
        )));
    }
    if let Some(what) = plus.mismatch(minus) {
        return Err(Error::MismatchedParameters(what));
    }
    Ok(dirac_spinor(plus, point)? * weights.0 + dirac_spinor(minus, point)? * weights.1)
}

/// An electron packet sampled on a fixed `t`, `z` slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectronBeam {
    pub potential: Superposition<ElectronPotential>,
    pub frame: Frame,
    pub t: f64,
    pub z: f64,
}

impl ElectronBeam {
    pub fn new(l: i32, b: f64, gamma: f64, weighting: Option<Weighting>) -> Result<Self> {
        let base = ElectronPotential::new(l, b, gamma)?;
        let spec = match weighting {
            Some(w) => SuperpositionSpec::pair(l, w),
            None => SuperpositionSpec::single(l),
        };
        Ok(ElectronBeam {
            potential: Superposition::from_spec(&base, &spec)?,
            frame: Frame::electron(b, gamma),
            t: 0.0,
            z: 0.0,
        })
    }

    /// Gaussian waist of the wide-packet limit in frame units, `√(2/b)`.
    pub fn waist(&self) -> f64 {
        (2.0 / self.potential.base().b).sqrt()
    }

    pub fn field(&self, r: f64, phi: f64) -> Result<DiracSpinor> {
        dirac_spinor(&self.potential, &SpacetimePoint::new(self.t, r, phi, self.z))
    }
}

impl IntensityField for ElectronBeam {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        Ok(electron_density(&self.field(r, phi)?))
    }
    fn charge(&self) -> u32 {
        self.potential.max_charge()
    }
    fn waist_hint(&self) -> f64 {
        self.waist()
    }
    fn expected_fringes(&self) -> u32 {
        self.potential.expected_fringes()
    }
    fn length_unit(&self) -> f64 {
        self.frame.length
    }
}
