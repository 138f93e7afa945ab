//! Self-dual curvature of a linearized gravitational vortex wave.
//!
//! The five independent curvature scalars are fourth-order derivatives of the
//! same potential used for light,
//!
//! ```text
//! φ_n = (∂t − ∂z)^{4−n} (−e^{iφ}(∂r + (i/r)∂φ))^n χ,   n = 0..4,
//! ```
//!
//! where `n` counts the spinor indices equal to one. They assemble into a
//! symmetric trace-free 3×3 tensor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::IntensityField;
use crate::error::{Error, Result};
use crate::jet::operator::{apply_atom, apply_operator, Atom, DiffOpSpec, Geometry};
use crate::jet::{series_at, Potential, SpacetimePoint};
use crate::potentials::{PhotonPotential, Superposition, SuperpositionSpec, Weighting};
use crate::units::{wavelength_from_omega, Frame};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// How the six independent entries enter the intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Contraction {
    /// `½ Σ |G_ij|²` over the six independent entries.
    #[default]
    Independent,
    /// `½ Σ_{ij} |G_ij|²` over all nine entries, off-diagonals twice.
    FullSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurvatureTensor {
    pub g11: Complex64,
    pub g12: Complex64,
    pub g13: Complex64,
    pub g22: Complex64,
    pub g23: Complex64,
    pub g33: Complex64,
}

impl CurvatureTensor {
    /// Assembles the tensor from `φ_0 … φ_4`.
    pub fn from_scalars(phi: [Complex64; 5]) -> Self {
        let [p0, p1, p2, p3, p4] = phi;
        CurvatureTensor {
            g11: p0 - p2 * 2.0 + p4,
            g12: I * (p0 - p4),
            g13: (p3 - p1) * 2.0,
            g22: -p0 - p2 * 2.0 - p4,
            g23: -I * (p1 + p3) * 2.0,
            g33: p2 * 4.0,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.g11 + self.g22 + self.g33
    }

    /// Entries in the order 11, 12, 13, 22, 23, 33.
    pub fn components(&self) -> [Complex64; 6] {
        [self.g11, self.g12, self.g13, self.g22, self.g23, self.g33]
    }

    pub fn matrix(&self) -> [[Complex64; 3]; 3] {
        [
            [self.g11, self.g12, self.g13],
            [self.g12, self.g22, self.g23],
            [self.g13, self.g23, self.g33],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

impl std::ops::Add for CurvatureTensor {
    type Output = CurvatureTensor;
    fn add(self, o: CurvatureTensor) -> CurvatureTensor {
        CurvatureTensor {
            g11: self.g11 + o.g11,
            g12: self.g12 + o.g12,
            g13: self.g13 + o.g13,
            g22: self.g22 + o.g22,
            g23: self.g23 + o.g23,
            g33: self.g33 + o.g33,
        }
    }
}

impl std::ops::Mul<Complex64> for CurvatureTensor {
    type Output = CurvatureTensor;
    fn mul(self, k: Complex64) -> CurvatureTensor {
        CurvatureTensor {
            g11: self.g11 * k,
            g12: self.g12 * k,
            g13: self.g13 * k,
            g22: self.g22 * k,
            g23: self.g23 * k,
            g33: self.g33 * k,
        }
    }
}

fn on_axis_check(point: &SpacetimePoint) -> Result<()> {
    if point.r <= 0.0 {
        return Err(Error::OnAxis { r: point.r });
    }
    Ok(())
}

/// A single curvature scalar with `l` light-cone and `n` transverse factors.
pub fn phi_abcd<P: Potential + ?Sized>(
    chi: &P,
    point: &SpacetimePoint,
    l: usize,
    n: usize,
) -> Result<Complex64> {
    if l + n != 4 {
        return Err(Error::InvalidIndexCount { l, n });
    }
    on_axis_check(point)?;
    apply_operator(&DiffOpSpec::curvature_component(l, n)?, chi, point)
}

/// All five curvature scalars from one order-4 expansion of `χ`.
pub fn curvature_scalars<P: Potential + ?Sized>(chi: &P, point: &SpacetimePoint) -> Result<[Complex64; 5]> {
    on_axis_check(point)?;
    let geometry = Geometry::at(point, 4);
    let mut transverse = series_at(chi, point, 4)?;
    let mut out = [Complex64::new(0.0, 0.0); 5];
    for (n, slot) in out.iter_mut().enumerate() {
        if n > 0 {
            transverse = apply_atom(Atom::NegRaise, &transverse, &geometry);
        }
        let mut u = transverse;
        for _ in n..4 {
            u = apply_atom(Atom::TimeMinusZ, &u, &geometry);
        }
        *slot = u.value();
    }
    Ok(out)
}

pub fn curvature<P: Potential + ?Sized>(chi: &P, point: &SpacetimePoint) -> Result<CurvatureTensor> {
    let g = CurvatureTensor::from_scalars(curvature_scalars(chi, point)?);
    if !g.is_finite() {
        return Err(Error::NonFinite {
            t: point.t,
            r: point.r,
            phi: point.phi,
            z: point.z,
        });
    }
    Ok(g)
}

pub fn gw_intensity(g: &CurvatureTensor, contraction: Contraction) -> f64 {
    let diagonal = g.g11.norm_sqr() + g.g22.norm_sqr() + g.g33.norm_sqr();
    let off = g.g12.norm_sqr() + g.g13.norm_sqr() + g.g23.norm_sqr();
    match contraction {
        Contraction::Independent => 0.5 * (diagonal + off),
        Contraction::FullSymmetric => 0.5 * (diagonal + 2.0 * off),
    }
}

/// A gravitational vortex wave sampled on a fixed `t`, `z` slice.
#[derive(Debug, Clone, PartialEq)]
pub struct GwBeam {
    pub potential: Superposition<PhotonPotential>,
    pub frame: Frame,
    pub contraction: Contraction,
    pub t: f64,
    pub z: f64,
}

impl GwBeam {
    /// `w0` in wavelengths, `omega` in Hz (`λ = c/Ω`).
    pub fn new(l: i32, w0: f64, omega: f64, weighting: Option<Weighting>) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "frequency must be positive, got {omega}"
            )));
        }
        let base = PhotonPotential::new(l, w0)?;
        let spec = match weighting {
            Some(w) => SuperpositionSpec::pair(l, w),
            None => SuperpositionSpec::single(l),
        };
        Ok(GwBeam {
            potential: Superposition::from_spec(&base, &spec)?,
            frame: Frame::wave(wavelength_from_omega(omega)),
            contraction: Contraction::default(),
            t: 0.0,
            z: 0.0,
        })
    }

    pub fn w0(&self) -> f64 {
        self.potential.base().w0
    }

    pub fn field(&self, r: f64, phi: f64) -> Result<CurvatureTensor> {
        curvature(&self.potential, &SpacetimePoint::new(self.t, r, phi, self.z))
    }
}

impl IntensityField for GwBeam {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        Ok(gw_intensity(&self.field(r, phi)?, self.contraction))
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
