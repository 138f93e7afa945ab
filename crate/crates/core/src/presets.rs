//! Named parameter sets and a species-agnostic beam wrapper.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::IntensityField;
use crate::electron::{electron_density, ElectronBeam};
use crate::error::{Error, Result};
use crate::gw::{gw_intensity, GwBeam};
use crate::photon::{em_intensity, PhotonBeam};
use crate::potentials::Weighting;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Photon,
    Electron,
    Gw,
}

impl std::fmt::Display for Species {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Species::Photon => "photon",
            Species::Electron => "electron",
            Species::Gw => "gw",
        })
    }
}

/// Physical parameters of one beam, in the units named by each field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "species", rename_all = "lowercase", deny_unknown_fields)]
pub enum BeamParams {
    Photon {
        l: i32,
        w0_m: f64,
        wavelength_m: f64,
    },
    Electron {
        l: i32,
        b: f64,
        gamma: f64,
    },
    Gw {
        l: i32,
        /// Waist in wavelengths.
        w0_lambda: f64,
        omega_hz: f64,
    },
}

impl BeamParams {
    pub fn species(&self) -> Species {
        match self {
            BeamParams::Photon { .. } => Species::Photon,
            BeamParams::Electron { .. } => Species::Electron,
            BeamParams::Gw { .. } => Species::Gw,
        }
    }

    pub fn charge(&self) -> i32 {
        match *self {
            BeamParams::Photon { l, .. } | BeamParams::Electron { l, .. } | BeamParams::Gw { l, .. } => l,
        }
    }

    pub fn with_charge(mut self, charge: i32) -> Self {
        match &mut self {
            BeamParams::Photon { l, .. } | BeamParams::Electron { l, .. } | BeamParams::Gw { l, .. } => {
                *l = charge
            }
        }
        self
    }

    /// Key/value pairs for file headers.
    pub fn describe(&self) -> Vec<(String, String)> {
        let kv = |k: &str, v: f64| (k.to_string(), v.to_string());
        let mut out = vec![
            ("species".to_string(), self.species().to_string()),
            ("l".to_string(), self.charge().to_string()),
        ];
        match *self {
            BeamParams::Photon {
                w0_m, wavelength_m, ..
            } => {
                out.push(kv("w0_m", w0_m));
                out.push(kv("wavelength_m", wavelength_m));
            }
            BeamParams::Electron { b, gamma, .. } => {
                out.push(kv("b", b));
                out.push(kv("gamma", gamma));
            }
            BeamParams::Gw {
                w0_lambda, omega_hz, ..
            } => {
                out.push(kv("w0_lambda", w0_lambda));
                out.push(kv("omega_hz", omega_hz));
            }
        }
        out
    }
}

/// Beam parameters plus how the charges are combined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSpec {
    pub params: BeamParams,
    /// `None` is a single charge; `Some` a ±ℓ pair.
    pub superposition: Option<Weighting>,
}

impl BeamSpec {
    pub fn build(&self) -> Result<Beam> {
        let w = self.superposition;
        Ok(match self.params {
            BeamParams::Photon {
                l,
                w0_m,
                wavelength_m,
            } => Beam::Photon(PhotonBeam::new(l, w0_m, wavelength_m, w)?),
            BeamParams::Electron { l, b, gamma } => Beam::Electron(ElectronBeam::new(l, b, gamma, w)?),
            BeamParams::Gw {
                l,
                w0_lambda,
                omega_hz,
            } => Beam::Gw(GwBeam::new(l, w0_lambda, omega_hz, w)?),
        })
    }
}

/// One beam of any species.
#[derive(Debug, Clone, PartialEq)]
pub enum Beam {
    Photon(PhotonBeam),
    Electron(ElectronBeam),
    Gw(GwBeam),
}

impl Beam {
    pub fn species(&self) -> Species {
        match self {
            Beam::Photon(_) => Species::Photon,
            Beam::Electron(_) => Species::Electron,
            Beam::Gw(_) => Species::Gw,
        }
    }

    /// Moves the sampled slice to time `t` and axial position `z` (frame units).
    pub fn with_slice(mut self, t: f64, z: f64) -> Self {
        match &mut self {
            Beam::Photon(b) => (b.t, b.z) = (t, z),
            Beam::Electron(b) => (b.t, b.z) = (t, z),
            Beam::Gw(b) => (b.t, b.z) = (t, z),
        }
        self
    }

    fn field(&self) -> &dyn IntensityField {
        match self {
            Beam::Photon(b) => b,
            Beam::Electron(b) => b,
            Beam::Gw(b) => b,
        }
    }

    /// Frame length per grid unit: the waist for photons and GWs, `1/q` for
    /// electrons.
    pub fn grid_unit(&self) -> f64 {
        match self {
            Beam::Photon(b) => b.w0(),
            Beam::Electron(_) => 1.0,
            Beam::Gw(b) => b.w0(),
        }
    }

    pub fn component_names(&self) -> &'static [&'static str] {
        match self {
            Beam::Photon(_) => &["Fx", "Fy", "Fz"],
            Beam::Electron(_) => &["psi1", "psi2", "psi3", "psi4"],
            Beam::Gw(_) => &["G11", "G12", "G13", "G22", "G23", "G33"],
        }
    }

    /// Intensity and field components at `(r, φ)` in frame units.
    pub fn components(&self, r: f64, phi: f64) -> Result<(f64, Vec<Complex64>)> {
        Ok(match self {
            Beam::Photon(b) => {
                let f = b.field(r, phi)?;
                (em_intensity(&f), f.components().to_vec())
            }
            Beam::Electron(b) => {
                let psi = b.field(r, phi)?;
                (electron_density(&psi), psi.psi.to_vec())
            }
            Beam::Gw(b) => {
                let g = b.field(r, phi)?;
                (gw_intensity(&g, b.contraction), g.components().to_vec())
            }
        })
    }
}

impl IntensityField for Beam {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        self.field().intensity(r, phi)
    }
    fn charge(&self) -> u32 {
        self.field().charge()
    }
    fn waist_hint(&self) -> f64 {
        self.field().waist_hint()
    }
    fn expected_fringes(&self) -> u32 {
        self.field().expected_fringes()
    }
    fn length_unit(&self) -> f64 {
        self.field().length_unit()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub spec: BeamSpec,
    /// Expected fringe visibility.
    pub target_vis: f64,
}

const PAIR: Option<Weighting> = Some(Weighting::Cosine);

pub fn presets() -> Vec<Preset> {
    let photon = |w0_m| BeamSpec {
        params: BeamParams::Photon {
            l: 15,
            w0_m,
            wavelength_m: 800e-9,
        },
        superposition: PAIR,
    };
    let electron = |b, gamma| BeamSpec {
        params: BeamParams::Electron { l: 15, b, gamma },
        superposition: PAIR,
    };
    let gw = |w0_lambda| BeamSpec {
        params: BeamParams::Gw {
            l: 15,
            w0_lambda,
            omega_hz: 150.0,
        },
        superposition: PAIR,
    };
    vec![
        Preset {
            name: "fig1a",
            description: "light, ℓ = ±15, λ = 800 nm, w0 = 149 μm (paraxial)",
            spec: photon(149e-6),
            target_vis: 0.99,
        },
        Preset {
            name: "fig1b",
            description: "light, ℓ = ±15, λ = 800 nm, w0 = 6.2 μm (focused)",
            spec: photon(6.2e-6),
            target_vis: 0.5,
        },
        Preset {
            name: "fig2a",
            description: "electron, ℓ = ±15, b = 1500, γ = 1 + 5·10⁻⁵ (nonrelativistic)",
            spec: electron(1500.0, 1.0 + 5e-5),
            target_vis: 0.99,
        },
        Preset {
            name: "fig2b",
            description: "electron, ℓ = ±15, b = 142.1, γ = 1.9 (focused, relativistic)",
            spec: electron(142.1, 1.9),
            target_vis: 0.5,
        },
        Preset {
            name: "fig3a",
            description: "gravitational wave, ℓ = ±15, Ω = 150 Hz, w0 = 63.1λ (paraxial)",
            spec: gw(63.1),
            target_vis: 0.99,
        },
        Preset {
            name: "fig3b",
            description: "gravitational wave, ℓ = ±15, Ω = 150 Hz, w0 = 7.41λ (focused)",
            spec: gw(7.41),
            target_vis: 0.5,
        },
    ]
}

pub fn preset(name: &str) -> Result<Preset> {
    let all = presets();
    let names: Vec<&str> = all.iter().map(|p| p.name).collect();
    all.iter()
        .find(|p| p.name == name)
        .cloned()
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            valid: names.join(", "),
        })
}
