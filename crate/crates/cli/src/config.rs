//! Run configuration: JSON file values overlaid by command-line flags, and
//! resolution into a beam.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use vortexlab::gw::Contraction;
use vortexlab::potentials::Weighting;
use vortexlab::presets::{preset, BeamParams, BeamSpec, Species};

/// A mistake in how the program was invoked; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SpeciesArg {
    Photon,
    Electron,
    Gw,
}

impl From<SpeciesArg> for Species {
    fn from(s: SpeciesArg) -> Species {
        match s {
            SpeciesArg::Photon => Species::Photon,
            SpeciesArg::Electron => Species::Electron,
            SpeciesArg::Gw => Species::Gw,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SuperpositionArg {
    Cos,
    Sin,
}

impl From<SuperpositionArg> for Weighting {
    fn from(s: SuperpositionArg) -> Weighting {
        match s {
            SuperpositionArg::Cos => Weighting::Cosine,
            SuperpositionArg::Sin => Weighting::Sine,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridArg {
    Polar,
    Cartesian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionArg {
    Independent,
    FullSymmetric,
}

impl From<ContractionArg> for Contraction {
    fn from(c: ContractionArg) -> Contraction {
        match c {
            ContractionArg::Independent => Contraction::Independent,
            ContractionArg::FullSymmetric => Contraction::FullSymmetric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    W0,
    B,
    Gamma,
    L,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub kind: Option<GridArg>,
    pub resolution: Option<usize>,
    /// Half-width (Cartesian) or outer radius (polar), in grid units.
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: Option<SweepParam>,
    pub values: Option<Vec<f64>>,
}

/// Everything a run can be configured with; every field is optional so a
/// file and the flags can be merged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub species: Option<SpeciesArg>,
    pub l: Option<i32>,
    pub w0_um: Option<f64>,
    pub lambda_nm: Option<f64>,
    pub b: Option<f64>,
    pub gamma: Option<f64>,
    pub w0_lambda: Option<f64>,
    pub omega_hz: Option<f64>,
    pub superposition: Option<SuperpositionArg>,
    pub contraction: Option<ContractionArg>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    pub out: Option<PathBuf>,
}

/// Beam selection flags shared by the beam-level subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct BeamArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Named parameter set (see `presets`).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long, value_enum)]
    pub species: Option<SpeciesArg>,
    /// Topological charge ℓ.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i32>,
    /// Photon waist in micrometres.
    #[arg(long = "w0-um")]
    pub w0_um: Option<f64>,
    /// Photon wavelength in nanometres [default: 800].
    #[arg(long = "lambda-nm")]
    pub lambda_nm: Option<f64>,
    /// Electron packet width parameter.
    #[arg(long)]
    pub b: Option<f64>,
    /// Electron Lorentz factor.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Gravitational-wave waist in wavelengths.
    #[arg(long = "w0-lambda")]
    pub w0_lambda: Option<f64>,
    /// Gravitational-wave angular frequency in Hz [default: 150].
    #[arg(long = "omega-hz")]
    pub omega_hz: Option<f64>,
    /// Superpose ±ℓ with equal (cos) or opposite (sin) weights; a single ℓ
    /// otherwise. Presets always use a pair.
    #[arg(long, value_enum)]
    pub superposition: Option<SuperpositionArg>,
    /// Gravitational-wave intensity contraction [default: independent].
    #[arg(long, value_enum)]
    pub contraction: Option<ContractionArg>,
}

impl BeamArgs {
    fn overlay(&self, mut cfg: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if self.$field.is_some() { cfg.$field = self.$field.clone(); })*
            };
        }
        take!(
            preset,
            species,
            l,
            w0_um,
            lambda_nm,
            b,
            gamma,
            w0_lambda,
            omega_hz,
            superposition,
            contraction
        );
        cfg
    }

    /// The configuration file (if any) with these flags applied on top.
    pub fn resolve(&self) -> anyhow::Result<RunConfig> {
        let base = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        Ok(self.overlay(base))
    }
}

pub fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())).into())
}

/// A beam ready to build, with a name for output files.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedBeam {
    pub name: String,
    pub spec: BeamSpec,
    pub contraction: Option<Contraction>,
}

impl ResolvedBeam {
    pub fn build(&self) -> anyhow::Result<vortexlab::presets::Beam> {
        let mut beam = self.spec.build().map_err(|e| UsageError(e.to_string()))?;
        if let (vortexlab::presets::Beam::Gw(gw), Some(c)) = (&mut beam, self.contraction) {
            gw.contraction = c;
        }
        Ok(beam)
    }
}

fn require<T>(value: Option<T>, flag: &str, species: &str) -> anyhow::Result<T> {
    match value {
        Some(v) => Ok(v),
        None => usage(format!("{species} beams need --{flag}")),
    }
}

impl RunConfig {
    pub fn explicit_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut note = |set: bool, name: &'static str| {
            if set {
                out.push(name)
            }
        };
        note(self.species.is_some(), "species");
        note(self.l.is_some(), "l");
        note(self.w0_um.is_some(), "w0-um");
        note(self.lambda_nm.is_some(), "lambda-nm");
        note(self.b.is_some(), "b");
        note(self.gamma.is_some(), "gamma");
        note(self.w0_lambda.is_some(), "w0-lambda");
        note(self.omega_hz.is_some(), "omega-hz");
        note(self.superposition.is_some(), "superposition");
        out
    }

    pub fn beam(&self) -> anyhow::Result<ResolvedBeam> {
        if let Some(name) = &self.preset {
            let explicit = self.explicit_fields();
            if !explicit.is_empty() {
                return usage(format!(
                    "--preset cannot be combined with explicit parameters ({})",
                    explicit.join(", ")
                ));
            }
            let p = preset(name).map_err(|e| UsageError(e.to_string()))?;
            return Ok(ResolvedBeam {
                name: p.name.to_string(),
                spec: p.spec,
                contraction: self.contraction.map(Into::into),
            });
        }
        let Some(species) = self.species else {
            return usage("choose a beam with --preset or --species");
        };
        let l = require(self.l, "l", "all")?;
        let stray = |allowed: &[&str]| -> anyhow::Result<()> {
            let common = ["species", "l", "superposition"];
            let bad: Vec<&str> = self
                .explicit_fields()
                .into_iter()
                .filter(|f| !common.contains(f) && !allowed.contains(f))
                .collect();
            if bad.is_empty() {
                Ok(())
            } else {
                usage(format!(
                    "parameters not used by {species:?} beams: {}",
                    bad.join(", ")
                ))
            }
        };
        let params = match species {
            SpeciesArg::Photon => {
                stray(&["w0-um", "lambda-nm"])?;
                let w0 = require(self.w0_um, "w0-um", "photon")?;
                let lambda = self.lambda_nm.unwrap_or(800.0);
                BeamParams::Photon {
                    l,
                    w0_m: w0 * 1e-6,
                    wavelength_m: lambda * 1e-9,
                }
            }
            SpeciesArg::Electron => {
                stray(&["b", "gamma"])?;
                BeamParams::Electron {
                    l,
                    b: require(self.b, "b", "electron")?,
                    gamma: require(self.gamma, "gamma", "electron")?,
                }
            }
            SpeciesArg::Gw => {
                stray(&["w0-lambda", "omega-hz"])?;
                BeamParams::Gw {
                    l,
                    w0_lambda: require(self.w0_lambda, "w0-lambda", "gw")?,
                    omega_hz: self.omega_hz.unwrap_or(150.0),
                }
            }
        };
        if self.contraction.is_some() && species != SpeciesArg::Gw {
            return usage("--contraction only applies to gw beams");
        }
        let spec = BeamSpec {
            params,
            superposition: self.superposition.map(Into::into),
        };
        // build once so parameter errors surface as usage errors
        spec.build().map_err(|e| UsageError(e.to_string()))?;
        Ok(ResolvedBeam {
            name: format!("{}_l{}", Species::from(species), l),
            spec,
            contraction: self.contraction.map(Into::into),
        })
    }
}

/// Applies one sweep value to the parameters.
pub fn apply_sweep(params: BeamParams, param: SweepParam, value: f64) -> anyhow::Result<BeamParams> {
    Ok(match (param, params) {
        (SweepParam::L, p) => {
            if value.fract() != 0.0 || value.abs() > i32::MAX as f64 {
                return usage(format!("ℓ sweep values must be integers, got {value}"));
            }
            p.with_charge(value as i32)
        }
        (SweepParam::W0, BeamParams::Photon { l, wavelength_m, .. }) => BeamParams::Photon {
            l,
            w0_m: value * wavelength_m,
            wavelength_m,
        },
        (SweepParam::W0, BeamParams::Gw { l, omega_hz, .. }) => BeamParams::Gw {
            l,
            w0_lambda: value,
            omega_hz,
        },
        (SweepParam::B, BeamParams::Electron { l, gamma, .. }) => BeamParams::Electron { l, b: value, gamma },
        (SweepParam::Gamma, BeamParams::Electron { l, b, .. }) => BeamParams::Electron { l, b, gamma: value },
        (param, p) => {
            return usage(format!("cannot sweep {param:?} for {} beams", p.species()));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_excludes_explicit_parameters() {
        let cfg = RunConfig {
            preset: Some("fig1a".into()),
            l: Some(3),
            ..RunConfig::default()
        };
        assert!(cfg.beam().is_err());
    }

    #[test]
    fn photon_defaults_to_800_nm_single_charge() {
        let cfg = RunConfig {
            species: Some(SpeciesArg::Photon),
            l: Some(1),
            w0_um: Some(100.0),
            ..RunConfig::default()
        };
        let beam = cfg.beam().unwrap();
        assert_eq!(beam.spec.superposition, None);
        match beam.spec.params {
            BeamParams::Photon { wavelength_m, .. } => assert!((wavelength_m - 8e-7).abs() < 1e-20),
            _ => unreachable!(),
        }
    }

    #[test]
    fn stray_parameters_are_rejected() {
        let cfg = RunConfig {
            species: Some(SpeciesArg::Electron),
            l: Some(1),
            b: Some(10.0),
            gamma: Some(1.2),
            w0_um: Some(3.0),
            ..RunConfig::default()
        };
        assert!(cfg.beam().is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig {
            preset: Some("fig1a".into()),
            ..RunConfig::default()
        };
        let flags = BeamArgs {
            preset: Some("fig2b".into()),
            ..BeamArgs::default()
        };
        assert_eq!(flags.overlay(file).preset.as_deref(), Some("fig2b"));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"preset": "fig1a", "colour": 1}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"grid": {"kind": "polar", "size": 3}}"#).is_err());
    }

    #[test]
    fn sweeps_map_onto_parameters() {
        let p = preset("fig1a").unwrap().spec.params;
        match apply_sweep(p, SweepParam::W0, 50.0).unwrap() {
            BeamParams::Photon { w0_m, .. } => assert!((w0_m - 40e-6).abs() < 1e-15),
            _ => unreachable!(),
        }
        assert!(apply_sweep(p, SweepParam::B, 3.0).is_err());
        assert!(apply_sweep(p, SweepParam::L, 2.5).is_err());
    }
}
