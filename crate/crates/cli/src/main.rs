//! `vortexlab`: exact vortex beams, fringe visibility and identity checks
//! from the command line.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vortexlab::grid::Colormap;
use vortexlab::validation::{SuiteConfig, Thresholds};

use crate::config::{usage, BeamArgs, GridArg, SweepParam, UsageError};

#[derive(Debug, Parser)]
#[command(
    name = "vortexlab",
    version,
    about = "Exact non-paraxial vortex beams for light, electrons and gravitational waves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a beam on a grid and write CSV, PNG and a JSON visibility report.
    Field {
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long, value_enum)]
        grid: Option<GridArg>,
        /// Samples per axis [default: 256].
        #[arg(long)]
        resolution: Option<usize>,
        /// Half-width (Cartesian) or outer radius (polar) in grid units:
        /// waists for photons and GWs, 1/q for electrons [default: 2·r_max].
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value = "gray")]
        colormap: Colormap,
        /// Also write the complex field components.
        #[arg(long)]
        components: bool,
        /// Coarser ring search.
        #[arg(long)]
        quick: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Ring radius and fringe visibility of a beam, or of every preset.
    Visibility {
        #[command(flatten)]
        beam: BeamArgs,
        /// Analyse all presets, writing one report each plus index.json.
        #[arg(long)]
        all_presets: bool,
        #[arg(long)]
        quick: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Visibility along a parameter sweep.
    Sweep {
        #[command(flatten)]
        beam: BeamArgs,
        /// `w0` is the waist in wavelengths (photon, gw).
        #[arg(long, value_enum)]
        param: Option<SweepParam>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Option<Vec<f64>>,
        #[arg(long)]
        quick: bool,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Ring radius of paraxial Laguerre-Gauss modes against w0·√(ℓ/2).
    Scaling {
        #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "5,10,20,40")]
        charges: Vec<u32>,
        /// Waist in wavelengths.
        #[arg(long = "w0-lambda", default_value_t = 100.0)]
        w0_lambda: f64,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run the identity checks; exit status 1 if any fails.
    Validate {
        /// Also run the controls that are designed to fail.
        #[arg(long)]
        negative_controls: bool,
        /// Override a pass threshold, e.g. `dalembert=1e-8`.
        #[arg(long = "threshold", value_name = "NAME=VALUE")]
        thresholds: Vec<String>,
        /// Random points per check.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the full report as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// List the named parameter sets.
    Presets {
        #[arg(long)]
        json: bool,
    },
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("VORTEXLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return usage(format!(
                "VORTEXLAB_THREADS must be a positive integer, got `{raw}`"
            ))
        }
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn suite_config(
    negative_controls: bool,
    thresholds: &[String],
    points: Option<usize>,
    seed: Option<u64>,
) -> anyhow::Result<SuiteConfig> {
    let mut th = Thresholds::default();
    for t in thresholds {
        let Some((name, value)) = t.split_once('=') else {
            return usage(format!("threshold `{t}` is not NAME=VALUE"));
        };
        let value: f64 = value
            .parse()
            .map_err(|_| UsageError(format!("threshold value `{value}` is not a number")))?;
        th.set(name.trim(), value)
            .map_err(|e| UsageError(e.to_string()))?;
    }
    let defaults = SuiteConfig::default();
    Ok(SuiteConfig {
        thresholds: th,
        points: points.unwrap_or(defaults.points),
        seed: seed.unwrap_or(defaults.seed),
        negative_controls,
        ..defaults
    })
}

/// `Ok(false)` means a check failed.
fn run(cli: Cli) -> anyhow::Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Field {
            beam,
            grid,
            resolution,
            extent,
            colormap,
            components,
            quick,
            out,
        } => commands::field(commands::FieldOpts {
            beam,
            grid,
            resolution,
            extent,
            colormap,
            components,
            quick,
            out,
        })
        .map(|_| true),
        Command::Visibility {
            beam,
            all_presets,
            quick,
            out,
        } => commands::visibility(beam, all_presets, quick, out).map(|_| true),
        Command::Sweep {
            beam,
            param,
            values,
            quick,
            out,
        } => commands::sweep(beam, param, values, quick, out).map(|_| true),
        Command::Scaling {
            charges,
            w0_lambda,
            out,
        } => commands::scaling(&charges, w0_lambda, out),
        Command::Validate {
            negative_controls,
            thresholds,
            points,
            seed,
            json,
        } => commands::validate(
            suite_config(negative_controls, &thresholds, points, seed)?,
            json.as_deref(),
        ),
        Command::Presets { json } => commands::list_presets(json).map(|_| true),
    }
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.is::<UsageError>()
            || matches!(
                e.downcast_ref::<vortexlab::Error>(),
                Some(vortexlab::Error::InvalidParameter(_) | vortexlab::Error::UnknownPreset { .. })
            )
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
