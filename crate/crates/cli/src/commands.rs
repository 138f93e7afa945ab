//! The subcommands.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use vortexlab::analysis::{
    analyze, find_r_max, paraxial_ring_radius, scaling_fit, IntensityField, ScalarIntensity, ScanOptions,
    VisibilityReport,
};
use vortexlab::grid::{
    fmt_f64, sample_beam, write_components_csv, write_csv, write_png, write_report, Colormap, GridSpec,
};
use vortexlab::potentials::ParaxialLg;
use vortexlab::presets::{presets, BeamSpec};
use vortexlab::validation::{run_suite, ResidualReport, SuiteConfig};

use crate::config::{apply_sweep, usage, BeamArgs, GridArg, ResolvedBeam, RunConfig, SweepParam};

fn scan_options(quick: bool) -> ScanOptions {
    if quick {
        ScanOptions::quick()
    } else {
        ScanOptions::default()
    }
}

fn out_dir(cfg: &RunConfig, flag: &Option<PathBuf>) -> anyhow::Result<PathBuf> {
    let dir = flag
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir)
}

fn analyze_beam(beam: &ResolvedBeam, quick: bool) -> anyhow::Result<VisibilityReport> {
    let built = beam.build()?;
    analyze(&built, &scan_options(quick)).with_context(|| format!("analysing {}", beam.name))
}

pub struct FieldOpts {
    pub beam: BeamArgs,
    pub grid: Option<GridArg>,
    pub resolution: Option<usize>,
    pub extent: Option<f64>,
    pub colormap: Colormap,
    pub components: bool,
    pub quick: bool,
    pub out: Option<PathBuf>,
}

pub fn field(opts: FieldOpts) -> anyhow::Result<()> {
    let cfg = opts.beam.resolve()?;
    let resolved = cfg.beam()?;
    let beam = resolved.build()?;
    let report = analyze_beam(&resolved, opts.quick)?;

    let unit = beam.grid_unit();
    let ring = report.diagnostics.r_max_scaled / unit;
    let extent = opts.extent.or(cfg.grid.extent).unwrap_or(2.0 * ring);
    let resolution = opts.resolution.or(cfg.grid.resolution).unwrap_or(256);
    if !(extent > 0.0 && extent.is_finite()) {
        return usage(format!("grid extent must be positive, got {extent}"));
    }
    if resolution < 2 {
        return usage(format!("grid resolution must be at least 2, got {resolution}"));
    }
    let spec = match opts.grid.or(cfg.grid.kind).unwrap_or(GridArg::Cartesian) {
        GridArg::Cartesian => GridSpec::square(extent, resolution),
        GridArg::Polar => GridSpec::polar(extent / resolution as f64, extent, resolution, resolution),
    }
    .with_unit(unit);

    let mut meta = resolved.spec.params.describe();
    meta.push(("name".into(), resolved.name.clone()));
    meta.push(("vis".into(), fmt_f64(report.vis)));
    meta.push(("r_max_m".into(), fmt_f64(report.r_max)));
    meta.push(("grid_unit_m".into(), fmt_f64(unit * beam.length_unit())));
    let grid = sample_beam(&beam, &spec, opts.components)?.with_metadata(meta);

    let dir = out_dir(&cfg, &opts.out)?;
    let stem = dir.join(&resolved.name);
    let csv = stem.with_extension("csv");
    let png = stem.with_extension("png");
    let json = stem.with_extension("json");
    write_csv(&grid, &csv)?;
    write_png(&grid, &png, opts.colormap)?;
    write_report(&report, &json)?;
    let mut written = vec![csv, png, json];
    if opts.components {
        let path = dir.join(format!("{}_components.csv", resolved.name));
        write_components_csv(&grid, &path)?;
        written.push(path);
    }
    println!(
        "{}: vis = {:.4}, r_max = {:.6e} m, {} fringes",
        resolved.name, report.vis, report.r_max, report.fringe_count
    );
    for w in written {
        println!("wrote {}", w.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct IndexEntry {
    name: String,
    file: String,
    vis: f64,
    target_vis: f64,
    r_max: f64,
    fringe_count: u32,
}

pub fn visibility(
    beam: BeamArgs,
    all_presets: bool,
    quick: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    if !all_presets {
        let cfg = beam.resolve()?;
        let resolved = cfg.beam()?;
        let report = analyze_beam(&resolved, quick)?;
        if out.is_some() || cfg.out.is_some() {
            let path = out_dir(&cfg, &out)?.join(format!("{}.json", resolved.name));
            write_report(&report, &path)?;
            eprintln!("wrote {}", path.display());
        }
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    let cfg = beam.resolve()?;
    if cfg.preset.is_some() || !cfg.explicit_fields().is_empty() {
        return usage("--all-presets cannot be combined with beam parameters");
    }
    let dir = out_dir(&cfg, &out)?;
    let mut index = Vec::new();
    for p in presets() {
        let resolved = ResolvedBeam {
            name: p.name.to_string(),
            spec: p.spec,
            contraction: cfg.contraction.map(Into::into),
        };
        let report = analyze_beam(&resolved, quick)?;
        let file = format!("{}.json", p.name);
        write_report(&report, &dir.join(&file))?;
        println!(
            "{:<6} vis = {:.4} (expected ≈ {}), r_max = {:.6e} m, {} fringes",
            p.name, report.vis, p.target_vis, report.r_max, report.fringe_count
        );
        index.push(IndexEntry {
            name: p.name.to_string(),
            file,
            vis: report.vis,
            target_vis: p.target_vis,
            r_max: report.r_max,
            fringe_count: report.fringe_count,
        });
    }
    write_report(&serde_json::json!({ "presets": index }), &dir.join("index.json"))?;
    println!("wrote {}", dir.join("index.json").display());
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    value: f64,
    r_max: f64,
    r_max_scaled: f64,
    vis: f64,
    fringe_count: u32,
    file: String,
}

pub fn sweep(
    beam: BeamArgs,
    param: Option<SweepParam>,
    values: Option<Vec<f64>>,
    quick: bool,
    out: Option<PathBuf>,
) -> anyhow::Result<()> {
    let cfg = beam.resolve()?;
    let base = cfg.beam()?;
    let Some(param) = param.or(cfg.sweep.param) else {
        return usage("sweep needs --param");
    };
    let values = values.or_else(|| cfg.sweep.values.clone()).unwrap_or_default();
    if values.len() < 2 {
        return usage("sweep needs at least two --values");
    }
    let dir = out_dir(&cfg, &out)?;
    let label = format!("{:?}", param).to_lowercase();
    let mut rows = Vec::new();
    for &v in &values {
        let spec = BeamSpec {
            params: apply_sweep(base.spec.params, param, v)?,
            ..base.spec
        };
        let point = ResolvedBeam {
            name: format!("{}_{label}_{}", base.name, fmt_f64(v)),
            spec,
            contraction: base.contraction,
        };
        point.build()?;
        let report = analyze_beam(&point, quick)?;
        let file = format!("{}.json", point.name);
        write_report(&report, &dir.join(&file))?;
        println!(
            "{label} = {v}: vis = {:.4}, r_max = {:.6e} m",
            report.vis, report.r_max
        );
        rows.push(SweepRow {
            value: v,
            r_max: report.r_max,
            r_max_scaled: report.diagnostics.r_max_scaled,
            vis: report.vis,
            fringe_count: report.fringe_count,
            file,
        });
    }
    let stem = format!("{}_sweep_{label}", base.name);
    let mut csv = String::new();
    for (k, v) in base.spec.params.describe() {
        csv.push_str(&format!("# {k}={v}\n"));
    }
    csv.push_str(&format!("# param={label}\n{label},r_max,vis,fringe_count\n"));
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.value),
            fmt_f64(r.r_max),
            fmt_f64(r.vis),
            r.fringe_count
        ));
    }
    let csv_path = dir.join(format!("{stem}.csv"));
    std::fs::write(&csv_path, csv)?;
    let index_path = dir.join(format!("{stem}.json"));
    write_report(
        &serde_json::json!({
            "beam": base.name,
            "param": label,
            "csv": format!("{stem}.csv"),
            "rows": rows,
        }),
        &index_path,
    )?;
    println!("wrote {}\nwrote {}", csv_path.display(), index_path.display());
    Ok(())
}

#[derive(Serialize)]
struct ScalingRow {
    l: u32,
    r_max: f64,
    paraxial: f64,
    relative_deviation: f64,
}

/// Ring radius of single paraxial Laguerre-Gauss modes against `w0√(ℓ/2)`.
/// Returns whether the deviation and fitted exponent are within tolerance.
pub fn scaling(charges: &[u32], w0: f64, out: Option<PathBuf>) -> anyhow::Result<bool> {
    if charges.len() < 4 {
        return usage("scaling needs at least four charges");
    }
    if w0.is_nan() || w0 <= 0.0 {
        return usage("--w0-lambda must be positive");
    }
    let mut rows = Vec::new();
    println!(
        "{:>5} {:>14} {:>14} {:>12}",
        "l", "r_max/λ", "w0√(ℓ/2)/λ", "deviation"
    );
    for &l in charges {
        if l == 0 {
            return usage("charges must be positive");
        }
        let lg = ParaxialLg::new(0, l as i32, w0, 1.0)?;
        let field = ScalarIntensity::single(lg, l, w0);
        let peak = find_r_max(&field, l, w0, &ScanOptions::default())?;
        let paraxial = paraxial_ring_radius(l, w0);
        let dev = peak.r / paraxial - 1.0;
        println!("{l:>5} {:>14.6} {:>14.6} {:>12.3e}", peak.r, paraxial, dev);
        rows.push(ScalingRow {
            l,
            r_max: peak.r,
            paraxial,
            relative_deviation: dev,
        });
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.l as f64, r.r_max)).collect();
    let exponent = scaling_fit(&pairs).map_err(|e| crate::config::UsageError(e.to_string()))?;
    let worst = rows
        .iter()
        .map(|r| r.relative_deviation.abs())
        .fold(0.0, f64::max);
    let ok = worst < 5e-3 && (exponent - 0.5).abs() <= 0.02;
    println!(
        "fitted exponent {exponent:.5}, max deviation {worst:.3e}: {}",
        if ok { "ok" } else { "FAILED" }
    );
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("scaling.json");
        write_report(
            &serde_json::json!({ "w0_lambda": w0, "exponent": exponent, "passed": ok, "rows": rows }),
            &path,
        )?;
        println!("wrote {}", path.display());
    }
    Ok(ok)
}

fn print_table(title: &str, reports: &[ResidualReport], expect_fail: bool) {
    println!("{title}");
    for r in reports {
        let verdict = match (r.passed, expect_fail) {
            (true, false) => "pass",
            (false, false) => "FAIL",
            (false, true) => "fails as expected",
            (true, true) => "UNEXPECTED PASS",
        };
        println!(
            "  {:<34} {:>11.3e} < {:<9.1e} {verdict}{}",
            r.check,
            r.max_residual,
            r.threshold,
            r.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
}

/// Runs the identity suite; returns whether every positive check passed and
/// every requested control failed.
pub fn validate(config: SuiteConfig, json: Option<&Path>) -> anyhow::Result<bool> {
    let report = run_suite(&config)?;
    print_table("checks", &report.checks, false);
    if config.negative_controls {
        print_table("negative controls", &report.controls, true);
    }
    if let Some(path) = json {
        write_report(&report, path)?;
        println!("wrote {}", path.display());
    }
    Ok(report.all_passed && report.controls_failed)
}

pub fn list_presets(json: bool) -> anyhow::Result<()> {
    let all = presets();
    if json {
        println!("{}", serde_json::to_string_pretty(&all)?);
        return Ok(());
    }
    for p in all {
        println!("{:<6} {}", p.name, p.description);
    }
    Ok(())
}
