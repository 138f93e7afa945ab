//! Sampling fields on polar or Cartesian grids and writing them as CSV
//! matrices, PNG heatmaps and JSON reports.
//!
//! Grid coordinates are stored in grid units (the waist for photons and GWs,
//! `1/q` for electrons); `unit` converts them to the field's frame.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::presets::Beam;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridKind {
    /// Columns run over `φ ∈ [0, 2π)`, rows over `r ∈ [r_min, r_max]`.
    Polar { r_min: f64, r_max: f64 },
    /// Cell-centred; columns run over `x`, rows over `y`.
    Cartesian {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(flatten)]
    pub kind: GridKind,
    /// Samples along the first (column) and second (row) axis.
    pub resolution: [usize; 2],
    /// Time and axial position of the slice, in frame units.
    pub t: f64,
    pub z: f64,
    /// Frame length per grid unit.
    pub unit: f64,
}

impl GridSpec {
    pub fn polar(r_min: f64, r_max: f64, n_phi: usize, n_r: usize) -> Self {
        GridSpec {
            kind: GridKind::Polar { r_min, r_max },
            resolution: [n_phi, n_r],
            t: 0.0,
            z: 0.0,
            unit: 1.0,
        }
    }

    /// Square window `[-half, half]²` with `n × n` cells.
    pub fn square(half: f64, n: usize) -> Self {
        GridSpec {
            kind: GridKind::Cartesian {
                x_min: -half,
                x_max: half,
                y_min: -half,
                y_max: half,
            },
            resolution: [n, n],
            t: 0.0,
            z: 0.0,
            unit: 1.0,
        }
    }

    pub fn with_unit(mut self, unit: f64) -> Self {
        self.unit = unit;
        self
    }

    pub fn with_slice(mut self, t: f64, z: f64) -> Self {
        self.t = t;
        self.z = z;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.resolution.iter().any(|&n| n < 2) {
            return bad(format!(
                "grid resolution must be at least 2 per axis, got {:?}",
                self.resolution
            ));
        }
        if !(self.unit > 0.0 && self.unit.is_finite()) {
            return bad(format!("grid unit must be positive, got {}", self.unit));
        }
        if !(self.t.is_finite() && self.z.is_finite()) {
            return bad("slice coordinates must be finite".into());
        }
        match self.kind {
            GridKind::Polar { r_min, r_max } => {
                if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
                    return bad(format!(
                        "polar grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
                    ));
                }
            }
            GridKind::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => {
                if !(x_max > x_min
                    && y_max > y_min
                    && [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()))
                {
                    return bad("cartesian grid needs finite, increasing extents".into());
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.resolution[0] * self.resolution[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinate of column `i` and row `j` along their axes, in grid units.
    pub fn axis_values(&self) -> (Vec<f64>, Vec<f64>) {
        let [n1, n2] = self.resolution;
        let lin = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                .collect()
        };
        let cells = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
            (0..n)
                .map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64)
                .collect()
        };
        match self.kind {
            GridKind::Polar { r_min, r_max } => (
                (0..n1).map(|k| TAU * k as f64 / n1 as f64).collect(),
                lin(r_min, r_max, n2),
            ),
            GridKind::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => (cells(x_min, x_max, n1), cells(y_min, y_max, n2)),
        }
    }

    /// Polar position `(r, φ)` in frame units of every node, row-major.
    fn nodes(&self) -> Vec<(f64, f64)> {
        let (a1, a2) = self.axis_values();
        let mut out = Vec::with_capacity(self.len());
        for &v2 in &a2 {
            for &v1 in &a1 {
                out.push(match self.kind {
                    GridKind::Polar { .. } => (v2 * self.unit, v1),
                    GridKind::Cartesian { .. } => (v1.hypot(v2) * self.unit, v2.atan2(v1)),
                });
            }
        }
        out
    }

    fn describe(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut kv = |k: &str, v: String| out.push((k.to_string(), v));
        match self.kind {
            GridKind::Polar { r_min, r_max } => {
                kv("grid", "polar".into());
                kv("r_min", fmt_f64(r_min));
                kv("r_max", fmt_f64(r_max));
            }
            GridKind::Cartesian {
                x_min,
                x_max,
                y_min,
                y_max,
            } => {
                kv("grid", "cartesian".into());
                kv("x_min", fmt_f64(x_min));
                kv("x_max", fmt_f64(x_max));
                kv("y_min", fmt_f64(y_min));
                kv("y_max", fmt_f64(y_max));
            }
        }
        kv("n_axis1", self.resolution[0].to_string());
        kv("n_axis2", self.resolution[1].to_string());
        kv("t", fmt_f64(self.t));
        kv("z", fmt_f64(self.z));
        kv("unit", fmt_f64(self.unit));
        out
    }

    fn from_metadata(meta: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| {
            meta.get(k)
                .ok_or_else(|| Error::Parse(format!("missing header `{k}`")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?
                .parse()
                .map_err(|_| Error::Parse(format!("header `{k}` is not a number")))
        };
        let count = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| Error::Parse(format!("header `{k}` is not a count")))
        };
        let kind = match get("grid")?.as_str() {
            "polar" => GridKind::Polar {
                r_min: num("r_min")?,
                r_max: num("r_max")?,
            },
            "cartesian" => GridKind::Cartesian {
                x_min: num("x_min")?,
                x_max: num("x_max")?,
                y_min: num("y_min")?,
                y_max: num("y_max")?,
            },
            other => return Err(Error::Parse(format!("unknown grid kind `{other}`"))),
        };
        Ok(GridSpec {
            kind,
            resolution: [count("n_axis1")?, count("n_axis2")?],
            t: num("t")?,
            z: num("z")?,
            unit: num("unit")?,
        })
    }
}

/// One complex field component sampled on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentGrid {
    pub name: String,
    pub values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    /// Intensity divided by `peak`, row-major (row = second axis).
    pub intensity: Vec<f64>,
    /// Largest raw intensity on the grid.
    pub peak: f64,
    pub components: Option<Vec<ComponentGrid>>,
    pub metadata: BTreeMap<String, String>,
}

impl FieldGrid {
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.intensity.chunks(self.spec.resolution[0])
    }

    pub fn get(&self, i1: usize, i2: usize) -> f64 {
        self.intensity[i2 * self.spec.resolution[0] + i1]
    }

    /// Raw intensities, `intensity × peak`.
    pub fn raw(&self) -> Vec<f64> {
        self.intensity.iter().map(|v| v * self.peak).collect()
    }

    /// Column and row index of the brightest node.
    pub fn argmax(&self) -> (usize, usize) {
        let k = self
            .intensity
            .iter()
            .enumerate()
            .fold(0, |best, (k, &v)| if v > self.intensity[best] { k } else { best });
        (k % self.spec.resolution[0], k / self.spec.resolution[0])
    }

    pub fn with_metadata<I, K, V>(mut self, items: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        for (k, v) in items {
            self.metadata.insert(k.into(), v.into());
        }
        self
    }
}

fn assemble(spec: &GridSpec, raw: Vec<f64>, components: Option<Vec<ComponentGrid>>) -> FieldGrid {
    let peak = raw.iter().copied().fold(0.0, f64::max);
    let intensity = if peak > 0.0 {
        raw.iter().map(|v| v / peak).collect()
    } else {
        raw
    };
    let mut metadata: BTreeMap<String, String> = spec.describe().into_iter().collect();
    metadata.insert("peak".into(), fmt_f64(peak));
    FieldGrid {
        spec: *spec,
        intensity,
        peak,
        components,
        metadata,
    }
}

fn check_value(spec: &GridSpec, r: f64, phi: f64, v: f64) -> Result<f64> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::NonFinite {
            t: spec.t,
            r,
            phi,
            z: spec.z,
        });
    }
    Ok(v)
}

/// Evaluates `field(r, φ)` (frame units) at every node in parallel and
/// normalizes the result to unit peak.
pub fn sample_grid<F>(field: F, spec: &GridSpec) -> Result<FieldGrid>
where
    F: Fn(f64, f64) -> Result<f64> + Sync,
{
    spec.validate()?;
    let nodes = spec.nodes();
    let raw = par_map(nodes.len(), |k| {
        let (r, phi) = nodes[k];
        check_value(spec, r, phi, field(r, phi)?)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(assemble(spec, raw, None))
}

/// Like [`sample_grid`] but also keeps the complex components returned
/// alongside the intensity.
pub fn sample_grid_with_components<F>(field: F, names: &[&str], spec: &GridSpec) -> Result<FieldGrid>
where
    F: Fn(f64, f64) -> Result<(f64, Vec<Complex64>)> + Sync,
{
    spec.validate()?;
    let nodes = spec.nodes();
    let samples = par_map(nodes.len(), |k| {
        let (r, phi) = nodes[k];
        let (v, c) = field(r, phi)?;
        if c.len() != names.len() || c.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite {
                t: spec.t,
                r,
                phi,
                z: spec.z,
            });
        }
        Ok((check_value(spec, r, phi, v)?, c))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let mut components: Vec<ComponentGrid> = names
        .iter()
        .map(|n| ComponentGrid {
            name: n.to_string(),
            values: Vec::with_capacity(samples.len()),
        })
        .collect();
    let mut raw = Vec::with_capacity(samples.len());
    for (v, c) in samples {
        raw.push(v);
        for (slot, z) in components.iter_mut().zip(c) {
            slot.values.push(z);
        }
    }
    Ok(assemble(spec, raw, Some(components)))
}

/// Samples a beam on its own `t`, `z` slice taken from `spec`. Nodes that
/// land exactly on the axis are nudged off it by a billionth of a grid unit.
pub fn sample_beam(beam: &Beam, spec: &GridSpec, with_components: bool) -> Result<FieldGrid> {
    let beam = beam.clone().with_slice(spec.t, spec.z);
    let floor = 1e-9 * spec.unit;
    let grid = if with_components {
        sample_grid_with_components(
            |r, phi| beam.components(r.max(floor), phi),
            beam.component_names(),
            spec,
        )?
    } else {
        use crate::analysis::IntensityField;
        sample_grid(|r, phi| beam.intensity(r.max(floor), phi), spec)?
    };
    Ok(grid.with_metadata([("species", beam.species().to_string())]))
}

/// Shortest round-trip decimal; exponent form outside `[1e-4, 1e16)`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn header(meta: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    for (k, v) in meta {
        let _ = writeln!(s, "# {k}={}", v.replace('\n', " "));
    }
    s
}

/// Writes the normalized intensity: `# key=value` headers, then one row per
/// second-axis index.
pub fn write_csv(grid: &FieldGrid, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(header(&grid.metadata).as_bytes())?;
    for row in grid.rows() {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the complex components in long form, one node per line:
/// `i1,i2,<name>_re,<name>_im,...`.
pub fn write_components_csv(grid: &FieldGrid, path: &Path) -> Result<()> {
    let comps = grid
        .components
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("grid was sampled without components".into()))?;
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(header(&grid.metadata).as_bytes())?;
    let mut cols = vec!["i1".to_string(), "i2".to_string()];
    for c in comps {
        cols.push(format!("{}_re", c.name));
        cols.push(format!("{}_im", c.name));
    }
    writeln!(w, "{}", cols.join(","))?;
    let n1 = grid.spec.resolution[0];
    for k in 0..grid.intensity.len() {
        let mut line = format!("{},{}", k % n1, k / n1);
        for c in comps {
            let z = c.values[k];
            let _ = write!(line, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a file written by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<FieldGrid> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut metadata = BTreeMap::new();
    let mut intensity = Vec::new();
    let mut widths = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if let Some(h) = line.strip_prefix("# ") {
            let (k, v) = h
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("header without `=`: {line}")))?;
            metadata.insert(k.to_string(), v.to_string());
        } else if !line.trim().is_empty() {
            let row = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse(format!("{e} in row `{line}`")))?;
            widths.push(row.len());
            intensity.extend(row);
        }
    }
    let spec = GridSpec::from_metadata(&metadata)?;
    let [n1, n2] = spec.resolution;
    if widths.len() != n2 || widths.iter().any(|&w| w != n1) {
        return Err(Error::Parse(format!(
            "expected {n2} rows of {n1} values, found {} rows",
            widths.len()
        )));
    }
    let peak = metadata
        .get("peak")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse("missing or malformed `peak` header".into()))?;
    Ok(FieldGrid {
        spec,
        intensity,
        peak,
        components: None,
        metadata,
    })
}

/// Colour maps for PNG export.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colormap {
    #[default]
    Gray,
    Hot,
}

impl std::str::FromStr for Colormap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gray" | "grey" => Ok(Colormap::Gray),
            "hot" => Ok(Colormap::Hot),
            _ => Err(Error::InvalidParameter(format!(
                "unknown colormap `{s}` (gray, hot)"
            ))),
        }
    }
}

impl Colormap {
    /// RGB for a level in `0..=255`.
    pub fn rgb(self, level: u8) -> [u8; 3] {
        match self {
            Colormap::Gray => [level; 3],
            Colormap::Hot => {
                let x = level as f64 / 255.0;
                let ramp = |lo: f64| (((x - lo) * 3.0).clamp(0.0, 1.0) * 255.0).round() as u8;
                [ramp(0.0), ramp(1.0 / 3.0), ramp(2.0 / 3.0)]
            }
        }
    }
}

/// Maps `[0, peak]` linearly onto `0..=255`.
pub fn level(normalized: f64) -> u8 {
    (normalized.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// 8-bit RGB raster, one pixel per node. Cartesian grids are flipped so
/// that `y` grows upwards; polar grids put `r` down the rows.
#[cfg(feature = "export")]
pub fn render(grid: &FieldGrid, colormap: Colormap) -> image::RgbImage {
    let [n1, n2] = grid.spec.resolution;
    let flip = matches!(grid.spec.kind, GridKind::Cartesian { .. });
    image::RgbImage::from_fn(n1 as u32, n2 as u32, |x, y| {
        let row = if flip { n2 - 1 - y as usize } else { y as usize };
        image::Rgb(colormap.rgb(level(grid.get(x as usize, row))))
    })
}

#[cfg(feature = "export")]
pub fn write_png(grid: &FieldGrid, path: &Path, colormap: Colormap) -> Result<()> {
    render(grid, colormap).save_with_format(path, image::ImageFormat::Png)?;
    Ok(())
}

/// Pretty-printed JSON of any report.
pub fn write_report<T: Serialize + ?Sized>(report: &T, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
