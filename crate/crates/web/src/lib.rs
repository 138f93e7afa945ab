//! WebAssembly bindings for the browser demo.
//!
//! Beams are passed as JSON beam specs, e.g.
//! `{"params":{"species":"photon","l":15,"w0_m":6.2e-6,"wavelength_m":8e-7},"superposition":"cosine"}`.
//! Lengths given to and returned by the grid functions are in grid units:
//! waists for photons and gravitational waves, `1/q` for electrons.

use std::f64::consts::TAU;

use vortexlab::analysis::{analyze, find_r_max, IntensityField, ScanOptions, VisibilityReport};
use vortexlab::grid::{level, sample_beam, Colormap, GridSpec};
use vortexlab::presets::{presets, Beam, BeamSpec};
use wasm_bindgen::prelude::*;

/// Largest grid side accepted from the page.
pub const MAX_SIDE: usize = 512;

fn parse(spec_json: &str) -> Result<Beam, String> {
    let spec: BeamSpec = serde_json::from_str(spec_json).map_err(|e| format!("beam spec: {e}"))?;
    spec.build().map_err(|e| e.to_string())
}

/// All named parameter sets as a JSON array.
pub fn preset_list() -> String {
    serde_json::to_string(&presets()).expect("presets serialize")
}

/// Quick visibility analysis of the brightest ring.
pub fn visibility_report(spec_json: &str) -> Result<VisibilityReport, String> {
    let beam = parse(spec_json)?;
    analyze(&beam, &ScanOptions::quick()).map_err(|e| e.to_string())
}

/// Peak-normalized intensity on an `n × n` Cartesian grid of half-width
/// `half`, row-major with the first row at the most negative `y`.
pub fn intensity(spec_json: &str, n: usize, half: f64) -> Result<Vec<f32>, String> {
    if !(2..=MAX_SIDE).contains(&n) {
        return Err(format!("grid side must be in 2..={MAX_SIDE}, got {n}"));
    }
    if !(half > 0.0 && half.is_finite()) {
        return Err(format!("half-width must be positive, got {half}"));
    }
    let beam = parse(spec_json)?;
    let spec = GridSpec::square(half, n).with_unit(beam.grid_unit());
    let grid = sample_beam(&beam, &spec, false).map_err(|e| e.to_string())?;
    Ok(grid.intensity.iter().map(|&v| v as f32).collect())
}

/// RGBA pixels of [`intensity`] ready for `ImageData`, top row at `+y`.
pub fn rgba(values: &[f32], n: usize, colormap: &str) -> Result<Vec<u8>, String> {
    if values.len() != n * n {
        return Err(format!("expected {} values, got {}", n * n, values.len()));
    }
    let map: Colormap = colormap.parse().map_err(|e: vortexlab::Error| e.to_string())?;
    let mut out = Vec::with_capacity(4 * values.len());
    for row in values.chunks(n).rev() {
        for &v in row {
            let [r, g, b] = map.rgb(level(v as f64));
            out.extend_from_slice(&[r, g, b, 255]);
        }
    }
    Ok(out)
}

/// Ring radius in grid units and the peak-normalized intensity at
/// `samples` equally spaced angles on it.
pub fn ring(spec_json: &str, samples: usize) -> Result<(f64, Vec<f32>), String> {
    if !(8..=1 << 16).contains(&samples) {
        return Err(format!("sample count must be in 8..=65536, got {samples}"));
    }
    let beam = parse(spec_json)?;
    let opts = ScanOptions::quick();
    let r = match find_r_max(&beam, beam.charge(), beam.waist_hint(), &opts) {
        Ok(peak) => peak.r,
        Err(vortexlab::Error::AxialMaximum { .. }) => {
            analyze(&beam, &opts)
                .map_err(|e| e.to_string())?
                .diagnostics
                .r_max_scaled
        }
        Err(e) => return Err(e.to_string()),
    };
    let values = (0..samples)
        .map(|k| beam.intensity(r, TAU * k as f64 / samples as f64))
        .collect::<vortexlab::Result<Vec<f64>>>()
        .map_err(|e| e.to_string())?;
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let scale = if peak > 0.0 { 1.0 / peak } else { 0.0 };
    Ok((
        r / beam.grid_unit(),
        values.iter().map(|v| (v * scale) as f32).collect(),
    ))
}

#[wasm_bindgen(js_name = presets)]
pub fn presets_js() -> String {
    preset_list()
}

#[wasm_bindgen(js_name = visibility)]
pub fn visibility_js(spec_json: &str) -> Result<String, JsError> {
    let report = visibility_report(spec_json).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&report).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = intensityMap)]
pub fn intensity_js(spec_json: &str, n: usize, half: f64) -> Result<Vec<f32>, JsError> {
    intensity(spec_json, n, half).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = toRgba)]
pub fn rgba_js(values: &[f32], n: usize, colormap: &str) -> Result<Vec<u8>, JsError> {
    rgba(values, n, colormap).map_err(|e| JsError::new(&e))
}

/// `[radius, I_0, I_1, ...]`.
#[wasm_bindgen(js_name = ringProfile)]
pub fn ring_js(spec_json: &str, samples: usize) -> Result<Vec<f32>, JsError> {
    let (r, values) = ring(spec_json, samples).map_err(|e| JsError::new(&e))?;
    Ok(std::iter::once(r as f32).chain(values).collect())
}
