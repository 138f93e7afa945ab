//! Grid sampling and file formats.

use proptest::prelude::*;
use vortexlab::analysis::{analyze, ScanOptions};
use vortexlab::grid::{
    fmt_f64, read_csv, sample_beam, sample_grid, write_components_csv, write_csv, write_png, write_report,
    Colormap, GridSpec,
};
use vortexlab::presets::{preset, Beam};

fn rows_of(path: &std::path::Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

#[test]
fn two_by_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridSpec::square(1.0, 2);
    let values = [0.0, 1.0, 2.0, 3.0];
    let nodes = spec.axis_values();
    let g = sample_grid(
        |r, phi| {
            let (x, y) = (r * phi.cos(), r * phi.sin());
            let i = nodes.0.iter().position(|v| (v - x).abs() < 1e-9).unwrap();
            let j = nodes.1.iter().position(|v| (v - y).abs() < 1e-9).unwrap();
            Ok(values[j * 2 + i])
        },
        &spec,
    )
    .unwrap();
    let path = dir.path().join("g.csv");
    write_csv(&g, &path).unwrap();
    assert_eq!(g.peak, 3.0);
    let expected: Vec<String> = ["0,0.3333333333333333", "0.6666666666666666,1"]
        .map(String::from)
        .to_vec();
    assert_eq!(rows_of(&path), expected);
    let raw = read_csv(&path).unwrap().raw();
    assert_eq!(raw, values.to_vec());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_round_trip_is_bit_exact(seed in 0u64..1000, n1 in 2usize..6, n2 in 2usize..6) {
        let dir = tempfile::tempdir().unwrap();
        let spec = GridSpec::polar(0.5, 3.0, n1, n2);
        let g = sample_grid(|r, phi| Ok((r * 1.37 + phi + seed as f64).sin().powi(2) * 10f64.powi((seed % 40) as i32 - 20)), &spec).unwrap();
        let path = dir.path().join("g.csv");
        write_csv(&g, &path).unwrap();
        let back = read_csv(&path).unwrap();
        prop_assert_eq!(back.spec, g.spec);
        prop_assert_eq!(back.peak.to_bits(), g.peak.to_bits());
        for (a, b) in back.intensity.iter().zip(&g.intensity) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn formatting_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}

#[test]
fn single_charge_polar_rows_are_constant() {
    let beam = Beam::Photon(vortexlab::photon::PhotonBeam::new(15, 6.2e-6, 800e-9, None).unwrap());
    let spec = GridSpec::polar(0.5, 4.0, 16, 8).with_unit(beam.grid_unit());
    let g = sample_beam(&beam, &spec, false).unwrap();
    for row in g.rows() {
        assert!(row
            .iter()
            .all(|v| (v - row[0]).abs() <= 1e-12 * row[0].max(1e-300)));
    }
    assert_eq!(g.metadata["species"], "photon");
}

#[test]
fn cartesian_maximum_sits_on_the_ring() {
    let beam = preset("fig1a").unwrap().spec.build().unwrap();
    let rep = analyze(&beam, &ScanOptions::default()).unwrap();
    let r_max = rep.diagnostics.r_max_scaled / beam.grid_unit();
    let n = 512;
    let spec = GridSpec::square(2.0 * r_max, n).with_unit(beam.grid_unit());
    let g = sample_beam(&beam, &spec, false).unwrap();
    let (i, j) = g.argmax();
    let (xs, ys) = spec.axis_values();
    let cell = 4.0 * r_max / n as f64;
    let r = xs[i].hypot(ys[j]);
    assert!((r - r_max).abs() <= cell, "max at r = {r}, ring at {r_max}");
}

#[test]
fn png_levels() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GridSpec::square(1.0, 4);
    for (value, level) in [(0.0, 0u8), (1.0, 255u8)] {
        let g = sample_grid(|_, _| Ok(value), &spec).unwrap();
        let path = dir.path().join(format!("{value}.png"));
        write_png(&g, &path, Colormap::Gray).unwrap();
        let img = image::open(&path).unwrap().to_rgb8();
        assert_eq!(img.dimensions(), (4, 4));
        assert!(img.pixels().all(|p| p.0 == [level; 3]));
    }
}

#[test]
fn components_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let beam = preset("fig2b").unwrap().spec.build().unwrap();
    let spec = GridSpec::polar(0.1, 0.5, 4, 3).with_unit(beam.grid_unit());
    let g = sample_beam(&beam, &spec, true).unwrap();
    let path = dir.path().join("c.csv");
    write_components_csv(&g, &path).unwrap();
    let rows = rows_of(&path);
    assert!(rows[0].starts_with("i1,i2,psi1_re,psi1_im"));
    assert_eq!(rows.len(), 1 + 12);
}

#[test]
fn report_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let beam = preset("fig1b").unwrap().spec.build().unwrap();
    let mut rep = analyze(&beam, &ScanOptions::quick()).unwrap();
    assert!((rep.vis - 0.5).abs() < 0.03);
    rep.vis = 0.5;
    let path = dir.path().join("r.json");
    write_report(&rep, &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"vis\": 0.5"));
    let back: vortexlab::analysis::VisibilityReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn unwritable_path_is_an_error() {
    let g = sample_grid(|_, _| Ok(1.0), &GridSpec::square(1.0, 2)).unwrap();
    assert!(write_csv(&g, std::path::Path::new("/nonexistent/dir/g.csv")).is_err());
}

#[test]
fn output_is_independent_of_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let beam = preset("fig3b").unwrap().spec.build().unwrap();
    let spec = GridSpec::square(6.0, 24).with_unit(beam.grid_unit());
    let bytes: Vec<Vec<u8>> = [1, 3]
        .iter()
        .map(|&n| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
            let g = pool.install(|| sample_beam(&beam, &spec, false)).unwrap();
            let path = dir.path().join(format!("w{n}.csv"));
            write_csv(&g, &path).unwrap();
            std::fs::read(&path).unwrap()
        })
        .collect();
    assert_eq!(bytes[0], bytes[1]);
}
