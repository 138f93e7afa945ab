//! End-to-end runs of the `vortexlab` binary.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vortexlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("VORTEXLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn field_writes_grid_image_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "field",
            "--preset",
            "fig1a",
            "--resolution",
            "64",
            "--quick",
            "--out",
            "o",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for ext in ["csv", "png", "json"] {
        assert!(
            dir.path().join("o").join(format!("fig1a.{ext}")).is_file(),
            "missing {ext}"
        );
    }
    let rep = json(&dir.path().join("o/fig1a.json"));
    assert!((rep["vis"].as_f64().unwrap() - 0.99).abs() < 0.005);
    let csv = std::fs::read_to_string(dir.path().join("o/fig1a.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("# species=photon")));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 64);
}

#[test]
fn electron_tight_preset_is_half_visible() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "field",
            "--preset",
            "fig2b",
            "--resolution",
            "16",
            "--components",
            "--out",
            ".",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json(&dir.path().join("fig2b.json"));
    assert!((rep["vis"].as_f64().unwrap() - 0.5).abs() < 0.01);
    assert!(dir.path().join("fig2b_components.csv").is_file());
}

#[test]
fn single_charge_ring_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "field",
            "--species",
            "photon",
            "--l",
            "1",
            "--w0-um",
            "100",
            "--lambda-nm",
            "800",
            "--resolution",
            "16",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json(&dir.path().join("photon_l1.json"));
    assert!(rep["vis"].as_f64().unwrap() < 1e-6);
}

#[test]
fn all_presets_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["visibility", "--all-presets", "--quick", "--out", "v"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let index = json(&dir.path().join("v/index.json"));
    let entries = index["presets"].as_array().unwrap();
    assert_eq!(entries.len(), 6);
    for e in entries {
        let (vis, target) = (e["vis"].as_f64().unwrap(), e["target_vis"].as_f64().unwrap());
        assert!((vis - target).abs() < 0.03, "{}: {vis} vs {target}", e["name"]);
        assert!(dir.path().join("v").join(e["file"].as_str().unwrap()).is_file());
    }
}

#[test]
fn sweep_csv_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "sweep",
            "--species",
            "photon",
            "--l",
            "15",
            "--w0-um",
            "100",
            "--superposition",
            "cos",
            "--param",
            "w0",
            "--values",
            "6.2,9,14,30,186.25",
            "--quick",
            "--out",
            ".",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("photon_l15_sweep_w0.csv")).unwrap();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("w0,r_max,vis,fringe_count"));
    let vis: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(vis.len(), 5);
    assert!(vis.windows(2).all(|w| w[0] < w[1]), "{vis:?}");
}

#[test]
fn scaling_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["scaling", "--out", "."], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&dir.path().join("scaling.json"))["passed"], true);
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["validate", "--points", "50"], dir.path())), 0);
    let out = run(
        &[
            "validate",
            "--points",
            "50",
            "--negative-controls",
            "--json",
            "r.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(json(&dir.path().join("r.json"))["controls_failed"], true);
    let strict = run(
        &["validate", "--points", "50", "--threshold", "dalembert=1e-30"],
        dir.path(),
    );
    assert_eq!(code(&strict), 1);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["field", "--preset", "fig1a", "--l", "3"],
        &["field", "--preset", "nope"],
        &["field", "--species", "electron", "--l", "2", "--w0-um", "10"],
        &["validate", "--threshold", "bogus=1"],
        &["validate", "--threshold", "dalembert"],
        &["sweep", "--preset", "fig1a"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(code(&run(args, dir.path())), 2, "{args:?}");
    }
    let threads = Command::new(env!("CARGO_BIN_EXE_vortexlab"))
        .args(["presets"])
        .env("VORTEXLAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 2);
}

#[test]
fn config_file_overlay_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"species": "electron", "l": 15, "b": 1500, "gamma": 1.00005, "superposition": "cos",
            "grid": {"resolution": 8}, "out": "cfg"}"#,
    )
    .unwrap();
    let out = run(&["field", "--config", "run.json", "--quick"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rep = json(&dir.path().join("cfg/electron_l15.json"));
    assert!((rep["vis"].as_f64().unwrap() - 0.99).abs() < 0.005);

    std::fs::write(dir.path().join("bad.json"), r#"{"preset": "fig1a", "waist": 3}"#).unwrap();
    assert_eq!(code(&run(&["field", "--config", "bad.json"], dir.path())), 2);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |o: &'static str| {
        [
            "field",
            "--preset",
            "fig2a",
            "--resolution",
            "24",
            "--quick",
            "--out",
            o,
        ]
    };
    assert_eq!(code(&run(&args("a"), dir.path())), 0);
    assert_eq!(code(&run(&args("b"), dir.path())), 0);
    for f in ["fig2a.csv", "fig2a.json", "fig2a.png"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}
