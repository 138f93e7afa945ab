//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use vortexlab::analysis::{
    analyze, azimuthal_extrema, find_r_max, fringe_spacing, paraxial_ring_radius, scaling_fit,
    ScalarIntensity, ScanOptions, VisibilityReport,
};
use vortexlab::potentials::{ParaxialLg, Superposition, Weighting};
use vortexlab::presets::{preset, presets, BeamParams, BeamSpec};
use vortexlab::validation::{run_suite, SuiteConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn run_preset(name: &str) -> Result<(VisibilityReport, f64), String> {
    let beam = preset(name)
        .and_then(|p| p.spec.build())
        .map_err(|e| e.to_string())?;
    let start = Instant::now();
    let report = analyze(&beam, &ScanOptions::default()).map_err(|e| e.to_string())?;
    Ok((report, start.elapsed().as_secs_f64()))
}

fn figure_pair(a: &str, b: &str, runtime_limit: f64, need_fringes: bool) -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, target, tol) in [(a, 0.99, 0.02), (b, 0.50, 0.03)] {
        match run_preset(name) {
            Ok((rep, secs)) => {
                let ok_vis = (rep.vis - target).abs() <= tol;
                let ok_time = secs < runtime_limit;
                let ok_fringes = !need_fringes || rep.fringe_count == 30;
                passed &= ok_vis && ok_time && ok_fringes;
                parts.push(format!(
                    "{name} vis {:.4} (target {target} ± {tol}), {} fringes, {secs:.1} s (< {runtime_limit} s)",
                    rep.vis, rep.fringe_count
                ));
            }
            Err(e) => {
                passed = false;
                parts.push(format!("{name} error: {e}"));
            }
        }
    }
    outcome(passed, parts.join("; "))
}

fn paraxial_pair(l: i32, w0: f64) -> ScalarIntensity<Superposition<ParaxialLg>> {
    let lg = ParaxialLg::new(0, l, w0, 1.0).expect("valid mode");
    ScalarIntensity::pair(Superposition::pair(&lg, Weighting::Cosine), l.unsigned_abs(), w0)
}

fn scaling_law() -> Outcome {
    let w0 = 100.0;
    let mut pairs = Vec::new();
    let mut worst: f64 = 0.0;
    for l in [5u32, 10, 20, 40] {
        let lg = ParaxialLg::new(0, l as i32, w0, 1.0).expect("valid mode");
        let field = ScalarIntensity::single(lg, l, w0);
        match find_r_max(&field, l, w0, &ScanOptions::default()) {
            Ok(m) => {
                worst = worst.max((m.r / paraxial_ring_radius(l, w0) - 1.0).abs());
                pairs.push((l as f64, m.r));
            }
            Err(e) => return outcome(false, format!("ℓ = {l}: {e}")),
        }
    }
    match scaling_fit(&pairs) {
        Ok(slope) => outcome(
            worst < 5e-3 && (slope - 0.5).abs() <= 0.02,
            format!("max |r_max/(w0√(ℓ/2)) − 1| = {worst:.2e} (< 5e-3), exponent {slope:.5} (0.50 ± 0.02)"),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn fringe_spacing_check() -> Outcome {
    let w0 = 100.0;
    let mut worst: f64 = 0.0;
    for l in [5u32, 15] {
        let field = paraxial_pair(l as i32, w0);
        let opts = ScanOptions::default();
        let ring = find_r_max(&field, l, w0, &opts)
            .and_then(|m| Ok((m.r, azimuthal_extrema(&field, m.r, l, &opts)?)));
        match ring {
            Ok((r, ext)) if ext.maxima.len() >= 2 => {
                let n = ext.maxima.len();
                for k in 0..n {
                    let next = if k + 1 < n {
                        ext.maxima[k + 1]
                    } else {
                        ext.maxima[0] + std::f64::consts::TAU
                    };
                    let arc = r * (next - ext.maxima[k]);
                    worst = worst.max((arc / fringe_spacing(l, w0) - 1.0).abs());
                }
            }
            Ok((_, ext)) => return outcome(false, format!("ℓ = {l}: only {} maxima", ext.maxima.len())),
            Err(e) => return outcome(false, format!("ℓ = {l}: {e}")),
        }
    }
    outcome(
        worst < 0.01,
        format!("max relative deviation of arc spacing from πw0/√(2ℓ): {worst:.2e} (< 1e-2)"),
    )
}

fn property_suite() -> Outcome {
    let config = SuiteConfig {
        negative_controls: true,
        ..SuiteConfig::default()
    };
    match run_suite(&config) {
        Ok(rep) => {
            let mut failing: Vec<String> = rep
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.check.clone())
                .collect();
            failing.extend(
                rep.controls
                    .iter()
                    .filter(|c| c.passed)
                    .map(|c| format!("{} (control passed)", c.check)),
            );
            let worst: Vec<String> = rep
                .checks
                .iter()
                .map(|c| format!("{} {:.1e}", c.check, c.max_residual))
                .collect();
            outcome(
                rep.all_passed && rep.controls_failed && rep.controls.len() == 4,
                if failing.is_empty() {
                    format!(
                        "{}; {} controls failed as designed",
                        worst.join(", "),
                        rep.controls.len()
                    )
                } else {
                    format!("failing: {}", failing.join(", "))
                },
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn sweep(label: &str, specs: Vec<BeamSpec>) -> (bool, String) {
    let mut vis = Vec::new();
    for spec in &specs {
        match spec.build().and_then(|b| analyze(&b, &ScanOptions::default())) {
            Ok(r) => vis.push(r.vis),
            Err(e) => return (false, format!("{label}: {e}")),
        }
    }
    let strict = vis.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = vis.iter().map(|v| format!("{v:.4}")).collect();
    (
        strict && vis.len() >= 5,
        format!("{label} [{}]", shown.join(" > ")),
    )
}

fn monotonicity() -> Outcome {
    let pair = Some(Weighting::Cosine);
    let photon = [186.25, 100.0, 50.0, 20.0, 7.75]
        .iter()
        .map(|&w| BeamSpec {
            params: BeamParams::Photon {
                l: 15,
                w0_m: w * 800e-9,
                wavelength_m: 800e-9,
            },
            superposition: pair,
        })
        .collect();
    let electron = [1500.0, 800.0, 400.0, 250.0, 142.1]
        .iter()
        .map(|&b| BeamSpec {
            params: BeamParams::Electron { l: 15, b, gamma: 1.9 },
            superposition: pair,
        })
        .collect();
    let gw = [63.1, 40.0, 20.0, 12.0, 7.41]
        .iter()
        .map(|&w| BeamSpec {
            params: BeamParams::Gw {
                l: 15,
                w0_lambda: w,
                omega_hz: 150.0,
            },
            superposition: pair,
        })
        .collect();
    let results = [
        sweep("photon w0/λ ↓", photon),
        sweep("electron b ↓ (γ = 1.9)", electron),
        sweep("GW w0/λ ↓", gw),
    ];
    outcome(
        results.iter().all(|r| r.0),
        results.iter().map(|r| r.1.clone()).collect::<Vec<_>>().join("; "),
    )
}

fn exclusions() -> Outcome {
    let charges: Vec<i32> = presets().iter().map(|p| p.spec.params.charge()).collect();
    outcome(
        charges.iter().all(|&l| l.abs() < 300),
        format!(
            "entanglement (ℓ = 300, 10 000) and tight-focusing experiments are out of scope; preset charges {charges:?}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("photon figures", || figure_pair("fig1a", "fig1b", 30.0, false)),
        ("electron figures", || figure_pair("fig2a", "fig2b", 30.0, false)),
        ("gravitational-wave figures", || {
            figure_pair("fig3a", "fig3b", 60.0, true)
        }),
        ("paraxial scaling law", scaling_law),
        ("fringe spacing", fringe_spacing_check),
        ("property suite", property_suite),
        ("visibility monotonicity", monotonicity),
        ("excluded experiments", exclusions),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.passed {
            failures += 1;
        }
        println!(
            "criterion {} {}: {} ({})",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            name,
            o.detail
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
