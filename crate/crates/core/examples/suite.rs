//! Full identity suite with negative controls.

use vortexlab::validation::{run_suite, SuiteConfig};

fn main() -> vortexlab::Result<()> {
    let start = std::time::Instant::now();
    let report = run_suite(&SuiteConfig {
        negative_controls: true,
        ..SuiteConfig::default()
    })?;
    for c in report.checks.iter().chain(&report.controls) {
        println!(
            "{:<36} {:>12.3e} < {:<8.0e} {} {}",
            c.check,
            c.max_residual,
            c.threshold,
            c.passed,
            c.note.clone().unwrap_or_default()
        );
    }
    println!("{:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
