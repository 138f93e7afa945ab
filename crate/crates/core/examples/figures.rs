//! Visibility of every named preset.

use std::time::Instant;

use vortexlab::analysis::{analyze, ScanOptions};
use vortexlab::presets::presets;

fn main() -> vortexlab::Result<()> {
    for p in presets() {
        let beam = p.spec.build()?;
        let start = Instant::now();
        let report = analyze(&beam, &ScanOptions::default())?;
        println!(
            "{}: vis = {:.4} (target {}), fringes = {}, r_max = {:.4} units, {:.1} s",
            p.name,
            report.vis,
            p.target_vis,
            report.fringe_count,
            report.diagnostics.r_max_scaled,
            start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
