//! Identity checks that tie the fields to their governing equations, each
//! with a negative control that must fail.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::electron::dirac_spinor;
use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::gw::curvature;
use crate::jet::fd::first_derivative;
use crate::jet::operator::{apply_operator, Atom, DiffOpSpec};
use crate::jet::series::Var;
use crate::jet::{evaluate_jet, Coords, FnPotential, Potential, Series, SpacetimePoint};
use crate::photon::{rs_vector, RsVector};
use crate::potentials::{
    ElectronPotential, ParaxialLg, PhotonPotential, Polarization, Superposition, Weighting,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Outcome of one check over a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub points: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Points left out because the normalization was negligible there.
    pub skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResidualReport {
    pub fn new(check: &str, points: impl Into<String>, max_residual: f64, threshold: f64) -> Self {
        ResidualReport {
            check: check.to_string(),
            points: points.into(),
            max_residual,
            threshold,
            passed: max_residual < threshold,
            skipped: 0,
            note: None,
        }
    }

    fn with_skipped(mut self, skipped: usize) -> Self {
        self.skipped = skipped;
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Re-judges the residual against another threshold.
    pub fn judged(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.passed = self.max_residual < threshold;
        self
    }
}

/// Pass thresholds, by check name.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    pub dalembert: f64,
    pub divergence: f64,
    pub evolution: f64,
    pub trace: f64,
    pub spinor: f64,
    pub propagation_invariance: f64,
    pub paraxial: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            dalembert: 1e-6,
            divergence: 1e-8,
            evolution: 1e-5,
            trace: 1e-12,
            spinor: 1e-300,
            propagation_invariance: 1e-8,
            paraxial: 1e-2,
        }
    }
}

impl Thresholds {
    pub const NAMES: [&'static str; 7] = [
        "dalembert",
        "divergence",
        "evolution",
        "trace",
        "spinor",
        "propagation-invariance",
        "paraxial",
    ];

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if value.is_nan() || value <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "threshold for {name} must be positive"
            )));
        }
        let slot = match name.replace('_', "-").as_str() {
            "dalembert" => &mut self.dalembert,
            "divergence" => &mut self.divergence,
            "evolution" => &mut self.evolution,
            "trace" => &mut self.trace,
            "spinor" => &mut self.spinor,
            "propagation-invariance" => &mut self.propagation_invariance,
            "paraxial" => &mut self.paraxial,
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown threshold `{name}`; valid: {}",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Points with a short description of where they were drawn.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub description: String,
    pub points: Vec<SpacetimePoint>,
}

impl PointSet {
    /// `n` uniform points in `r ∈ r_range`, `φ ∈ [0, 2π)`, `t ∈ t_range`,
    /// `z ∈ z_range`, reproducible from `seed`.
    pub fn random(
        n: usize,
        seed: u64,
        r_range: (f64, f64),
        t_range: (f64, f64),
        z_range: (f64, f64),
    ) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |(lo, hi): (f64, f64)| if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let points = (0..n)
            .map(|_| {
                let r = draw(r_range);
                let phi = draw((0.0, std::f64::consts::TAU));
                let t = draw(t_range);
                let z = draw(z_range);
                SpacetimePoint::new(t, r, phi, z)
            })
            .collect();
        PointSet {
            description: format!(
                "{n} random points, r ∈ [{}, {}], t ∈ [{}, {}], z ∈ [{}, {}], seed {seed}",
                r_range.0, r_range.1, t_range.0, t_range.1, z_range.0, z_range.1
            ),
            points,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Maximum of per-point residuals; `None` entries are skipped points.
fn aggregate(values: Vec<Result<Option<f64>>>) -> Result<(f64, usize)> {
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for v in values {
        match v? {
            Some(r) if r.is_nan() => worst = f64::INFINITY,
            Some(r) => worst = worst.max(r),
            None => skipped += 1,
        }
    }
    Ok((worst, skipped))
}

/// `|(∂t² − ∂r² − ∂r/r − ∂φ²/r² − ∂z²)χ| / |∂t²χ|`, maximized over points.
pub fn dalembert_residual<P: Potential + ?Sized>(
    chi: &P,
    points: &PointSet,
    threshold: f64,
) -> Result<ResidualReport> {
    let pts = &points.points;
    let pairs = par_map(pts.len(), |k| -> Result<(Complex64, Complex64)> {
        let p = pts[k];
        if p.r <= 0.0 {
            return Err(Error::OnAxis { r: p.r });
        }
        let j = evaluate_jet(chi, &p, 2)?;
        let inv_r = 1.0 / p.r;
        let tt = j.d(2, 0, 0, 0);
        let box_chi = tt
            - j.d(0, 2, 0, 0)
            - j.d(0, 1, 0, 0) * inv_r
            - j.d(0, 0, 2, 0) * inv_r * inv_r
            - j.d(0, 0, 0, 2);
        Ok((box_chi, tt))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let scale = pairs.iter().map(|(_, d)| d.norm()).fold(0.0, f64::max);
    let residuals = pairs
        .iter()
        .zip(pts)
        .map(|((num, den), p)| {
            if den.norm() < 1e-30 * scale {
                log::debug!("d'Alembert check skips {p:?}: |∂t²χ| negligible");
                Ok(None)
            } else {
                Ok(Some(num.norm() / den.norm()))
            }
        })
        .collect();
    let (worst, skipped) = aggregate(residuals)?;
    Ok(ResidualReport::new("dalembert", points.description.clone(), worst, threshold).with_skipped(skipped))
}

/// Fourth-order central difference with one Richardson step.
fn richardson<F: Fn(&SpacetimePoint) -> Complex64>(f: &F, p: &SpacetimePoint, var: Var, h: f64) -> Complex64 {
    (first_derivative(f, p, var, h / 2.0) * 16.0 - first_derivative(f, p, var, h)) / 15.0
}

/// `∂t, ∂x, ∂y, ∂z` of every component of `F` by finite differences of the
/// sampled field.
fn field_gradient<P: Potential + ?Sized>(chi: &P, p: &SpacetimePoint, h: f64) -> Result<[[Complex64; 3]; 4]> {
    let (x0, y0) = p.transverse();
    let cartesian = SpacetimePoint::new(p.t, x0, y0, p.z);
    let eval = |c: &SpacetimePoint| rs_vector(chi, &SpacetimePoint::from_cartesian(c.t, c.r, c.phi, c.z));
    // probe every offset once so evaluation errors surface instead of NaNs
    for var in [Var::T, Var::R, Var::Phi, Var::Z] {
        for k in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
            eval(&cartesian.shifted(var, k * h))?;
        }
    }
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 4];
    for (row, var) in out.iter_mut().zip([Var::T, Var::R, Var::Phi, Var::Z]) {
        for (i, slot) in row.iter_mut().enumerate() {
            let component = |c: &SpacetimePoint| {
                eval(c)
                    .map(|f: RsVector| f.components()[i])
                    .unwrap_or(Complex64::new(f64::NAN, 0.0))
            };
            *slot = richardson(&component, &cartesian, var, h);
        }
    }
    Ok(out)
}

/// Divergence and evolution residuals of `F`, normalized by the local size
/// of its gradient:
///
/// ```text
/// |∇·F| / |∇F|,    |i∂tF − ∇×F| / (|∂tF| + |∇F|)
/// ```
///
/// Derivatives are finite differences of step `h` (frame units) with one
/// Richardson step, fully independent of the jet derivatives used inside `F`.
pub fn maxwell_residual<P: Potential + ?Sized>(
    chi: &P,
    points: &PointSet,
    h: f64,
    thresholds: &Thresholds,
) -> Result<(ResidualReport, ResidualReport)> {
    let pts = &points.points;
    let per_point = par_map(pts.len(), |k| -> Result<(f64, f64, f64, f64)> {
        let [dt, dx, dy, dz] = field_gradient(chi, &pts[k], h)?;
        let divergence = dx[0] + dy[1] + dz[2];
        let curl = [dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]];
        let evolution: f64 = (0..3)
            .map(|i| (I * dt[i] - curl[i]).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let spatial: f64 = [dx, dy, dz]
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let temporal: f64 = dt.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Ok((divergence.norm(), spatial, evolution, spatial + temporal))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let scale = per_point.iter().map(|v| v.3).fold(0.0, f64::max);
    let ratio = |num: f64, den: f64| {
        if den < 1e-30 * scale {
            Ok(None)
        } else {
            Ok(Some(num / den))
        }
    };
    let (div, div_skipped) = aggregate(per_point.iter().map(|v| ratio(v.0, v.1)).collect())?;
    let (evo, evo_skipped) = aggregate(per_point.iter().map(|v| ratio(v.2, v.3)).collect())?;
    let desc = format!("{}, step {h}", points.description);
    Ok((
        ResidualReport::new("divergence", desc.clone(), div, thresholds.divergence).with_skipped(div_skipped),
        ResidualReport::new("evolution", desc, evo, thresholds.evolution).with_skipped(evo_skipped),
    ))
}

/// Focal-intensity invariance of a paraxial mode: `|LG|²·w(z)²` sampled at
/// fixed scaled coordinates `ξ = √2·x/w(z)`, `η = √2·y/w(z)` must not depend
/// on `z`. With `scaled = false` the same physical points are compared
/// without the rescaling.
pub fn propagation_invariance(
    lg: &ParaxialLg,
    z_samples: &[f64],
    scaled: bool,
    threshold: f64,
) -> ResidualReport {
    let n = 24;
    let nodes: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let s = |k: usize| -3.0 + 6.0 * (k as f64 + 0.5) / n as f64;
            (s(i), s(j))
        })
        .collect();
    let profile = |z: f64| -> Vec<f64> {
        let w = if scaled { lg.waist_at(z) } else { lg.w0 };
        nodes
            .iter()
            .map(|&(xi, eta)| {
                let (x, y) = (
                    xi * w / std::f64::consts::SQRT_2,
                    eta * w / std::f64::consts::SQRT_2,
                );
                lg.amplitude(&SpacetimePoint::from_cartesian(0.0, x, y, z))
                    .norm_sqr()
                    * w
                    * w
            })
            .collect()
    };
    let reference = profile(z_samples.first().copied().unwrap_or(0.0));
    let peak = reference.iter().copied().fold(0.0, f64::max);
    let worst = z_samples
        .iter()
        .map(|&z| {
            profile(z)
                .iter()
                .zip(&reference)
                .map(|(a, b)| (a - b).abs() / peak)
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let name = if scaled {
        "propagation-invariance"
    } else {
        "propagation-invariance-unscaled"
    };
    let zr = lg.rayleigh_range();
    let zs: Vec<String> = z_samples.iter().map(|z| format!("{:.3}", z / zr)).collect();
    ResidualReport::new(
        name,
        format!(
            "{}×{} scaled nodes in [-3, 3]², z/z_R ∈ {{{}}}",
            n,
            n,
            zs.join(", ")
        ),
        worst,
        threshold,
    )
}

/// Relative L² distance of two peak-normalized sample vectors.
fn normalized_l2(a: &[f64], b: &[f64]) -> f64 {
    let pa = a.iter().copied().fold(0.0, f64::max);
    let pb = b.iter().copied().fold(0.0, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        num += (x / pa - y / pb).powi(2);
        den += (y / pb).powi(2);
    }
    (num / den).sqrt()
}

/// Compares the focal transverse intensity `|F_⊥|²` of a ±ℓ photon pair with
/// the paraxial prediction on the annulus `r ∈ [0.5, 1.5]·w0√(ℓ/2)`.
///
/// Paraxially `F_⊥ ∝ (1, iσ)·D_σ χ` with `D_+ = e^{−iφ}(∂r − (i/r)∂φ)`,
/// so the reference is `|D_σ LG|²` of the matching Laguerre-Gauss pair. The
/// distance to the plain `|LG|²` is kept in the note.
pub fn paraxial_agreement(
    l: i32,
    w0: f64,
    radial: usize,
    per_fringe: usize,
    threshold: f64,
) -> Result<ResidualReport> {
    let m = l.unsigned_abs();
    if m == 0 {
        return Err(Error::InvalidParameter("paraxial agreement needs ℓ ≠ 0".into()));
    }
    let photon = Superposition::pair(&PhotonPotential::new(l, w0)?, Weighting::Cosine);
    // frame units: λ = 1 and the beam parameter w0² + i(t + z) fixes z_R = w0²
    let lg = Superposition::pair(
        &ParaxialLg::new(0, l, w0, std::f64::consts::PI)?,
        Weighting::Cosine,
    );
    let lowering = DiffOpSpec::new(vec![match photon.base().polarization {
        Polarization::Right => Atom::Lower,
        Polarization::Left => Atom::Raise,
    }])?;
    let ring = w0 * (m as f64 / 2.0).sqrt();
    let n_phi = per_fringe.max(1) * 2 * m as usize;
    let nodes: Vec<SpacetimePoint> = (0..radial)
        .flat_map(|i| {
            let r = ring * (0.5 + (i as f64 + 0.5) / radial as f64);
            (0..n_phi).map(move |j| SpacetimePoint::focal(r, std::f64::consts::TAU * j as f64 / n_phi as f64))
        })
        .collect();
    let samples = par_map(nodes.len(), |k| -> Result<(f64, f64, f64)> {
        let p = nodes[k];
        let f = rs_vector(&photon, &p)?;
        let reference = apply_operator(&lowering, &lg, &p)?.norm_sqr();
        Ok((f.transverse_intensity(), reference, lg.value(&p).norm_sqr()))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let field: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let reference: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let plain: Vec<f64> = samples.iter().map(|s| s.2).collect();
    Ok(ResidualReport::new(
        "paraxial",
        format!("ℓ = ±{m}, w0 = {w0}λ, {radial}×{n_phi} focal nodes on r ∈ [0.5, 1.5]·w0√(ℓ/2)"),
        normalized_l2(&field, &reference),
        threshold,
    )
    .with_note(format!(
        "distance to plain |LG|²: {:.3}",
        normalized_l2(&field, &plain)
    )))
}

/// `|tr 𝒢| / max |𝒢_ij|` over points.
pub fn gw_trace_residual<P: Potential + ?Sized>(
    chi: &P,
    points: &PointSet,
    threshold: f64,
) -> Result<ResidualReport> {
    let pts = &points.points;
    let residuals = par_map(pts.len(), |k| -> Result<Option<f64>> {
        let g = curvature(chi, &pts[k])?;
        let scale = g.components().iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok((scale > 0.0).then(|| g.trace().norm() / scale))
    });
    let (worst, skipped) = aggregate(residuals)?;
    Ok(ResidualReport::new("trace", points.description.clone(), worst, threshold).with_skipped(skipped))
}

/// `|ψ2| / |ψ|` over points.
pub fn spinor_residual<P: Potential + ?Sized + crate::electron::ElectronSource>(
    f: &P,
    points: &PointSet,
    threshold: f64,
) -> Result<ResidualReport> {
    let pts = &points.points;
    let residuals = par_map(pts.len(), |k| -> Result<Option<f64>> {
        let psi = dirac_spinor(f, &pts[k])?;
        let norm = psi.psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        Ok((norm > 0.0).then(|| psi.psi[1].norm() / norm))
    });
    let (worst, skipped) = aggregate(residuals)?;
    Ok(ResidualReport::new("spinor", points.description.clone(), worst, threshold).with_skipped(skipped))
}

/// The photon potential with its beam parameter frozen at `a = w0²`; it no
/// longer solves the wave equation.
pub fn frozen_photon_potential(l: i32, w0: f64) -> impl Potential {
    let m = l.unsigned_abs() as i32;
    FnPotential(move |c: &Coords| {
        let rho = c.r * (1.0 / w0);
        let phase = (c.t - c.z - c.phi * l as f64) * (-I);
        (phase - rho * rho).exp() * rho.powi(m)
    })
}

/// `r²·t²`, which violates the wave equation everywhere.
pub fn non_solution_potential() -> impl Potential {
    FnPotential(|c: &Coords| c.r * c.r * c.t * c.t)
}

/// A smooth potential with no wave equation behind it, for identities that
/// hold for any `χ`.
pub fn smooth_test_potential() -> impl Potential {
    FnPotential(|c: &Coords| {
        let bump = (-(c.r * c.r) * 0.1).exp();
        (c.phi * I * 2.0 + c.z * (I * 0.7) - c.t * 0.3).exp() * c.r * c.r * bump
            + Series::real(0.2, c.order()) * c.t
    })
}

/// What the suite runs and how strictly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub thresholds: Thresholds,
    /// Random points per field check.
    pub points: usize,
    /// Random points for the curvature trace.
    pub trace_points: usize,
    pub seed: u64,
    pub negative_controls: bool,
    /// Radial and per-fringe azimuthal samples of the paraxial comparison.
    pub paraxial_radial: usize,
    pub paraxial_per_fringe: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            thresholds: Thresholds::default(),
            points: 200,
            trace_points: 1000,
            seed: 2024,
            negative_controls: false,
            paraxial_radial: 24,
            paraxial_per_fringe: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub checks: Vec<ResidualReport>,
    /// Negative controls; each is expected to fail.
    pub controls: Vec<ResidualReport>,
    pub all_passed: bool,
    pub controls_failed: bool,
}

/// Runs every positive check, and the negative controls when asked.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let th = &config.thresholds;
    let n = config.points;
    let seed = config.seed;

    // tightly focused photon beam, ℓ = ±15, w0 = 7.75λ
    let w0 = 7.75;
    let photon = Superposition::pair(&PhotonPotential::new(15, w0)?, Weighting::Cosine);
    let photon_points = PointSet::random(n, seed, (0.5 * w0, 4.0 * w0), (-w0, w0), (-w0, w0));
    let mut checks = vec![dalembert_residual(&photon, &photon_points, th.dalembert)?];
    let (div, evo) = maxwell_residual(&photon, &photon_points, w0 * 1e-4, th)?;
    checks.push(div);
    checks.push(evo);

    let test_points = PointSet::random(n, seed + 1, (0.3, 4.0), (-1.0, 1.0), (-1.0, 1.0));
    let (mut div_any, _) = maxwell_residual(&smooth_test_potential(), &test_points, 1e-4, th)?;
    div_any.check = "divergence-any-potential".into();
    checks.push(div_any);

    let gw_w0 = 7.41;
    let gw = Superposition::pair(&PhotonPotential::new(15, gw_w0)?, Weighting::Cosine);
    let gw_points = PointSet::random(
        config.trace_points,
        seed + 2,
        (0.5 * gw_w0, 4.0 * gw_w0),
        (-gw_w0, gw_w0),
        (-gw_w0, gw_w0),
    );
    checks.push(gw_trace_residual(&gw, &gw_points, th.trace)?);

    let electron = Superposition::pair(&ElectronPotential::new(15, 142.1, 1.9)?, Weighting::Cosine);
    let electron_points = PointSet::random(n, seed + 3, (0.05, 1.0), (-0.5, 0.5), (-0.5, 0.5));
    checks.push(spinor_residual(&electron, &electron_points, th.spinor)?);

    let lg = ParaxialLg::new(1, 3, 1.0, 0.1)?;
    let zr = lg.rayleigh_range();
    let zs = [0.0, 0.5 * zr, zr, 2.0 * zr, -3.0 * zr];
    checks.push(propagation_invariance(&lg, &zs, true, th.propagation_invariance));

    checks.push(paraxial_agreement(
        15,
        100.0,
        config.paraxial_radial,
        config.paraxial_per_fringe,
        th.paraxial,
    )?);

    let mut controls = Vec::new();
    if config.negative_controls {
        let mut frozen = dalembert_residual(&frozen_photon_potential(15, w0), &photon_points, th.dalembert)?;
        frozen.check = "dalembert-frozen-beam-parameter".into();
        controls.push(frozen);

        let (_, mut evo) = maxwell_residual(&non_solution_potential(), &test_points, 1e-4, th)?;
        evo.check = "evolution-r2t2".into();
        controls.push(evo);

        controls.push(propagation_invariance(&lg, &zs, false, th.propagation_invariance));

        let mut wide = paraxial_agreement(
            15,
            3.0,
            config.paraxial_radial,
            config.paraxial_per_fringe,
            th.paraxial,
        )?;
        wide.check = "paraxial-tight-focus".into();
        controls.push(wide);
    }

    Ok(SuiteReport {
        all_passed: checks.iter().all(|c| c.passed),
        controls_failed: controls.iter().all(|c| !c.passed),
        checks,
        controls,
    })
}
