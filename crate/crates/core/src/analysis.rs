//! Ring radius, azimuthal extrema, fringe visibility and scaling laws of
//! focal-plane intensity patterns.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::jet::{Potential, SpacetimePoint};

/// A pointwise intensity on a fixed transverse slice, in the field's own
/// length units.
pub trait IntensityField: Sync {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64>;

    /// Largest |ℓ| in the field; sets the expected fringe density.
    fn charge(&self) -> u32;

    /// Radial scale used to bracket the ring search (the waist for beams).
    fn waist_hint(&self) -> f64;

    /// Number of azimuthal maxima expected on the ring.
    fn expected_fringes(&self) -> u32 {
        2 * self.charge()
    }

    /// Metres per length unit.
    fn length_unit(&self) -> f64 {
        1.0
    }
}

impl<T: IntensityField + ?Sized> IntensityField for &T {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        (**self).intensity(r, phi)
    }
    fn charge(&self) -> u32 {
        (**self).charge()
    }
    fn waist_hint(&self) -> f64 {
        (**self).waist_hint()
    }
    fn expected_fringes(&self) -> u32 {
        (**self).expected_fringes()
    }
    fn length_unit(&self) -> f64 {
        (**self).length_unit()
    }
}

/// `|χ|²` of a scalar potential on the slice `(t, z)`.
#[derive(Debug, Clone)]
pub struct ScalarIntensity<P> {
    pub potential: P,
    pub charge: u32,
    pub expected_fringes: u32,
    pub waist: f64,
    pub t: f64,
    pub z: f64,
}

impl<P: Potential> ScalarIntensity<P> {
    /// Focal-plane intensity of a ±ℓ pair (`2|ℓ|` fringes expected).
    pub fn pair(potential: P, charge: u32, waist: f64) -> Self {
        ScalarIntensity {
            potential,
            charge,
            expected_fringes: 2 * charge,
            waist,
            t: 0.0,
            z: 0.0,
        }
    }

    /// Focal-plane intensity of a single-charge mode (flat ring).
    pub fn single(potential: P, charge: u32, waist: f64) -> Self {
        ScalarIntensity {
            expected_fringes: 0,
            ..Self::pair(potential, charge, waist)
        }
    }
}

impl<P: Potential> IntensityField for ScalarIntensity<P> {
    fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
        Ok(self
            .potential
            .value(&SpacetimePoint::new(self.t, r, phi, self.z))
            .norm_sqr())
    }
    fn charge(&self) -> u32 {
        self.charge
    }
    fn waist_hint(&self) -> f64 {
        self.waist
    }
    fn expected_fringes(&self) -> u32 {
        self.expected_fringes
    }
}

/// Sampling and convergence settings for the ring search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanOptions {
    pub radial_samples: usize,
    /// Azimuthal samples per expected fringe in the coarse 2D scan.
    pub samples_per_fringe: usize,
    /// Azimuthal samples per unit charge on the ring.
    pub ring_samples_per_charge: usize,
    pub min_ring_samples: usize,
    /// Radial convergence, relative to the waist hint.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            radial_samples: 128,
            samples_per_fringe: 32,
            ring_samples_per_charge: 128,
            min_ring_samples: 512,
            tolerance: 1e-6,
            max_iterations: 50,
        }
    }
}

impl ScanOptions {
    /// Smaller coarse scan for interactive use.
    pub fn quick() -> Self {
        ScanOptions {
            radial_samples: 64,
            samples_per_fringe: 8,
            ring_samples_per_charge: 64,
            min_ring_samples: 256,
            ..ScanOptions::default()
        }
    }
}

/// Location of the global focal-plane maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialMaximum {
    pub r: f64,
    pub phi: f64,
    pub intensity: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub radial_samples: usize,
    pub azimuthal_samples: usize,
}

/// Extrema of the intensity along one ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingExtrema {
    pub i_max: f64,
    pub i_min: f64,
    pub phi_max: f64,
    pub phi_min: f64,
    /// Refined azimuths of all local maxima, ascending in `[0, 2π)`.
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
    pub fringe_count: u32,
    pub samples: usize,
    pub evaluations: usize,
}

/// Solver diagnostics stored next to the headline numbers.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// `r_max` in the field's own length units.
    pub r_max_scaled: f64,
    /// Metres per length unit.
    pub length_unit_m: f64,
    pub waist_hint: f64,
    pub expected_fringes: u32,
    pub radial_samples: usize,
    pub azimuthal_samples: usize,
    pub ring_samples: usize,
    pub refinement_iterations: usize,
    pub evaluations: usize,
    pub warnings: Vec<String>,
}

/// Visibility of the azimuthal fringes on the brightest ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityReport {
    /// Ring radius in metres (or the field's units when it has none).
    pub r_max: f64,
    pub phi_at_max: f64,
    #[serde(rename = "I_max")]
    pub i_max: f64,
    #[serde(rename = "I_min")]
    pub i_min: f64,
    pub vis: f64,
    pub fringe_count: u32,
    #[serde(flatten)]
    pub diagnostics: Diagnostics,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut evals = 0;
    let mut eval = |x: f64| {
        evals += 1;
        f(x)
    };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
    }
    let (x, fx) = if fc > fd { (c, fc) } else { (d, fd) };
    Ok((x, fx, evals))
}

fn checked(value: f64, r: f64, phi: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NonFinite {
            t: 0.0,
            r,
            phi,
            z: 0.0,
        })
    }
}

fn eval<F: IntensityField + ?Sized>(field: &F, r: f64, phi: f64) -> Result<f64> {
    checked(field.intensity(r, phi)?, r, phi)
}

/// Global maximizer of the focal-plane intensity: coarse polar scan over
/// `r ∈ [w0/10, 4·w0·√(ℓ/2)]`, then alternating golden-section refinement in
/// `r` and `φ`.
pub fn find_r_max<F: IntensityField + ?Sized>(
    field: &F,
    l: u32,
    w0_hint: f64,
    opts: &ScanOptions,
) -> Result<RadialMaximum> {
    if w0_hint.is_nan() || w0_hint <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "waist hint must be positive, got {w0_hint}"
        )));
    }
    let l = l.max(1);
    let r_lo = w0_hint / 10.0;
    let r_hi = 4.0 * w0_hint * (l as f64 / 2.0).sqrt();
    let nr = opts.radial_samples.max(3);
    let nphi = (opts.samples_per_fringe * 2 * l as usize).max(8);
    let dr = (r_hi - r_lo) / (nr - 1) as f64;
    let dphi = TAU / nphi as f64;
    let values = par_map(nr * nphi, |k| {
        let (i, j) = (k / nphi, k % nphi);
        eval(field, r_lo + i as f64 * dr, j as f64 * dphi)
    });
    let mut best = (0, f64::NEG_INFINITY);
    for (k, v) in values.into_iter().enumerate() {
        let v = v?;
        if v > best.1 {
            best = (k, v);
        }
    }
    let (i, j) = (best.0 / nphi, best.0 % nphi);
    if i == 0 && best.1 > 0.0 {
        return Err(Error::AxialMaximum { r_lo });
    }
    if i == nr - 1 || best.1 <= 0.0 {
        return Err(Error::NoInteriorMaximum { r_lo, r_hi });
    }
    let mut evaluations = nr * nphi;
    let (mut r, mut phi, mut value) = (r_lo + i as f64 * dr, j as f64 * dphi, best.1);
    let mut iterations = 0;
    let r_tol = opts.tolerance * w0_hint;
    while iterations < opts.max_iterations {
        iterations += 1;
        let (r_new, _, n1) = golden_max(|x| eval(field, x, phi), r - dr, r + dr, r_tol * 0.1)?;
        let (phi_new, v_new, n2) = golden_max(|x| eval(field, r_new, x), phi - dphi, phi + dphi, 1e-9)?;
        evaluations += n1 + n2;
        let step = (r_new - r).abs();
        if v_new >= value {
            r = r_new;
            phi = phi_new;
            value = v_new;
        }
        if step < r_tol {
            break;
        }
    }
    Ok(RadialMaximum {
        r,
        phi: phi.rem_euclid(TAU),
        intensity: value,
        iterations,
        evaluations,
        radial_samples: nr,
        azimuthal_samples: nphi,
    })
}

/// Relative modulation below which a ring counts as flat.
const FLAT: f64 = 1e-9;

/// Maximum and minimum of `I(r, ·)` from a dense scan with each local
/// extremum refined (parabolic start, golden-section polish).
pub fn azimuthal_extrema<F: IntensityField + ?Sized>(
    field: &F,
    r: f64,
    l: u32,
    opts: &ScanOptions,
) -> Result<RingExtrema> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::OnAxis { r });
    }
    let n = (opts.ring_samples_per_charge * l as usize).max(opts.min_ring_samples);
    let h = TAU / n as f64;
    let samples = par_map(n, |k| eval(field, r, k as f64 * h))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let (kmax, smax) =
        samples.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |a, (k, v)| if v > a.1 { (k, v) } else { a },
        );
    let (kmin, smin) = samples
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |a, (k, v)| if v < a.1 { (k, v) } else { a });
    let mut out = RingExtrema {
        i_max: smax,
        i_min: smin,
        phi_max: kmax as f64 * h,
        phi_min: kmin as f64 * h,
        maxima: Vec::new(),
        minima: Vec::new(),
        fringe_count: 0,
        samples: n,
        evaluations: n,
    };
    if smax <= 0.0 || (smax - smin) <= FLAT * (smax + smin) {
        return Ok(out);
    }

    let at = |k: isize| samples[k.rem_euclid(n as isize) as usize];
    let mut refine = |k: usize, sign: f64| -> Result<(f64, f64)> {
        let (ym, y0, yp) = (at(k as isize - 1), at(k as isize), at(k as isize + 1));
        let curv = ym - 2.0 * y0 + yp;
        let shift = if curv != 0.0 { 0.5 * (ym - yp) / curv } else { 0.0 };
        let centre = (k as f64 + shift.clamp(-1.0, 1.0)) * h;
        let (x, v, evals) = golden_max(
            |x| Ok(sign * eval(field, r, x)?),
            centre - 0.5 * h,
            centre + 0.5 * h,
            1e-10,
        )?;
        out.evaluations += evals;
        let (x, v) = if sign * y0 > v {
            (k as f64 * h, sign * y0)
        } else {
            (x, v)
        };
        Ok((x.rem_euclid(TAU), sign * v))
    };
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for (k, &cur) in samples.iter().enumerate() {
        let (prev, next) = (at(k as isize - 1), at(k as isize + 1));
        if cur > prev && cur >= next {
            maxima.push(refine(k, 1.0)?);
        } else if cur < prev && cur <= next {
            minima.push(refine(k, -1.0)?);
        }
    }
    if let Some(&(phi, v)) = maxima.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        if v >= out.i_max {
            out.i_max = v;
            out.phi_max = phi;
        }
    }
    if let Some(&(phi, v)) = minima.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
        if v <= out.i_min {
            out.i_min = v.max(0.0);
            out.phi_min = phi;
        }
    }
    out.fringe_count = maxima.len() as u32;
    out.maxima = maxima.into_iter().map(|m| m.0).collect();
    out.minima = minima.into_iter().map(|m| m.0).collect();
    out.maxima.sort_by(f64::total_cmp);
    out.minima.sort_by(f64::total_cmp);
    Ok(out)
}

/// `(I_max − I_min)/(I_max + I_min)`.
pub fn visibility(i_max: f64, i_min: f64) -> Result<f64> {
    if !(i_min >= 0.0 && i_max >= i_min) {
        return Err(Error::InvalidParameter(format!(
            "need I_max ≥ I_min ≥ 0, got I_max = {i_max}, I_min = {i_min}"
        )));
    }
    if i_max == 0.0 {
        return Err(Error::ZeroIntensity);
    }
    Ok((i_max - i_min) / (i_max + i_min))
}

/// Azimuthal arc length between neighbouring maxima of a paraxial ±ℓ pair
/// on its ring, `πw0/√(2ℓ)`.
pub fn fringe_spacing(l: u32, w0: f64) -> f64 {
    PI * w0 / (2.0 * l as f64).sqrt()
}

/// Paraxial ring radius `w0·√(ℓ/2)`.
pub fn paraxial_ring_radius(l: u32, w0: f64) -> f64 {
    w0 * (l as f64 / 2.0).sqrt()
}

/// Least-squares slope of `ln r_max` against `ln ℓ`.
pub fn scaling_fit(pairs: &[(f64, f64)]) -> Result<f64> {
    let mut charges: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    charges.sort_by(f64::total_cmp);
    charges.dedup();
    if pairs.len() < 4 || charges.len() != pairs.len() {
        return Err(Error::TooFewPoints(charges.len()));
    }
    if pairs.iter().any(|&(l, r)| !(l > 0.0 && r > 0.0)) {
        return Err(Error::InvalidParameter(
            "charges and radii must be positive".into(),
        ));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `λ/(πw0)`.
pub fn numerical_aperture(w0: f64, wavelength: f64) -> f64 {
    wavelength / (PI * w0)
}

/// Full visibility analysis of a field's brightest ring.
pub fn analyze<F: IntensityField + ?Sized>(field: &F, opts: &ScanOptions) -> Result<VisibilityReport> {
    let l = field.charge();
    let waist = field.waist_hint();
    let mut warnings = Vec::new();
    let peak = match find_r_max(field, l, waist, opts) {
        Err(Error::AxialMaximum { .. }) => {
            let r = waist * (l.max(1) as f64 / 2.0).sqrt();
            warnings.push(format!(
                "intensity peaks on the axis; ring taken at the paraxial radius {r}"
            ));
            RadialMaximum {
                r,
                phi: 0.0,
                intensity: eval(field, r, 0.0)?,
                iterations: 0,
                evaluations: 1,
                radial_samples: 0,
                azimuthal_samples: 0,
            }
        }
        other => other?,
    };
    let ring = azimuthal_extrema(field, peak.r, l, opts)?;
    let vis = visibility(ring.i_max, ring.i_min)?;
    let expected = field.expected_fringes();
    if ring.fringe_count != expected {
        warnings.push(format!(
            "found {} fringes on the ring, expected {expected}",
            ring.fringe_count
        ));
    }
    let unit = field.length_unit();
    Ok(VisibilityReport {
        r_max: peak.r * unit,
        phi_at_max: peak.phi,
        i_max: ring.i_max,
        i_min: ring.i_min,
        vis,
        fringe_count: ring.fringe_count,
        diagnostics: Diagnostics {
            r_max_scaled: peak.r,
            length_unit_m: unit,
            waist_hint: waist,
            expected_fringes: expected,
            radial_samples: peak.radial_samples,
            azimuthal_samples: peak.azimuthal_samples,
            ring_samples: ring.samples,
            refinement_iterations: peak.iterations,
            evaluations: peak.evaluations + ring.evaluations,
            warnings,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{ParaxialLg, Superposition, Weighting};
    use approx::assert_relative_eq;

    struct Ring {
        l: u32,
        depth: f64,
    }

    impl IntensityField for Ring {
        fn intensity(&self, r: f64, phi: f64) -> Result<f64> {
            let radial = r.powi(2 * self.l as i32) * (-2.0 * r * r).exp();
            Ok(radial * (1.0 - self.depth * (self.l as f64 * phi).sin().powi(2)))
        }
        fn charge(&self) -> u32 {
            self.l
        }
        fn waist_hint(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn visibility_arithmetic() {
        assert_eq!(visibility(1.0, 0.0).unwrap(), 1.0);
        assert_eq!(visibility(1.0, 1.0).unwrap(), 0.0);
        assert_eq!(visibility(3.0, 1.0).unwrap(), 0.5);
        assert!(matches!(visibility(0.0, 0.0), Err(Error::ZeroIntensity)));
        assert!(visibility(1.0, 2.0).is_err());
    }

    #[test]
    fn spacing_and_aperture_arithmetic() {
        assert_relative_eq!(fringe_spacing(2, 2.0 / PI), 1.0, epsilon = 1e-15);
        assert_relative_eq!(fringe_spacing(15, 149.0), 85.46, max_relative = 1e-3);
        assert_relative_eq!(numerical_aperture(1.0 / PI, 1.0), 1.0);
        assert_relative_eq!(numerical_aperture(6.2e-6, 800e-9), 0.0411, max_relative = 1e-3);
        assert_relative_eq!(numerical_aperture(149e-6, 800e-9), 1.709e-3, max_relative = 1e-3);
    }

    #[test]
    fn synthetic_scaling_exponent() {
        let pairs: Vec<(f64, f64)> = [5.0, 10.0, 20.0, 40.0]
            .iter()
            .map(|&l: &f64| (l, (l / 2.0).sqrt()))
            .collect();
        assert_relative_eq!(scaling_fit(&pairs).unwrap(), 0.5, epsilon = 1e-12);
        assert!(matches!(scaling_fit(&pairs[..3]), Err(Error::TooFewPoints(3))));
        let repeated = vec![(5.0, 1.0), (5.0, 1.1), (10.0, 2.0), (20.0, 3.0)];
        assert!(scaling_fit(&repeated).is_err());
    }

    #[test]
    fn synthetic_ring() {
        let field = Ring { l: 6, depth: 0.5 };
        let report = analyze(&field, &ScanOptions::default()).unwrap();
        // radial factor r^12 e^{-2r²} peaks at r = √3
        assert_relative_eq!(report.r_max, 3f64.sqrt(), max_relative = 1e-7);
        assert_eq!(report.fringe_count, 12);
        assert_relative_eq!(report.i_min / report.i_max, 0.5, max_relative = 1e-9);
        assert_relative_eq!(report.vis, 1.0 / 3.0, max_relative = 1e-9);
        assert!(report.diagnostics.warnings.is_empty());
    }

    #[test]
    fn flat_ring_has_zero_visibility() {
        let field = Ring { l: 4, depth: 0.0 };
        let report = analyze(&field, &ScanOptions::default()).unwrap();
        assert!(report.vis < 1e-9);
        assert_eq!(report.fringe_count, 0);
    }

    #[test]
    fn unit_charge_lg_ring() {
        let lg = ParaxialLg::new(0, 1, 1.0, 1e-3).unwrap();
        let field = ScalarIntensity::single(lg, 1, 1.0);
        let peak = find_r_max(&field, 1, 1.0, &ScanOptions::default()).unwrap();
        assert_relative_eq!(peak.r, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-3);
    }

    #[test]
    fn paraxial_pair_minima_are_dark() {
        let lg = ParaxialLg::new(0, 15, 149.0, 0.8).unwrap();
        let field = ScalarIntensity::pair(Superposition::pair(&lg, Weighting::Cosine), 15, 149.0);
        let report = analyze(&field, &ScanOptions::default()).unwrap();
        assert_relative_eq!(report.r_max, 408.0, max_relative = 5e-3);
        assert!(report.i_min <= 1e-10 * report.i_max);
        assert_eq!(report.fringe_count, 30);
    }

    #[test]
    fn report_keys_are_flat() {
        let field = Ring { l: 3, depth: 0.2 };
        let report = analyze(&field, &ScanOptions::quick()).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in [
            "r_max",
            "phi_at_max",
            "I_max",
            "I_min",
            "vis",
            "fringe_count",
            "ring_samples",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let back: VisibilityReport = serde_json::from_value(json).unwrap();
        assert_eq!(back, report);
    }
}
