//! Exact derivative jets of scalar generating potentials.
//!
//! Potentials are written once against [`Coords`] (four seeded [`Series`]) and
//! the jet engine hands back every mixed partial up to order four. Operators
//! built from the atoms in [`operator`] act on those jets with the full
//! product rule, and [`fd`] provides an independent finite-difference oracle.
//!
//! All coordinates live in the potential's own dimensionless frame in which
//! the wave speed is 1; see [`crate::units`].

pub mod fd;
pub mod operator;
pub mod series;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use series::{Series, Var, MAX_ORDER};

/// A point in cylindrical spacetime coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl SpacetimePoint {
    pub const fn new(t: f64, r: f64, phi: f64, z: f64) -> Self {
        SpacetimePoint { t, r, phi, z }
    }

    /// Point in the focal plane at t = 0.
    pub const fn focal(r: f64, phi: f64) -> Self {
        SpacetimePoint::new(0.0, r, phi, 0.0)
    }

    pub fn coord(&self, var: Var) -> f64 {
        match var {
            Var::T => self.t,
            Var::R => self.r,
            Var::Phi => self.phi,
            Var::Z => self.z,
        }
    }

    pub fn shifted(&self, var: Var, by: f64) -> Self {
        let mut p = *self;
        match var {
            Var::T => p.t += by,
            Var::R => p.r += by,
            Var::Phi => p.phi += by,
            Var::Z => p.z += by,
        }
        p
    }

    /// Compares two points with φ taken modulo 2π.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let dphi = (self.phi - other.phi).rem_euclid(std::f64::consts::TAU);
        let dphi = dphi.min(std::f64::consts::TAU - dphi);
        (self.t - other.t).abs() <= tol
            && (self.r - other.r).abs() <= tol
            && dphi <= tol
            && (self.z - other.z).abs() <= tol
    }

    /// Cartesian (x, y) of the transverse position.
    pub fn transverse(&self) -> (f64, f64) {
        (self.r * self.phi.cos(), self.r * self.phi.sin())
    }

    pub fn from_cartesian(t: f64, x: f64, y: f64, z: f64) -> Self {
        SpacetimePoint::new(t, x.hypot(y), y.atan2(x), z)
    }
}

/// Derivative orders per coordinate, total at most four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MultiIndex {
    pub t: u8,
    pub r: u8,
    pub phi: u8,
    pub z: u8,
}

impl MultiIndex {
    pub fn new(t: u8, r: u8, phi: u8, z: u8) -> Result<Self> {
        let m = MultiIndex { t, r, phi, z };
        if m.total() > MAX_ORDER {
            return Err(Error::DepthOverflow { order: m.total() });
        }
        Ok(m)
    }

    pub const ZERO: MultiIndex = MultiIndex {
        t: 0,
        r: 0,
        phi: 0,
        z: 0,
    };

    pub fn total(&self) -> usize {
        (self.t + self.r + self.phi + self.z) as usize
    }

    pub fn exponents(&self) -> [u8; 4] {
        [self.t, self.r, self.phi, self.z]
    }

    pub fn get(&self, var: Var) -> u8 {
        self.exponents()[var as usize]
    }

    /// All multi-indices of total order `<= order`.
    pub fn all_up_to(order: usize) -> Vec<MultiIndex> {
        (0..series::coefficient_count(order.min(MAX_ORDER)))
            .map(|i| {
                let [t, r, phi, z] = series::monomial(i);
                MultiIndex { t, r, phi, z }
            })
            .collect()
    }
}

/// The four coordinate functions seeded as series around one point.
#[derive(Debug, Clone, Copy)]
pub struct Coords {
    pub t: Series,
    pub r: Series,
    pub phi: Series,
    pub z: Series,
}

impl Coords {
    pub fn seed(point: &SpacetimePoint, order: usize) -> Self {
        Coords {
            t: Series::variable(Var::T, point.t, order),
            r: Series::variable(Var::R, point.r, order),
            phi: Series::variable(Var::Phi, point.phi, order),
            z: Series::variable(Var::Z, point.z, order),
        }
    }

    pub fn order(&self) -> usize {
        self.t.order()
    }

    pub fn constant(&self, value: Complex64) -> Series {
        Series::constant(value, self.order())
    }

    pub fn real(&self, value: f64) -> Series {
        Series::real(value, self.order())
    }
}

/// A scalar generating potential that can be expanded in series.
pub trait Potential: Send + Sync {
    /// The potential as a function of the seeded coordinates.
    fn series(&self, at: &Coords) -> Series;

    /// Rejects points where the closed form is not analytic (branch cuts).
    fn check_point(&self, _point: &SpacetimePoint) -> Result<()> {
        Ok(())
    }

    fn value(&self, point: &SpacetimePoint) -> Complex64 {
        self.series(&Coords::seed(point, 0)).value()
    }
}

impl<P: Potential + ?Sized> Potential for &P {
    fn series(&self, at: &Coords) -> Series {
        (**self).series(at)
    }
    fn check_point(&self, point: &SpacetimePoint) -> Result<()> {
        (**self).check_point(point)
    }
}

impl<P: Potential + ?Sized> Potential for Box<P> {
    fn series(&self, at: &Coords) -> Series {
        (**self).series(at)
    }
    fn check_point(&self, point: &SpacetimePoint) -> Result<()> {
        (**self).check_point(point)
    }
}

impl<P: Potential + ?Sized> Potential for Arc<P> {
    fn series(&self, at: &Coords) -> Series {
        (**self).series(at)
    }
    fn check_point(&self, point: &SpacetimePoint) -> Result<()> {
        (**self).check_point(point)
    }
}

/// Adapts a closure over [`Coords`] into a [`Potential`]; handy for test
/// functions such as `r²·e^{iφ}`.
#[derive(Clone)]
pub struct FnPotential<F>(pub F);

impl<F> Potential for FnPotential<F>
where
    F: Fn(&Coords) -> Series + Send + Sync,
{
    fn series(&self, at: &Coords) -> Series {
        (self.0)(at)
    }
}

/// Value and all mixed partials up to `order` at one point.
#[derive(Debug, Clone, Copy)]
pub struct Jet {
    pub point: SpacetimePoint,
    series: Series,
}

impl Jet {
    pub fn from_series(point: SpacetimePoint, series: Series) -> Self {
        Jet { point, series }
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn value(&self) -> Complex64 {
        self.series.value()
    }

    /// `∂^index f` at the point, or `None` above the jet order.
    pub fn entry(&self, index: MultiIndex) -> Option<Complex64> {
        self.series.derivative(index.exponents())
    }

    /// Shorthand for [`Jet::entry`] taking raw orders (t, r, φ, z).
    pub fn d(&self, t: u8, r: u8, phi: u8, z: u8) -> Complex64 {
        self.series
            .derivative([t, r, phi, z])
            .expect("derivative order exceeds jet order")
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn entries(&self) -> impl Iterator<Item = (MultiIndex, Complex64)> + '_ {
        MultiIndex::all_up_to(self.order())
            .into_iter()
            .map(|m| (m, self.entry(m).unwrap()))
    }

    pub fn is_finite(&self) -> bool {
        self.series.is_finite()
    }
}

/// Evaluates `potential` and all its partials up to `order` at `point`.
pub fn evaluate_jet<P: Potential + ?Sized>(
    potential: &P,
    point: &SpacetimePoint,
    order: usize,
) -> Result<Jet> {
    if !matches!(order, 1 | 2 | 4) {
        return Err(Error::UnsupportedOrder(order));
    }
    if point.r <= 0.0 {
        return Err(Error::OnAxis { r: point.r });
    }
    series_at(potential, point, order).map(|s| Jet::from_series(*point, s))
}

/// Like [`evaluate_jet`] but for any order in `0..=4`.
pub(crate) fn series_at<P: Potential + ?Sized>(
    potential: &P,
    point: &SpacetimePoint,
    order: usize,
) -> Result<Series> {
    if order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    potential.check_point(point)?;
    Ok(potential.series(&Coords::seed(point, order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn i() -> Complex64 {
        Complex64::new(0.0, 1.0)
    }

    #[test]
    fn r_squared_phase_mixed_partial() {
        // r² e^{iφ} at r = 2, φ = 0: ∂r∂φ = 2r·i·e^{iφ} = 4i
        let chi = FnPotential(|c: &Coords| c.r * c.r * (c.phi * i()).exp());
        let jet = evaluate_jet(&chi, &SpacetimePoint::new(0.0, 2.0, 0.0, 0.0), 2).unwrap();
        let d = jet.d(0, 1, 1, 0);
        assert_relative_eq!(d.re, 0.0, epsilon = 1e-14);
        assert_relative_eq!(d.im, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn plane_wave_z_derivatives() {
        let wave = FnPotential(|c: &Coords| (c.z * i()).exp());
        let jet = evaluate_jet(&wave, &SpacetimePoint::new(0.0, 1.0, 0.0, 0.0), 2).unwrap();
        assert_relative_eq!((jet.d(0, 0, 0, 1) - i()).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!((jet.d(0, 0, 0, 2) + 1.0).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_unsupported_orders_and_axis() {
        let wave = FnPotential(|c: &Coords| c.z);
        let p = SpacetimePoint::focal(1.0, 0.0);
        assert!(matches!(
            evaluate_jet(&wave, &p, 3),
            Err(Error::UnsupportedOrder(3))
        ));
        assert!(matches!(
            evaluate_jet(&wave, &SpacetimePoint::focal(0.0, 0.0), 2),
            Err(Error::OnAxis { .. })
        ));
    }

    #[test]
    fn zero_index_is_value() {
        let f = FnPotential(|c: &Coords| c.r.sin() * c.t.exp());
        let p = SpacetimePoint::new(0.3, 1.1, 0.0, 0.0);
        let jet = evaluate_jet(&f, &p, 4).unwrap();
        assert_eq!(jet.entry(MultiIndex::ZERO).unwrap(), f.value(&p));
        assert_eq!(jet.entries().count(), 70);
    }

    #[test]
    fn multi_index_bounds() {
        assert!(MultiIndex::new(1, 1, 1, 1).is_ok());
        assert!(MultiIndex::new(2, 1, 1, 1).is_err());
        assert_eq!(MultiIndex::all_up_to(2).len(), 15);
    }

    #[test]
    fn point_equality_mod_two_pi() {
        let a = SpacetimePoint::focal(1.0, 0.1);
        let b = SpacetimePoint::focal(1.0, 0.1 + std::f64::consts::TAU);
        assert!(a.approx_eq(&b, 1e-12));
    }
}
