//! Differential operators assembled from first- and second-order atoms.
//!
//! Every atom is expressed through `∂t, ∂r, ∂φ, ∂z` and multiplication by
//! coordinate functions (`e^{±iφ}`, `cos φ`, `sin φ`, `1/r`). Those functions
//! are themselves series, so applying an atom to a jet re-derives all
//! product-rule terms; atoms that carry `1/r` therefore do not commute with
//! one another and composition order matters.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::series::{Series, Var, MAX_ORDER};
use super::{series_at, Potential, SpacetimePoint};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// One factor of a composed operator. The wave speed is 1 in the frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Atom {
    Dt,
    Dr,
    Dphi,
    Dz,
    /// `∂x = cos φ ∂r − (sin φ / r) ∂φ`
    Dx,
    /// `∂y = sin φ ∂r + (cos φ / r) ∂φ`
    Dy,
    /// `∂t + ∂z`
    TimePlusZ,
    /// `∂t − ∂z`
    TimeMinusZ,
    /// `e^{iφ}(∂r + (i/r)∂φ)`, i.e. `∂x + i∂y`
    Raise,
    /// `−e^{iφ}(∂r + (i/r)∂φ)`
    NegRaise,
    /// `e^{−iφ}(∂r − (i/r)∂φ)`, i.e. `∂x − i∂y`
    Lower,
    DxDz,
    DyDz,
    /// `i ∂x ∂t`
    IDxDt,
    /// `i ∂y ∂t`
    IDyDt,
    /// `∂x² + ∂y²`
    TransverseLaplacian,
    Scale(Complex64),
}

impl Atom {
    pub fn derivative_order(&self) -> usize {
        match self {
            Atom::Scale(_) => 0,
            Atom::DxDz | Atom::DyDz | Atom::IDxDt | Atom::IDyDt | Atom::TransverseLaplacian => 2,
            _ => 1,
        }
    }

    /// Whether the atom multiplies by `1/r` somewhere.
    pub fn has_inverse_r(&self) -> bool {
        !matches!(
            self,
            Atom::Dt | Atom::Dr | Atom::Dphi | Atom::Dz | Atom::TimePlusZ | Atom::TimeMinusZ | Atom::Scale(_)
        )
    }
}

/// Coordinate functions at one point, expanded to full order.
#[derive(Debug, Clone, Copy)]
pub struct Geometry {
    cos: Series,
    sin: Series,
    e_plus: Series,
    e_minus: Series,
    inv_r: Series,
}

impl Geometry {
    pub fn at(point: &SpacetimePoint, order: usize) -> Self {
        let phi = Series::variable(Var::Phi, point.phi, order);
        let r = Series::variable(Var::R, point.r, order);
        Geometry {
            cos: phi.cos(),
            sin: phi.sin(),
            e_plus: (phi * I).exp(),
            e_minus: (phi * (-I)).exp(),
            inv_r: r.recip(),
        }
    }
}

fn dx(u: &Series, g: &Geometry) -> Series {
    g.cos * u.diff(Var::R) - g.sin * g.inv_r * u.diff(Var::Phi)
}

fn dy(u: &Series, g: &Geometry) -> Series {
    g.sin * u.diff(Var::R) + g.cos * g.inv_r * u.diff(Var::Phi)
}

fn raise(u: &Series, g: &Geometry) -> Series {
    g.e_plus * (u.diff(Var::R) + g.inv_r * u.diff(Var::Phi) * I)
}

/// Applies one atom to a series; the order drops by the atom's derivative order.
pub fn apply_atom(atom: Atom, u: &Series, g: &Geometry) -> Series {
    match atom {
        Atom::Dt => u.diff(Var::T),
        Atom::Dr => u.diff(Var::R),
        Atom::Dphi => u.diff(Var::Phi),
        Atom::Dz => u.diff(Var::Z),
        Atom::Dx => dx(u, g),
        Atom::Dy => dy(u, g),
        Atom::TimePlusZ => u.diff(Var::T) + u.diff(Var::Z),
        Atom::TimeMinusZ => u.diff(Var::T) - u.diff(Var::Z),
        Atom::Raise => raise(u, g),
        Atom::NegRaise => -raise(u, g),
        Atom::Lower => g.e_minus * (u.diff(Var::R) - g.inv_r * u.diff(Var::Phi) * I),
        Atom::DxDz => dx(&u.diff(Var::Z), g),
        Atom::DyDz => dy(&u.diff(Var::Z), g),
        Atom::IDxDt => dx(&u.diff(Var::T), g) * I,
        Atom::IDyDt => dy(&u.diff(Var::T), g) * I,
        Atom::TransverseLaplacian => {
            let ur = u.diff(Var::R);
            let urr = ur.diff(Var::R);
            let upp = u.diff(Var::Phi).diff(Var::Phi);
            urr + g.inv_r * ur + g.inv_r * g.inv_r * upp
        }
        Atom::Scale(k) => u.scale(k),
    }
}

/// A composed operator; atoms apply right-to-left like written math.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DiffOpSpec {
    atoms: Vec<Atom>,
}

impl DiffOpSpec {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let op = DiffOpSpec { atoms };
        let order = op.derivative_order();
        if order > MAX_ORDER {
            return Err(Error::DepthOverflow { order });
        }
        Ok(op)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn derivative_order(&self) -> usize {
        self.atoms.iter().map(Atom::derivative_order).sum()
    }

    pub fn has_inverse_r(&self) -> bool {
        self.atoms.iter().any(Atom::has_inverse_r)
    }

    /// `(∂t − ∂z)^l (−e^{iφ}(∂r + (i/r)∂φ))^n`
    pub fn curvature_component(l: usize, n: usize) -> Result<Self> {
        let mut atoms = vec![Atom::TimeMinusZ; l];
        atoms.extend(std::iter::repeat_n(Atom::NegRaise, n));
        Self::new(atoms)
    }

    /// Applies the operator to a series carrying at least `derivative_order`
    /// orders; the result keeps whatever order is left over.
    pub fn apply_series(&self, u: &Series, g: &Geometry) -> Result<Series> {
        let needed = self.derivative_order();
        if u.order() < needed {
            return Err(Error::DepthOverflow { order: needed });
        }
        Ok(self
            .atoms
            .iter()
            .rev()
            .fold(*u, |acc, &atom| apply_atom(atom, &acc, g)))
    }
}

/// Value of `op` acting on `potential` at `point`.
pub fn apply_operator<P: Potential + ?Sized>(
    op: &DiffOpSpec,
    potential: &P,
    point: &SpacetimePoint,
) -> Result<Complex64> {
    if op.has_inverse_r() && point.r <= 0.0 {
        return Err(Error::OnAxis { r: point.r });
    }
    let order = op.derivative_order();
    let chi = series_at(potential, point, order)?;
    let g = Geometry::at(point, order);
    Ok(op.apply_series(&chi, &g)?.value())
}
