//! Finite-difference oracle for pointwise complex fields.
//!
//! Nothing in the production path calls these; they exist to check the jet
//! engine and the Maxwell identities against an independent route.

use num_complex::Complex64;

use super::operator::{Atom, DiffOpSpec};
use super::series::Var;
use super::{MultiIndex, SpacetimePoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Central stencil of second-order accuracy for the n-th derivative, as
/// (offset in steps, weight) with the `h^-n` factor left out.
fn central_stencil(n: u8) -> &'static [(i32, f64)] {
    match n {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        4 => &[(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)],
        _ => panic!("no stencil for derivative order {n}"),
    }
}

/// Per-coordinate step sizes (t, r, φ, z).
pub type Steps = [f64; 4];

/// Central-difference estimate of `∂^index field` at `point`, error O(h²).
pub fn finite_difference_partial<F>(
    field: &F,
    point: &SpacetimePoint,
    index: MultiIndex,
    steps: Steps,
) -> Complex64
where
    F: Fn(&SpacetimePoint) -> Complex64 + ?Sized,
{
    let orders = index.exponents();
    let stencils: Vec<&[(i32, f64)]> = orders.iter().map(|&n| central_stencil(n)).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for &(ot, wt) in stencils[0] {
        for &(or, wr) in stencils[1] {
            for &(op, wp) in stencils[2] {
                for &(oz, wz) in stencils[3] {
                    let p = SpacetimePoint::new(
                        point.t + ot as f64 * steps[0],
                        point.r + or as f64 * steps[1],
                        point.phi + op as f64 * steps[2],
                        point.z + oz as f64 * steps[3],
                    );
                    acc += field(&p) * (wt * wr * wp * wz);
                }
            }
        }
    }
    let denom: f64 = (0..4).map(|v| steps[v].powi(orders[v] as i32)).product();
    acc / denom
}

/// Richardson-extrapolated central difference: `levels` halvings of the
/// step, each cancelling the next even power of h.
pub fn richardson_partial<F>(
    field: &F,
    point: &SpacetimePoint,
    index: MultiIndex,
    steps: Steps,
    levels: usize,
) -> Complex64
where
    F: Fn(&SpacetimePoint) -> Complex64 + ?Sized,
{
    let mut table: Vec<Complex64> = (0..=levels)
        .map(|k| {
            let s = 0.5f64.powi(k as i32);
            finite_difference_partial(field, point, index, steps.map(|h| h * s))
        })
        .collect();
    for level in 1..=levels {
        let factor = 4f64.powi(level as i32);
        for k in (level..=levels).rev() {
            table[k] = (table[k] * factor - table[k - 1]) / (factor - 1.0);
        }
    }
    table[levels]
}

/// Fourth-order first derivative along one coordinate.
pub fn first_derivative<F>(field: &F, point: &SpacetimePoint, var: Var, h: f64) -> Complex64
where
    F: Fn(&SpacetimePoint) -> Complex64 + ?Sized,
{
    let f = |k: f64| field(&point.shifted(var, k * h));
    (f(-2.0) - f(2.0) + (f(1.0) - f(-1.0)) * 8.0) / (12.0 * h)
}

/// Fourth-order second derivative along one coordinate.
pub fn second_derivative<F>(field: &F, point: &SpacetimePoint, var: Var, h: f64) -> Complex64
where
    F: Fn(&SpacetimePoint) -> Complex64 + ?Sized,
{
    let f = |k: f64| field(&point.shifted(var, k * h));
    ((f(1.0) + f(-1.0)) * 16.0 - f(2.0) - f(-2.0) - f(0.0) * 30.0) / (12.0 * h * h)
}

type Field<'a> = Box<dyn Fn(&SpacetimePoint) -> Complex64 + 'a>;

fn fd_atom<'a>(atom: Atom, inner: Field<'a>, steps: Steps) -> Field<'a> {
    let [ht, hr, hp, hz] = steps;
    let d = move |f: &Field<'a>, p: &SpacetimePoint, var: Var| {
        let h = match var {
            Var::T => ht,
            Var::R => hr,
            Var::Phi => hp,
            Var::Z => hz,
        };
        first_derivative(&**f, p, var, h)
    };
    match atom {
        Atom::Dt => Box::new(move |p| d(&inner, p, Var::T)),
        Atom::Dr => Box::new(move |p| d(&inner, p, Var::R)),
        Atom::Dphi => Box::new(move |p| d(&inner, p, Var::Phi)),
        Atom::Dz => Box::new(move |p| d(&inner, p, Var::Z)),
        Atom::Dx => Box::new(move |p| {
            d(&inner, p, Var::R) * p.phi.cos() - d(&inner, p, Var::Phi) * (p.phi.sin() / p.r)
        }),
        Atom::Dy => Box::new(move |p| {
            d(&inner, p, Var::R) * p.phi.sin() + d(&inner, p, Var::Phi) * (p.phi.cos() / p.r)
        }),
        Atom::TimePlusZ => Box::new(move |p| d(&inner, p, Var::T) + d(&inner, p, Var::Z)),
        Atom::TimeMinusZ => Box::new(move |p| d(&inner, p, Var::T) - d(&inner, p, Var::Z)),
        Atom::Raise | Atom::NegRaise => {
            let sign = if atom == Atom::Raise { 1.0 } else { -1.0 };
            Box::new(move |p| {
                (I * p.phi).exp() * (d(&inner, p, Var::R) + I * d(&inner, p, Var::Phi) / p.r) * sign
            })
        }
        Atom::Lower => {
            Box::new(move |p| (-I * p.phi).exp() * (d(&inner, p, Var::R) - I * d(&inner, p, Var::Phi) / p.r))
        }
        Atom::DxDz => fd_atom(Atom::Dx, fd_atom(Atom::Dz, inner, steps), steps),
        Atom::DyDz => fd_atom(Atom::Dy, fd_atom(Atom::Dz, inner, steps), steps),
        Atom::IDxDt => {
            let f = fd_atom(Atom::Dx, fd_atom(Atom::Dt, inner, steps), steps);
            Box::new(move |p| f(p) * I)
        }
        Atom::IDyDt => {
            let f = fd_atom(Atom::Dy, fd_atom(Atom::Dt, inner, steps), steps);
            Box::new(move |p| f(p) * I)
        }
        Atom::TransverseLaplacian => Box::new(move |p| {
            second_derivative(&*inner, p, Var::R, hr)
                + first_derivative(&*inner, p, Var::R, hr) / p.r
                + second_derivative(&*inner, p, Var::Phi, hp) / (p.r * p.r)
        }),
        Atom::Scale(k) => Box::new(move |p| inner(p) * k),
    }
}

/// Applies `op` by nesting finite differences atom by atom.
pub fn fd_apply<'a, F>(op: &DiffOpSpec, field: &'a F, point: &SpacetimePoint, steps: Steps) -> Complex64
where
    F: Fn(&SpacetimePoint) -> Complex64 + 'a,
{
    let mut f: Field<'a> = Box::new(field);
    for &atom in op.atoms().iter().rev() {
        f = fd_atom(atom, f, steps);
    }
    f(point)
}
