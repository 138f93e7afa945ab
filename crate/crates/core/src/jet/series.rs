//! Truncated multivariate Taylor series in the four coordinates (t, r, φ, z).
//!
//! A [`Series`] stores the Taylor coefficients of a complex function around an
//! expansion point, for every monomial of total degree up to `order` (at most
//! [`MAX_ORDER`]). Arithmetic on series is exact up to the truncation order, so
//! building a potential out of series operations yields all of its mixed
//! partial derivatives to round-off.
//!
//! Monomials are laid out by increasing total degree, so a series of order `k`
//! only touches the first `C(k + 4, 4)` coefficients.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

/// Number of independent coordinates.
pub const NVARS: usize = 4;
/// Highest derivative order tracked.
pub const MAX_ORDER: usize = 4;
/// Number of monomials of total degree `<= MAX_ORDER` in four variables.
pub const NCOEF: usize = 70;

/// Coordinate slots, in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T = 0,
    R = 1,
    Phi = 2,
    Z = 3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::T, Var::R, Var::Phi, Var::Z];
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

struct Tables {
    monomials: [[u8; NVARS]; NCOEF],
    #[cfg(test)]
    degree: [u8; NCOEF],
    /// Dense lookup over exponent tuples with each entry `<= MAX_ORDER`.
    lookup: Vec<u16>,
    /// `len_for_order[k]` is the number of monomials of degree `<= k`.
    len_for_order: [usize; MAX_ORDER + 1],
    /// (lhs, rhs, out) index triples with deg(out) = deg(lhs) + deg(rhs),
    /// sorted by deg(out).
    products: Vec<(u16, u16, u16)>,
    products_for_order: [usize; MAX_ORDER + 1],
    /// For each variable and each target monomial `α`: index of `α + e_v`
    /// (only valid when deg(α) < MAX_ORDER).
    shift_up: [[u16; NCOEF]; NVARS],
}

const NO_INDEX: u16 = u16::MAX;

fn lookup_key(m: &[u8; NVARS]) -> usize {
    let base = MAX_ORDER + 1;
    m.iter().fold(0, |acc, &e| acc * base + e as usize)
}

fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(build_tables)
}

fn build_tables() -> Tables {
    let mut monomials = [[0u8; NVARS]; NCOEF];
    let mut degree = [0u8; NCOEF];
    let mut n = 0;
    for total in 0..=MAX_ORDER {
        // lexicographic order within a degree shell, t first
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                for c in (0..=total - a - b).rev() {
                    let d = total - a - b - c;
                    monomials[n] = [a as u8, b as u8, c as u8, d as u8];
                    degree[n] = total as u8;
                    n += 1;
                }
            }
        }
    }
    debug_assert_eq!(n, NCOEF);

    let mut lookup = vec![NO_INDEX; (MAX_ORDER + 1).pow(NVARS as u32)];
    for (i, m) in monomials.iter().enumerate() {
        lookup[lookup_key(m)] = i as u16;
    }

    let mut len_for_order = [0usize; MAX_ORDER + 1];
    for (k, slot) in len_for_order.iter_mut().enumerate() {
        *slot = degree.iter().filter(|&&d| d as usize <= k).count();
    }

    let mut products = Vec::new();
    for i in 0..NCOEF {
        for j in 0..NCOEF {
            if degree[i] + degree[j] > MAX_ORDER as u8 {
                continue;
            }
            let mut m = [0u8; NVARS];
            for v in 0..NVARS {
                m[v] = monomials[i][v] + monomials[j][v];
            }
            products.push((i as u16, j as u16, lookup[lookup_key(&m)]));
        }
    }
    products.sort_by_key(|&(_, _, k)| (degree[k as usize], k));
    let mut products_for_order = [0usize; MAX_ORDER + 1];
    for (k, slot) in products_for_order.iter_mut().enumerate() {
        *slot = products
            .iter()
            .filter(|&&(_, _, o)| degree[o as usize] as usize <= k)
            .count();
    }

    let mut shift_up = [[NO_INDEX; NCOEF]; NVARS];
    for v in 0..NVARS {
        for (i, m) in monomials.iter().enumerate() {
            if (degree[i] as usize) < MAX_ORDER {
                let mut up = *m;
                up[v] += 1;
                shift_up[v][i] = lookup[lookup_key(&up)];
            }
        }
    }

    Tables {
        monomials,
        #[cfg(test)]
        degree,
        lookup,
        len_for_order,
        products,
        products_for_order,
        shift_up,
    }
}

/// Number of stored coefficients for a series of the given order.
pub fn coefficient_count(order: usize) -> usize {
    tables().len_for_order[order]
}

/// Exponent tuple of the monomial stored at `index`.
pub fn monomial(index: usize) -> [u8; NVARS] {
    tables().monomials[index]
}

/// Storage index of a monomial, if its total degree is within range.
pub fn monomial_index(exponents: [u8; NVARS]) -> Option<usize> {
    if exponents.iter().any(|&e| e as usize > MAX_ORDER)
        || exponents.iter().map(|&e| e as usize).sum::<usize>() > MAX_ORDER
    {
        return None;
    }
    Some(tables().lookup[lookup_key(&exponents)] as usize)
}

/// Truncated Taylor series of a complex function of (t, r, φ, z).
#[derive(Clone, Copy)]
pub struct Series {
    order: u8,
    coef: [Complex64; NCOEF],
}

impl std::fmt::Debug for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = coefficient_count(self.order());
        f.debug_struct("Series")
            .field("order", &self.order)
            .field("coef", &&self.coef[..n])
            .finish()
    }
}

impl Series {
    pub fn constant(value: Complex64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "series order {order} exceeds {MAX_ORDER}");
        let mut coef = [ZERO; NCOEF];
        coef[0] = value;
        Series {
            order: order as u8,
            coef,
        }
    }

    pub fn real(value: f64, order: usize) -> Self {
        Self::constant(Complex64::new(value, 0.0), order)
    }

    /// The coordinate `var` itself, expanded around `at`.
    pub fn variable(var: Var, at: f64, order: usize) -> Self {
        let mut s = Self::real(at, order);
        if order >= 1 {
            let mut m = [0u8; NVARS];
            m[var as usize] = 1;
            s.coef[monomial_index(m).unwrap()] = ONE;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn value(&self) -> Complex64 {
        self.coef[0]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coef[..coefficient_count(self.order())]
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exponents: [u8; NVARS]) -> Option<Complex64> {
        let deg: usize = exponents.iter().map(|&e| e as usize).sum();
        if deg > self.order() {
            return None;
        }
        monomial_index(exponents).map(|i| self.coef[i])
    }

    /// Mixed partial derivative `∂^α f` at the expansion point.
    pub fn derivative(&self, exponents: [u8; NVARS]) -> Option<Complex64> {
        let fact: f64 = exponents
            .iter()
            .map(|&e| (1..=e as u32).product::<u32>() as f64)
            .product();
        self.coefficient(exponents).map(|c| c * fact)
    }

    /// Drops all terms above `order`.
    pub fn truncate(mut self, order: usize) -> Self {
        let order = order.min(self.order());
        let (lo, hi) = (coefficient_count(order), coefficient_count(self.order()));
        self.coef[lo..hi].fill(ZERO);
        self.order = order as u8;
        self
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients()
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(mut self, k: Complex64) -> Self {
        let n = coefficient_count(self.order());
        for c in &mut self.coef[..n] {
            *c *= k;
        }
        self
    }

    pub fn scale_real(self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    /// Partial derivative with respect to `var`; the result has order one lower.
    pub fn diff(&self, var: Var) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 series");
        let t = tables();
        let out_order = self.order() - 1;
        let mut out = Series::constant(ZERO, out_order);
        let v = var as usize;
        for i in 0..coefficient_count(out_order) {
            let src = t.shift_up[v][i] as usize;
            let factor = (t.monomials[i][v] + 1) as f64;
            out.coef[i] = self.coef[src] * factor;
        }
        out
    }

    /// Truncated product; the result order is the smaller of the two.
    pub fn mul_series(&self, rhs: &Series) -> Self {
        let order = self.order().min(rhs.order());
        let t = tables();
        let mut out = Series::constant(ZERO, order);
        for &(i, j, k) in &t.products[..t.products_for_order[order]] {
            out.coef[k as usize] += self.coef[i as usize] * rhs.coef[j as usize];
        }
        out
    }

    /// Evaluates `Σ_k taylor[k]·δ^k` where `δ = self − self.value()`, i.e.
    /// composes a univariate function given by its Taylor coefficients at
    /// `self.value()` with this series.
    pub fn compose(&self, taylor: &[Complex64; MAX_ORDER + 1]) -> Self {
        let order = self.order();
        let mut delta = *self;
        delta.coef[0] = ZERO;
        let mut acc = Series::constant(taylor[order], order);
        for k in (0..order).rev() {
            acc = acc.mul_series(&delta);
            acc.coef[0] += taylor[k];
        }
        acc
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let mut taylor = [ZERO; MAX_ORDER + 1];
        let mut fact = 1.0;
        for (k, slot) in taylor.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *slot = e / fact;
        }
        self.compose(&taylor)
    }

    /// Principal-branch power `self^s`.
    pub fn powc(&self, s: Complex64) -> Self {
        let u = self.value();
        let mut taylor = [ZERO; MAX_ORDER + 1];
        // binom(s, k) u^(s-k)
        let base = u.powc(s);
        let mut binom = ONE;
        for (k, slot) in taylor.iter_mut().enumerate() {
            if k > 0 {
                binom = binom * (s - (k as f64 - 1.0)) / k as f64;
            }
            *slot = binom * base / u.powi(k as i32);
        }
        self.compose(&taylor)
    }

    /// Integer power, exact for any sign of `n` (`u != 0` when `n < 0`).
    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Series::constant(ONE, self.order());
        }
        let u = self.value();
        let mut taylor = [ZERO; MAX_ORDER + 1];
        let mut binom = 1.0;
        for (k, slot) in taylor.iter_mut().enumerate() {
            if k > 0 {
                binom = binom * (n as f64 - (k as f64 - 1.0)) / k as f64;
            }
            *slot = if binom == 0.0 {
                ZERO
            } else {
                u.powi(n - k as i32) * binom
            };
        }
        self.compose(&taylor)
    }

    pub fn recip(&self) -> Self {
        self.powi(-1)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        self.powc(Complex64::new(0.5, 0.0))
    }

    pub fn ln(&self) -> Self {
        let u = self.value();
        let mut taylor = [ZERO; MAX_ORDER + 1];
        taylor[0] = u.ln();
        for (k, slot) in taylor.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            *slot = sign / (k as f64 * u.powi(k as i32));
        }
        self.compose(&taylor)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        // derivatives cycle s, c, -s, -c
        let cycle = [s, c, -s, -c];
        self.compose(&taylor_from_cycle(&cycle))
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.value().sin(), self.value().cos());
        let cycle = [c, -s, -c, s];
        self.compose(&taylor_from_cycle(&cycle))
    }
}

fn taylor_from_cycle(cycle: &[Complex64; 4]) -> [Complex64; MAX_ORDER + 1] {
    let mut taylor = [ZERO; MAX_ORDER + 1];
    let mut fact = 1.0;
    for (k, slot) in taylor.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *slot = cycle[k % 4] / fact;
    }
    taylor
}

impl Add for Series {
    type Output = Series;
    fn add(self, rhs: Series) -> Series {
        let order = self.order().min(rhs.order());
        let mut out = self.truncate(order);
        for (a, b) in out.coef[..coefficient_count(order)].iter_mut().zip(&rhs.coef) {
            *a += b;
        }
        out
    }
}

impl AddAssign for Series {
    fn add_assign(&mut self, rhs: Series) {
        *self = *self + rhs;
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, rhs: Series) -> Series {
        self + (-rhs)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale_real(-1.0)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, rhs: Series) -> Series {
        self.mul_series(&rhs)
    }
}

impl Mul<Complex64> for Series {
    type Output = Series;
    fn mul(self, rhs: Complex64) -> Series {
        self.scale(rhs)
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(self, rhs: f64) -> Series {
        self.scale_real(rhs)
    }
}

impl Add<Complex64> for Series {
    type Output = Series;
    fn add(mut self, rhs: Complex64) -> Series {
        self.coef[0] += rhs;
        self
    }
}

impl Add<f64> for Series {
    type Output = Series;
    fn add(self, rhs: f64) -> Series {
        self + Complex64::new(rhs, 0.0)
    }
}
