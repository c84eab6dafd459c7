//! Normalized analytic functions stored as truncated power series.
//!
//! A [`SeriesFunction`] holds `c_1 .. c_N` of `f(z) = sum c_n z^n` (the
//! constant term is always zero). Derivatives are exact for the stored
//! polynomial. Logarithmic derivatives `z h'(z) / h(z)` are evaluated through
//! the reduced series `q(z) = h(z) / z = sum c_n z^(n-1)`, which removes the
//! forced zero at the origin: `z h'/h = 1 + z q'/q`.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::grid::DiskGrid;
use crate::scalar::{is_finite, lit, to_c64, Real};
use crate::winding;

/// Default tolerance on the coefficient tail `|c_N| r^N` at the evaluation radius.
pub const TRUNCATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesFunction<T> {
    coefficients: Vec<Complex<T>>,
    label: String,
    truncated: bool,
}

/// Values of `s`, `s'` and `s''` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub value: Complex<T>,
    pub first: Complex<T>,
    pub second: Complex<T>,
    /// Set when the series is a truncation and `|c_N| |z|^N` exceeds
    /// [`TRUNCATION_TOLERANCE`].
    pub truncation_warning: bool,
}

/// `z f''/f'` and `z g'/g - z phi'/phi` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionTerms<T> {
    pub pre_schwarzian: Complex<T>,
    pub log_ratio: Complex<T>,
}

impl<T: Real> SeriesFunction<T> {
    /// Builds an exact polynomial from `c_1 .. c_N`.
    pub fn new(coefficients: Vec<Complex<T>>, label: impl Into<String>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::Invalid("a series needs at least c1".into()));
        }
        if let Some(i) = coefficients.iter().position(|c| !is_finite(*c)) {
            return Err(Error::Invalid(format!("coefficient c{} is not finite", i + 1)));
        }
        Ok(Self { coefficients, label: label.into(), truncated: false })
    }

    /// Like [`SeriesFunction::new`] but insists on `c_1 = 1` (class A).
    pub fn normalized(coefficients: Vec<Complex<T>>, label: impl Into<String>) -> Result<Self> {
        let s = Self::new(coefficients, label)?;
        if !s.is_normalized() {
            return Err(Error::Invalid("c1 must equal 1".into()));
        }
        Ok(s)
    }

    pub fn identity() -> Self {
        Self { coefficients: vec![Complex::new(T::one(), T::zero())], label: "identity".into(), truncated: false }
    }

    /// Marks the series as the truncation of an infinite expansion, which
    /// enables the tail-bound warning.
    pub fn into_truncated(mut self) -> Self {
        self.truncated = true;
        self
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_normalized(&self) -> bool {
        self.coefficients[0] == Complex::new(T::one(), T::zero())
    }

    /// `|c_N| r^N`.
    pub fn tail_bound(&self, radius: T) -> T {
        let n = self.coefficients.len();
        self.coefficients[n - 1].norm() * radius.powi(n as i32)
    }

    pub fn tail_exceeds(&self, radius: T) -> bool {
        self.truncated && self.tail_bound(radius) > lit(TRUNCATION_TOLERANCE)
    }

    /// Horner evaluation of `s`, `s'`, `s''` in one pass.
    pub fn eval_with_derivatives(&self, z: Complex<T>) -> Result<Evaluation<T>> {
        check_closed_disk(z)?;
        let (value, first, second) = self.horner(z);
        Ok(Evaluation { value, first, second, truncation_warning: self.tail_exceeds(z.norm()) })
    }

    pub(crate) fn horner(&self, z: Complex<T>) -> (Complex<T>, Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut d1 = Complex::zero();
        let mut d2 = Complex::zero();
        for c in self.coefficients.iter().rev() {
            d2 = d2 * z + d1;
            d1 = d1 * z + p;
            p = p * z + c;
        }
        // account for the implicit c_0 = 0
        d2 = d2 * z + d1;
        d1 = d1 * z + p;
        p = p * z;
        (p, d1, d2 * lit::<T>(2.0))
    }

    /// `q(z) = s(z)/z` and `q'(z)`, evaluated from the shifted coefficients.
    pub fn reduced(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut q = Complex::zero();
        let mut dq = Complex::zero();
        for c in self.coefficients.iter().rev() {
            dq = dq * z + q;
            q = q * z + c;
        }
        (q, dq)
    }

    /// `z s'(z)/s(z)`, with its limit `1` at the origin. `None` when `s` vanishes at `z != 0`.
    pub fn log_derivative(&self, z: Complex<T>) -> Option<Complex<T>> {
        let (q, dq) = self.reduced(z);
        if q.norm() <= vanishing_floor::<T>() {
            return None;
        }
        Some(Complex::new(T::one(), T::zero()) + z * dq / q)
    }
}

pub(crate) fn vanishing_floor<T: Real>() -> T {
    T::epsilon() * T::epsilon()
}

fn check_closed_disk<T: Real>(z: Complex<T>) -> Result<()> {
    if !is_finite(z) || z.norm() > T::one() + lit::<T>(4.0) * T::epsilon() {
        return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
    }
    Ok(())
}

/// `z f''(z) / f'(z)`.
pub fn pre_schwarzian<T: Real>(f: &SeriesFunction<T>, z: Complex<T>) -> Result<Complex<T>> {
    check_closed_disk(z)?;
    let (_, df, d2f) = f.horner(z);
    if df.norm() <= vanishing_floor::<T>() {
        return Err(Error::DerivativeVanishes { witness: to_c64(z) });
    }
    Ok(z * d2f / df)
}

/// The criterion terms of `(f, g, phi)` at `z`.
pub fn criterion_terms<T: Real>(
    f: &SeriesFunction<T>,
    g: &SeriesFunction<T>,
    phi: &SeriesFunction<T>,
    z: Complex<T>,
) -> Result<CriterionTerms<T>> {
    let pre_schwarzian = pre_schwarzian(f, z)?;
    let lg = g.log_derivative(z).ok_or_else(|| Error::Hypothesis(format!("g vanishes at z = {}", to_c64(z))))?;
    let lphi = phi.log_derivative(z).ok_or_else(|| Error::Hypothesis(format!("phi vanishes at z = {}", to_c64(z))))?;
    Ok(CriterionTerms { pre_schwarzian, log_ratio: lg - lphi })
}

/// Outcome of [`nonvanishing_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonvanishingReport<T> {
    pub nonvanishing: bool,
    /// Sample with the smallest `|s(z)/z|`; reported when the check fails.
    pub witness: Option<Complex<T>>,
    pub min_modulus: T,
}

/// Default floor for `|s(z)/z|` in [`nonvanishing_check`].
pub const NONVANISHING_FLOOR: f64 = 1e-8;

/// Samples `|s(z)/z|` over the grid points with `|z| <= radius`.
///
/// A zero strictly inside the sampled region that the grid misses is still
/// caught: the winding number of `s(z)/z` around the circle `|z| = radius`
/// counts its zeros. A pass is evidence, not proof.
pub fn nonvanishing_check<T: Real>(
    s: &SeriesFunction<T>,
    radius: T,
    grid: &DiskGrid<T>,
) -> Result<NonvanishingReport<T>> {
    if !(radius > T::zero() && radius < T::one()) {
        return Err(Error::Domain(format!("nonvanishing radius {radius} must lie in (0, 1)")));
    }
    let floor = lit::<T>(NONVANISHING_FLOOR);
    let mut best = (T::infinity(), Complex::zero());
    for z in grid.points().into_iter().filter(|z| z.norm() <= radius) {
        let m = s.reduced(z).0.norm();
        if m < best.0 {
            best = (m, z);
        }
    }
    let mut nonvanishing = best.0 > floor;
    if nonvanishing {
        let circle = |theta: T| s.reduced(Complex::from_polar(radius, theta)).0;
        nonvanishing = matches!(winding::closed_curve_winding(circle, &[Complex::zero()], 64), Ok(w) if w[0] == 0);
    }
    Ok(NonvanishingReport { nonvanishing, witness: (!nonvanishing).then_some(best.1), min_modulus: best.0 })
}
