//! Quasiconformal extension of the chain across the unit circle, sampled
//! Beltrami coefficients, and the constants of the k-strengthened criterion.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::chain_eval;
use crate::error::{Error, Result};
use crate::params::{FunctionSet, ParameterSet};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{lit, Real};

/// Smallest chain time used outside the disk.
pub const SEAM_CLAMP: f64 = 1e-6;
/// Default difference step of `beltrami_estimate`.
pub const DEFAULT_BELTRAMI_STEP: f64 = 1e-5;
const DERIVATIVE_FLOOR: f64 = 1e-12;
const CONTAINMENT_TOLERANCE: f64 = 1e-12;

/// Roots of the two quadratic conditions and the resulting extension
/// constant `l`.
///
/// `L2` is `None` at `a = 1` (the root runs off to minus infinity), the
/// script pair `curlyL2` likewise at `a = 1` and at `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionConstants<T> {
    pub k: T,
    pub a: T,
    #[serde(rename = "L1")]
    pub l1: T,
    #[serde(rename = "L2")]
    pub l2: Option<T>,
    #[serde(rename = "curlyL1")]
    pub curly_l1: T,
    #[serde(rename = "curlyL2")]
    pub curly_l2: Option<T>,
    pub l: T,
}

pub fn extension_constants<T: Real>(k: T, a: T) -> Result<ExtensionConstants<T>> {
    if !(k >= T::zero() && k < T::one()) {
        return Err(Error::ParameterOutOfRange { name: "k".into(), detail: format!("{k} is not in [0, 1)") });
    }
    if !(a > T::zero() && a.is_finite()) {
        return Err(Error::ParameterOutOfRange { name: "a".into(), detail: format!("{a} is not > 0") });
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let d = (one - a).abs();
    // |1-a|^2 and |1-a^2| share the factor |1-a|, which cancels
    let l1 = (d + k * (one + a)) / ((one + a) + k * d);
    let l2 = (d > T::zero()).then(|| -(one + a) / d);
    let root = (lit::<T>(4.0) * a * a + (one - a * a).powi(2) * k * k).sqrt();
    // rationalized so that k = 0 and a = 1 need no special case
    let curly_l1 = k * (one + a).powi(2) / (two * a + root);
    let curly_l2 = (k > T::zero() && d > T::zero()).then(|| -(two * a + root) / (k * d * d));
    Ok(ExtensionConstants { k, a, l1, l2, curly_l1, curly_l2, l: l1 })
}

/// Closed form of `l - k`.
pub fn excess_over_k<T: Real>(k: T, a: T) -> T {
    let one = T::one();
    let s = (one - a).powi(2);
    (one - k * k) * s / ((one - a * a).abs() + k * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Containment<T> {
    pub contained: bool,
    pub slack: T,
    pub center: T,
    pub radius: T,
}

/// Whether the criterion disk `|G - (m-1)/2| <= k(m+1)/2` lies inside the
/// preimage of `|w| <= l` under `w = ((1+a)G + 1 - ma) / ((1-a)G + 1 + ma)`.
///
/// `slack` is `radius - (distance of centers + k(m+1)/2)`; containment is
/// accepted down to a slack of `-1e-12`.
pub fn disk_containment_check<T: Real>(k: T, a: T, l: T, m: T) -> Result<Containment<T>> {
    if !(l >= T::zero() && l < T::one()) {
        return Err(Error::ParameterOutOfRange { name: "l".into(), detail: format!("{l} is not in [0, 1)") });
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let den = two * a * (one + l * l) + (one - l * l) * (one + a * a);
    if !(den > T::zero()) {
        return Err(Error::Degenerate(format!("containment denominator {den} is not positive")));
    }
    let center = ((one + m * a) * (one - a) * l * l - (one - m * a) * (one + a)) / den;
    let radius = two * a * (m + one) * l / den;
    let distance = (center - (m - one) / two).abs();
    let slack = radius - (distance + k * (m + one) / two);
    Ok(Containment { contained: slack >= -lit::<T>(CONTAINMENT_TOLERANCE), slack, center, radius })
}

/// The extension `F(z) = L(z, 0)` inside the disk and
/// `L(z/|z|, ln|z|)` outside, with the time clamped to at least `1e-6`.
pub fn becker_extend<T: Real>(
    z: Complex<T>,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<Complex<T>> {
    let r = z.norm();
    if !r.is_finite() {
        return Err(Error::Domain("extension point must be finite".into()));
    }
    let value = if r < T::one() {
        chain_eval(z, T::zero(), p, fs, q)?
    } else {
        chain_eval(z / r, r.ln().max(lit(SEAM_CLAMP)), p, fs, q)?
    };
    Ok(value.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeltramiSample<T> {
    pub z: Complex<T>,
    pub mu: Complex<T>,
    pub modulus: T,
}

/// `mu = dF/dzbar / dF/dz` from one central-difference stencil of step `h`.
pub fn beltrami_estimate<T: Real>(
    z: Complex<T>,
    h: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<BeltramiSample<T>> {
    if !(h > T::zero()) {
        return Err(Error::Invalid(format!("difference step must be positive, got {h}")));
    }
    if !(z.norm() > T::one() + lit::<T>(2.0) * h) {
        return Err(Error::Domain(format!("Beltrami samples need |z| > 1 + 2h, got |z| = {}", z.norm())));
    }
    let two = lit::<T>(2.0);
    let i = Complex::new(T::zero(), T::one());
    let ext = |w: Complex<T>| becker_extend(w, p, fs, q);
    let dx = (ext(z + h)? - ext(z - h)?) / (two * h);
    let dy = (ext(z + i * h)? - ext(z - i * h)?) / (two * h);
    let dz = (dx - i * dy) / two;
    let dzbar = (dx + i * dy) / two;
    if dz.norm() < lit(DERIVATIVE_FLOOR) {
        return Err(Error::Degenerate(format!("|dF/dz| < {DERIVATIVE_FLOOR:e} at z = {z}")));
    }
    let mu = dzbar / dz;
    Ok(BeltramiSample { z, mu, modulus: mu.norm() })
}

/// Points `r_i e^(i theta_j)` with `rings` radii spaced evenly over
/// `[r_min, r_max]` and `angles` angles each, radius-major.
pub fn ring_points<T: Real>(r_min: T, r_max: T, rings: usize, angles: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(rings * angles);
    for i in 0..rings {
        let s = if rings == 1 { T::zero() } else { lit::<T>(i as f64) / lit::<T>((rings - 1) as f64) };
        let r = r_min + (r_max - r_min) * s;
        for j in 0..angles {
            out.push(Complex::from_polar(r, T::TAU() * lit::<T>(j as f64) / lit::<T>(angles as f64)));
        }
    }
    out
}

/// Beltrami samples at every point, in input order.
pub fn beltrami_samples<T: Real>(
    points: &[Complex<T>],
    h: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<Vec<BeltramiSample<T>>> {
    points.par_iter().map(|&z| beltrami_estimate(z, h, p, fs, q)).collect()
}
