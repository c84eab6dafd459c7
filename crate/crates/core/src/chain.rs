//! The subordination chain built from the operator, its transfer functions,
//! and numerical probes of the chain properties.
//!
//! With `zeta = e^(-a t) z` and `E = e^(-(m+1) a t gamma)` the chain is
//!
//! ```text
//! L(z, t) = z e^(m a t) [ E I(zeta) + (1 - E) h(zeta) ]^(1/gamma),
//! I(w)    = gamma * int_0^1 s^(gamma-1) h(s w) ds,
//! ```
//!
//! obtained by pulling the factor `z^gamma e^(m a t gamma)` out of the
//! bracket. Taking `e^(m a t)` outside the root keeps `L(z, t) / z -> e^(m a t)`
//! continuous in `t`, which a principal root of the whole bracket would not
//! when `Im gamma != 0`.

use num_complex::Complex;
use num_traits::Zero;

use crate::branch::{principal_arg, principal_power};
use crate::criterion::bracket;
use crate::error::{Error, Result};
use crate::operator::{bracket_integral, integrand};
use crate::params::{FunctionSet, ParameterSet};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{is_finite, lit, real, Real};
use crate::winding::closed_curve_winding;

/// Step of the central differences in `z` (each axis).
pub const Z_STEP: f64 = 1e-5;
/// Step of the central difference in `t`.
pub const T_STEP: f64 = 1e-4;
/// `pde_residual` evaluates at `max(t, T_FLOOR)`.
pub const T_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainEvaluation<T> {
    pub value: Complex<T>,
    pub branch_crossing: bool,
}

/// One evaluation record: `L`, `G`, `w`, `p` at `(z, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainPoint<T> {
    pub z: Complex<T>,
    pub t: T,
    pub value: Complex<T>,
    pub g: Complex<T>,
    pub w: Complex<T>,
    pub p: Complex<T>,
    pub branch_crossing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer<T> {
    pub g: Complex<T>,
    pub w: Complex<T>,
    pub p: Complex<T>,
}

fn check_point<T: Real>(z: Complex<T>, t: T) -> Result<()> {
    if !(t >= T::zero() && t.is_finite()) {
        return Err(Error::Domain(format!("chain time must be finite and >= 0, got {t}")));
    }
    let r = z.norm();
    if !is_finite(z) || r > T::one() + lit::<T>(4.0) * T::epsilon() || (r >= T::one() && t.is_zero()) {
        return Err(Error::Domain(format!("chain needs |z| < 1, or |z| <= 1 with t > 0; got |z| = {r}, t = {t}")));
    }
    Ok(())
}

/// `L(z, t)`; `L(z, 0)` is the operator value.
pub fn chain_eval<T: Real>(
    z: Complex<T>,
    t: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<ChainEvaluation<T>> {
    p.require_positive_gamma()?;
    check_point(z, t)?;
    if z.is_zero() {
        return Ok(ChainEvaluation { value: Complex::zero(), branch_crossing: false });
    }
    let at = p.a * t;
    let zeta = z * (-at).exp();
    let inner = bracket_integral(zeta, p, fs, q)?;
    let decay = (-p.gamma * (p.m + T::one()) * at).exp();
    let mut rest = inner.value * decay;
    if !t.is_zero() {
        rest = rest + integrand(zeta, p, fs)?.value * (real(T::one()) - decay);
    }
    let on_cut = rest.re < T::zero() && rest.im.abs() <= lit::<T>(1e-12) * rest.norm();
    let root = principal_power(rest, real(T::one()) / p.gamma)?;
    Ok(ChainEvaluation { value: z * (p.m * at).exp() * root, branch_crossing: inner.branch_crossing || on_cut })
}

/// `G`, `w = ((1+a)G + 1 - ma) / ((1-a)G + 1 + ma)` and `p = (1+w)/(1-w)`.
pub fn transfer_functions<T: Real>(
    z: Complex<T>,
    t: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
) -> Result<Transfer<T>> {
    check_point(z, t)?;
    let at = p.a * t;
    let zeta = z * (-at).exp();
    let damping = real(T::one()) - (-p.gamma * (p.m + T::one()) * at).exp();
    let g = bracket(zeta, p, fs)? / p.gamma * damping;
    transfer_from_g(g, p.m, p.a)
}

/// `w` and `p` from a given `G`.
pub fn transfer_from_g<T: Real>(g: Complex<T>, m: T, a: T) -> Result<Transfer<T>> {
    let one = T::one();
    let num = g * (one + a) + one - m * a;
    let den = g * (one - a) + one + m * a;
    let scale = g.norm() * (one - a).abs() + one + m * a;
    if den.norm() <= lit::<T>(64.0) * T::epsilon() * scale {
        return Err(Error::TransferPole);
    }
    let w = num / den;
    if (real(one) - w).norm() <= lit::<T>(64.0) * T::epsilon() {
        return Err(Error::PUndefined);
    }
    Ok(Transfer { g, w, p: (real(one) + w) / (real(one) - w) })
}

pub fn chain_point<T: Real>(
    z: Complex<T>,
    t: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<ChainPoint<T>> {
    let l = chain_eval(z, t, p, fs, q)?;
    let tr = transfer_functions(z, t, p, fs)?;
    Ok(ChainPoint { z, t, value: l.value, g: tr.g, w: tr.w, p: tr.p, branch_crossing: l.branch_crossing })
}

/// Relative residual `|z L_z - p L_t| / (|z L_z| + |p L_t|)` of the Loewner
/// equation, both derivatives by central differences.
pub fn pde_residual<T: Real>(
    z: Complex<T>,
    t: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<T> {
    let r = z.norm();
    if !(r > T::zero() && r < T::one()) {
        return Err(Error::Domain(format!("pde residual needs 0 < |z| < 1, got {r}")));
    }
    let t = t.max(lit(T_FLOOR));
    let hz = lit::<T>(Z_STEP);
    let ht = lit::<T>(T_STEP);
    let l = |z: Complex<T>, t: T| chain_eval(z, t, p, fs, q).map(|e| e.value);
    let two = lit::<T>(2.0);
    let dx = (l(z + hz, t)? - l(z - hz, t)?) / (two * hz);
    let iy = Complex::new(T::zero(), hz);
    let dy = (l(z + iy, t)? - l(z - iy, t)?) / (two * hz);
    let lz = (dx - Complex::new(T::zero(), T::one()) * dy) / two;
    let lt = (l(z, t + ht)? - l(z, t - ht)?) / (two * ht);
    let pv = transfer_functions(z, t, p, fs)?.p;
    let left = z * lz;
    let right = pv * lt;
    let denom = left.norm() + right.norm();
    if left.norm() < lit(1e-14) && right.norm() < lit(1e-14) {
        return Err(Error::Degenerate(format!("both sides of the Loewner equation vanish at z = {z}, t = {t}")));
    }
    Ok((left - right).norm() / denom)
}

/// Checks `L(U_rho, t) ⊆ L(U_rho, s)` at `samples` points of `|zeta| = rho/2`
/// by their winding numbers about the image of `|z| = rho` at time `s`.
#[allow(clippy::too_many_arguments)]
pub fn subordination_probe<T: Real>(
    t: T,
    s: T,
    rho: T,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    samples: usize,
    q: &QuadratureConfig<T>,
) -> Result<bool> {
    if !(t >= T::zero() && t <= s) {
        return Err(Error::Domain(format!("subordination probe needs 0 <= t <= s, got t = {t}, s = {s}")));
    }
    if !(rho > T::zero() && rho < T::one()) {
        return Err(Error::Domain(format!("rho must lie in (0, 1), got {rho}")));
    }
    let half = rho / lit(2.0);
    let targets = (0..samples.max(1))
        .map(|j| {
            let theta = T::TAU() * lit::<T>(j as f64) / lit::<T>(samples.max(1) as f64);
            chain_eval(Complex::from_polar(half, theta), t, p, fs, q).map(|e| e.value)
        })
        .collect::<Result<Vec<_>>>()?;
    // chain values on the curve are cached per parameter so refinement stays cheap
    let curve_error = std::cell::RefCell::new(None);
    let curve = |theta: T| match chain_eval(Complex::from_polar(rho, theta), s, p, fs, q) {
        Ok(e) => e.value,
        Err(e) => {
            curve_error.borrow_mut().get_or_insert(e);
            Complex::new(T::nan(), T::nan())
        }
    };
    let windings = closed_curve_winding(curve, &targets, 128);
    if let Some(e) = curve_error.into_inner() {
        return Err(e);
    }
    Ok(windings?.iter().all(|&w| w == 1))
}

/// Sup of `|w(z, t)|` over a polar grid of `|z| <= radius` and `t` in `[0, t_max]`.
pub fn transfer_sup<T: Real>(
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    radius: T,
    z_points: usize,
    t_max: T,
    t_points: usize,
) -> Result<(T, Complex<T>, T)> {
    let mut best = (T::zero(), Complex::zero(), T::zero());
    let rings = (z_points / 8).max(1);
    let per_ring = z_points.div_ceil(rings);
    for i in 0..rings {
        let r = radius * lit::<T>((i + 1) as f64) / lit::<T>(rings as f64);
        for k in 0..per_ring {
            let z = Complex::from_polar(r, T::TAU() * lit::<T>(k as f64) / lit::<T>(per_ring as f64));
            for j in 0..t_points {
                let t = t_max * lit::<T>(j as f64) / lit::<T>((t_points - 1).max(1) as f64);
                let w = transfer_functions(z, t, p, fs)?.w.norm();
                if w > best.0 {
                    best = (w, z, t);
                }
            }
        }
    }
    Ok(best)
}

/// Argument of `z` in `(-pi, pi]`, re-exported for grid builders.
pub fn arg<T: Real>(z: Complex<T>) -> T {
    principal_arg(z)
}
