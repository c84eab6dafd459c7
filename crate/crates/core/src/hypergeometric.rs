//! Gauss hypergeometric series and the closed form of the `(z + z^2/4,
//! z + z^2/2, z)` operator.

use num_complex::Complex;
use num_traits::Zero;

use crate::branch::principal_power;
use crate::error::{Error, Result};
use crate::params::ParameterSet;
use crate::scalar::{is_finite, lit, real, Real};

const MAX_TERMS: usize = 100_000;

/// `2F1(a, b; c; w)` by its Gauss series, `|w| < 1`.
///
/// Summation stops after two consecutive terms below `1e-16 |partial sum|`
/// (or the scalar's resolution, whichever is coarser), or when a
/// non-positive integer `a` or `b` terminates the series.
pub fn hyp2f1<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, w: Complex<T>) -> Result<Complex<T>> {
    if c.im.is_zero() && c.re <= T::zero() && c.re.fract().is_zero() {
        return Err(Error::HypergeometricPole);
    }
    if !is_finite(w) || w.norm() >= T::one() {
        return Err(Error::Domain(format!("2F1 series needs |w| < 1, got {}", w.norm())));
    }
    let tol = lit::<T>(1e-16).max(T::epsilon() / lit(4.0));
    let mut term = real(T::one());
    let mut sum = term;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = lit::<T>(n as f64);
        term = term * (a + nf) * (b + nf) / ((c + nf) * (nf + T::one())) * w;
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum + term;
        if term.norm() < tol * sum.norm() {
            small += 1;
            if small == 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence { what: "2F1 series", limit: MAX_TERMS, unit: "terms" })
}

/// `z * [2F1(gamma, -(alpha+beta); 1+gamma; -z/2)]^(1/gamma)`, the operator
/// for `f = z + z^2/4`, `g = z + z^2/2`, `phi = z`.
pub fn example31_closed_form<T: Real>(z: Complex<T>, p: &ParameterSet<T>) -> Result<Complex<T>> {
    p.require_positive_gamma()?;
    if z.norm() >= T::one() {
        return Err(Error::Domain(format!("closed form needs |z| < 1, got {}", z.norm())));
    }
    if z.is_zero() {
        return Ok(Complex::zero());
    }
    let one = real(T::one());
    let f21 = hyp2f1(p.gamma, -(p.alpha + p.beta), one + p.gamma, -z / lit::<T>(2.0))?;
    Ok(z * principal_power(f21, one / p.gamma)?)
}
