//! Principal-branch logarithms and powers, and argument tracking along paths.
//!
//! Every power in the library is `exp(c Log w)` with `Arg w` in `(-pi, pi]`.
//! When a quantity is followed along a path, [`ArgumentTracker`] counts how
//! many sheets its continuously continued argument sits away from the
//! principal one. A nonzero sheet is reported as a branch crossing; values are
//! never re-branched.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Principal argument in `(-pi, pi]`.
pub fn principal_arg<T: Real>(w: Complex<T>) -> T {
    let a = w.im.atan2(w.re);
    if a == -T::PI() {
        T::PI()
    } else {
        a
    }
}

pub fn principal_log<T: Real>(w: Complex<T>) -> Complex<T> {
    Complex::new(w.norm().ln(), principal_arg(w))
}

/// `w^c = exp(c Log w)`; `0^c = 0` when `Re c > 0`.
pub fn principal_power<T: Real>(w: Complex<T>, c: Complex<T>) -> Result<Complex<T>> {
    if w.is_zero() {
        return if c.re > T::zero() { Ok(Complex::zero()) } else { Err(Error::SingularPower) };
    }
    if c.is_zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    Ok((c * principal_log(w)).exp())
}

/// Incremental unwrapping of the argument of a sampled curve.
#[derive(Debug, Clone, Copy)]
pub struct ArgumentTracker<T> {
    last: Option<T>,
    sheet: i64,
    crossed: bool,
}

impl<T: Real> Default for ArgumentTracker<T> {
    fn default() -> Self {
        Self { last: None, sheet: 0, crossed: false }
    }
}

/// Argument bookkeeping for one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedArg<T> {
    pub principal: T,
    pub sheet: i64,
}

impl<T: Real> TrackedArg<T> {
    pub fn continuous(&self) -> T {
        self.principal + T::TAU() * T::from_i64(self.sheet).expect("sheet count fits")
    }
}

impl<T: Real> ArgumentTracker<T> {
    pub fn starting_on_sheet(sheet: i64) -> Self {
        Self { last: None, sheet, crossed: sheet != 0 }
    }

    /// Feeds the next sample. Errors on a zero sample or on a continuous
    /// increment of magnitude `pi`, where the sheet cannot be decided.
    pub fn push(&mut self, w: Complex<T>, index: usize) -> Result<TrackedArg<T>> {
        if w.is_zero() {
            return Err(Error::SingularPath { index });
        }
        let arg = principal_arg(w);
        if let Some(last) = self.last {
            let mut delta = arg - last;
            if delta > T::PI() {
                self.sheet -= 1;
                delta = delta - T::TAU();
            } else if delta < -T::PI() {
                self.sheet += 1;
                delta = delta + T::TAU();
            }
            if delta.abs() >= T::PI() * (T::one() - T::epsilon() * T::from_f64(16.0).unwrap()) {
                return Err(Error::UndersampledPath { index: index.saturating_sub(1) });
            }
        }
        self.last = Some(arg);
        self.crossed |= self.sheet != 0;
        Ok(TrackedArg { principal: arg, sheet: self.sheet })
    }

    pub fn sheet(&self) -> i64 {
        self.sheet
    }

    /// True once any sample sat off the principal sheet.
    pub fn crossed(&self) -> bool {
        self.crossed
    }
}

/// A discretized path with the sheet its first sample is taken on.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchedPath<T> {
    pub samples: Vec<Complex<T>>,
    pub winding_offset: i64,
}

impl<T> BranchedPath<T> {
    pub fn new(samples: Vec<Complex<T>>) -> Self {
        Self { samples, winding_offset: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPowers<T> {
    pub values: Vec<Complex<T>>,
    /// True iff some continued value differs from the principal power.
    pub crossing: bool,
    /// Sheet of the final sample.
    pub winding_offset: i64,
}

/// `w^c` continued along the path from its first sample.
pub fn continuous_power_along_path<T: Real>(path: &BranchedPath<T>, c: Complex<T>) -> Result<PathPowers<T>> {
    let mut tracker = ArgumentTracker::starting_on_sheet(path.winding_offset);
    let mut values = Vec::with_capacity(path.samples.len());
    for (i, &w) in path.samples.iter().enumerate() {
        let tracked = tracker.push(w, i)?;
        let log = Complex::new(w.norm().ln(), tracked.continuous());
        values.push((c * log).exp());
    }
    Ok(PathPowers { values, crossing: tracker.crossed(), winding_offset: tracker.sheet() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn principal_power_examples() {
        for g in [c(2.0, 1.0), c(-0.3, 5.0), c(0.5, 0.0)] {
            assert_eq!(principal_power(c(1.0, 0.0), g).unwrap(), c(1.0, 0.0));
        }
        let root = principal_power(c(-1.0, 0.0), c(0.5, 0.0)).unwrap();
        assert!((root - c(0.0, 1.0)).norm() < 1e-15);
        // negative real axis approached from below still uses Arg = pi
        let root = principal_power(c(-1.0, -0.0), c(0.5, 0.0)).unwrap();
        assert!((root - c(0.0, 1.0)).norm() < 1e-15);
        // (0.25)^(2+i) = exp((2+i) ln 0.25) = 0.0625 (cos ln 0.25 + i sin ln 0.25)
        let v = principal_power(c(0.25, 0.0), c(2.0, 1.0)).unwrap();
        let l = 0.25f64.ln();
        assert_relative_eq!(v.re, 0.0625 * l.cos(), max_relative = 1e-14);
        assert_relative_eq!(v.im, 0.0625 * l.sin(), max_relative = 1e-14);
    }

    #[test]
    fn zero_base() {
        assert_eq!(principal_power(c(0.0, 0.0), c(0.5, 3.0)).unwrap(), c(0.0, 0.0));
        assert!(matches!(principal_power(c(0.0, 0.0), c(0.0, 1.0)), Err(Error::SingularPower)));
        assert!(matches!(principal_power(c(0.0, 0.0), c(-1.0, 0.0)), Err(Error::SingularPower)));
    }

    #[test]
    fn constant_path_has_no_crossing() {
        let path = BranchedPath::new(vec![c(1.0, 0.0); 10]);
        let out = continuous_power_along_path(&path, c(0.3, 0.7)).unwrap();
        assert!(out.values.iter().all(|v| *v == c(1.0, 0.0)));
        assert!(!out.crossing);
    }

    #[test]
    fn loop_around_origin_crosses() {
        let samples = (0..=64).map(|k| Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / 64.0)).collect();
        let out = continuous_power_along_path(&BranchedPath::new(samples), c(0.5, 0.0)).unwrap();
        assert!(out.crossing);
        assert_eq!(out.winding_offset, 1);
        // the continued square root ends at -1
        assert!((out.values[64] - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn radial_path_matches_principal_power() {
        let samples: Vec<_> = (0..=80).map(|k| c(0.1 + 0.01 * k as f64, 0.0)).collect();
        let g = c(1.0, 1.0);
        let out = continuous_power_along_path(&BranchedPath::new(samples.clone()), g).unwrap();
        assert!(!out.crossing);
        for (w, v) in samples.iter().zip(&out.values) {
            assert!((principal_power(*w, g).unwrap() - v).norm() <= 1e-15 * v.norm());
        }
    }

    #[test]
    fn path_errors() {
        let err = continuous_power_along_path(&BranchedPath::new(vec![c(1.0, 0.0), c(0.0, 0.0)]), c(0.5, 0.0));
        assert_eq!(err.unwrap_err(), Error::SingularPath { index: 1 });
        let err = continuous_power_along_path(&BranchedPath::new(vec![c(1.0, 0.0), c(-1.0, 0.0)]), c(0.5, 0.0));
        assert_eq!(err.unwrap_err(), Error::UndersampledPath { index: 0 });
    }

    fn nonzero() -> impl Strategy<Value = Complex<f64>> {
        (1e-3f64..10.0, -3.1f64..3.1).prop_map(|(r, t)| Complex::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn unit_and_zero_exponents(w in nonzero()) {
            let one = principal_power(w, c(1.0, 0.0)).unwrap();
            prop_assert!((one - w).norm() <= 1e-14 * w.norm());
            prop_assert_eq!(principal_power(w, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        }

        #[test]
        fn positive_scaling_factors_out(w in nonzero(), r in 1e-3f64..10.0, g in (-3.0f64..3.0, -3.0f64..3.0)) {
            let g = c(g.0, g.1);
            let lhs = principal_power(w * r, g).unwrap();
            let rhs = principal_power(c(r, 0.0), g).unwrap() * principal_power(w, g).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1e-300));
        }

        #[test]
        fn modulus_identity(w in nonzero(), g in (-3.0f64..3.0, -3.0f64..3.0)) {
            let g = c(g.0, g.1);
            let v = principal_power(w, g).unwrap();
            let expected = w.norm().powf(g.re) * (-g.im * principal_arg(w)).exp();
            prop_assert!((v.norm() - expected).abs() <= 1e-12 * expected);
        }
    }
}
