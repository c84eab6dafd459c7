use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{is_finite, Real};
use crate::series::SeriesFunction;

/// `(alpha, beta, gamma, m, a, k)`.
///
/// `k = None` means "univalence only": the k-strengthened criterion then
/// uses the plain bound `(m + 1) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterSet<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub gamma: Complex<T>,
    pub m: T,
    pub a: T,
    pub k: Option<T>,
}

impl<T: Real> ParameterSet<T> {
    /// Parameters with `m = a = 1` and no `k`.
    pub fn new(alpha: Complex<T>, beta: Complex<T>, gamma: Complex<T>) -> Result<Self> {
        let p = Self { alpha, beta, gamma, m: T::one(), a: T::one(), k: None };
        p.validate()?;
        Ok(p)
    }

    pub fn with_m(mut self, m: T) -> Result<Self> {
        self.m = m;
        self.validate().map(|_| self)
    }

    pub fn with_a(mut self, a: T) -> Result<Self> {
        self.a = a;
        self.validate().map(|_| self)
    }

    pub fn with_k(mut self, k: T) -> Result<Self> {
        self.k = Some(k);
        self.validate().map(|_| self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(is_finite(self.alpha) && is_finite(self.beta) && is_finite(self.gamma)) {
            return Err(Error::Invalid("alpha, beta and gamma must be finite".into()));
        }
        if self.gamma.is_zero() {
            return Err(Error::ZeroGamma);
        }
        if !(self.m >= T::zero() && self.m.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "m".into(), detail: format!("{} is not >= 0", self.m) });
        }
        if !(self.a > T::zero() && self.a.is_finite()) {
            return Err(Error::ParameterOutOfRange { name: "a".into(), detail: format!("{} is not > 0", self.a) });
        }
        if let Some(k) = self.k {
            if !(k >= T::zero() && k < T::one()) {
                return Err(Error::ParameterOutOfRange { name: "k".into(), detail: format!("{k} is not in [0, 1)") });
            }
        }
        Ok(())
    }

    /// `k`, or `1` when unset.
    pub fn k_or_one(&self) -> T {
        self.k.unwrap_or_else(T::one)
    }

    pub(crate) fn require_positive_gamma(&self) -> Result<()> {
        if self.gamma.re > T::zero() {
            Ok(())
        } else {
            Err(Error::NonPositiveGamma(self.gamma.re.to_f64().unwrap_or(f64::NAN)))
        }
    }
}

/// The three class-A inputs `(f, g, phi)` of the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSet<T> {
    pub f: SeriesFunction<T>,
    pub g: SeriesFunction<T>,
    pub phi: SeriesFunction<T>,
}

impl<T: Real> FunctionSet<T> {
    pub fn new(f: SeriesFunction<T>, g: SeriesFunction<T>, phi: SeriesFunction<T>) -> Self {
        Self { f, g, phi }
    }

    pub fn identity() -> Self {
        Self::new(SeriesFunction::identity(), SeriesFunction::identity(), SeriesFunction::identity())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, &SeriesFunction<T>)> {
        [("f", &self.f), ("g", &self.g), ("phi", &self.phi)].into_iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let one = Complex::new(1.0, 0.0);
        assert_eq!(ParameterSet::new(one, one, Complex::new(0.0, 0.0)).unwrap_err(), Error::ZeroGamma);
        let p = ParameterSet::new(one, one, one).unwrap();
        assert!(p.with_k(1.0).is_err());
        assert!(p.with_k(-0.1).is_err());
        assert!(p.with_a(0.0).is_err());
        assert!(p.with_m(-1.0).is_err());
        assert_eq!(p.with_k(0.3).unwrap().k_or_one(), 0.3);
        assert_eq!(p.k_or_one(), 1.0);
    }
}
