//! Named class-A functions.
//!
//! | name          | function               | parameters                         |
//! |---------------|------------------------|------------------------------------|
//! | `identity`    | `z`                    | none                               |
//! | `quadratic`   | `z + c z^2`            | `c` (finite real)                  |
//! | `koebe`       | `z / (1 - z)^2`        | `degree` (default 64)              |
//! | `exponential` | `(e^(lambda z) - 1) / lambda` | `lambda` in `[-50, 50]`, `degree` |
//!
//! Koebe and exponential are truncations; `degree` is an integer in
//! `[2, 1_000_000]`.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::series::SeriesFunction;

pub const DEFAULT_DEGREE: usize = 64;
const MAX_DEGREE: usize = 1_000_000;

pub const NAMES: [&str; 4] = ["identity", "quadratic", "koebe", "exponential"];

pub fn identity<T: Real>() -> SeriesFunction<T> {
    SeriesFunction::identity()
}

pub fn quadratic<T: Real>(c: T) -> SeriesFunction<T> {
    SeriesFunction::new(vec![Complex::new(T::one(), T::zero()), Complex::new(c, T::zero())], "quadratic")
        .expect("finite coefficients")
}

pub fn koebe<T: Real>(degree: usize) -> SeriesFunction<T> {
    let coefficients = (1..=degree).map(|n| Complex::new(lit::<T>(n as f64), T::zero())).collect();
    SeriesFunction::new(coefficients, "koebe").expect("finite coefficients").into_truncated()
}

pub fn exponential<T: Real>(lambda: T, degree: usize) -> SeriesFunction<T> {
    // c_n = lambda^(n-1) / n!
    let mut coefficients = Vec::with_capacity(degree);
    let mut c = T::one();
    for n in 1..=degree {
        if n > 1 {
            c = c * lambda / lit::<T>(n as f64);
        }
        coefficients.push(Complex::new(c, T::zero()));
    }
    SeriesFunction::new(coefficients, "exponential").expect("finite coefficients").into_truncated()
}

/// Builds a catalog function from its name and real parameters.
pub fn catalog_build<T: Real>(name: &str, params: &BTreeMap<String, f64>) -> Result<SeriesFunction<T>> {
    let allowed: &[&str] = match name {
        "identity" => &[],
        "quadratic" => &["c"],
        "koebe" => &["degree"],
        "exponential" => &["lambda", "degree"],
        other => return Err(Error::UnknownCatalog(other.to_string())),
    };
    if let Some(key) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(out_of_range(key, format!("not a parameter of `{name}`")));
    }
    let degree = match params.get("degree") {
        None => DEFAULT_DEGREE,
        Some(&d) if d.fract() == 0.0 && (2.0..=MAX_DEGREE as f64).contains(&d) => d as usize,
        Some(&d) => return Err(out_of_range("degree", format!("{d} is not an integer in [2, {MAX_DEGREE}]"))),
    };
    Ok(match name {
        "identity" => identity(),
        "quadratic" => {
            let c = *params.get("c").ok_or_else(|| out_of_range("c", "required".into()))?;
            if !c.is_finite() {
                return Err(out_of_range("c", format!("{c} is not finite")));
            }
            quadratic(lit(c))
        }
        "koebe" => koebe(degree),
        _ => {
            let lambda = params.get("lambda").copied().unwrap_or(1.0);
            if !(-50.0..=50.0).contains(&lambda) {
                return Err(out_of_range("lambda", format!("{lambda} is outside [-50, 50]")));
            }
            exponential(lit(lambda), degree)
        }
    })
}

fn out_of_range(name: &str, detail: String) -> Error {
    Error::ParameterOutOfRange { name: name.to_string(), detail }
}

/// One instance of every catalog entry with default parameters
/// (`quadratic` with `c = 0.25`).
pub fn all_default<T: Real>() -> Vec<SeriesFunction<T>> {
    vec![identity(), quadratic(lit(0.25)), koebe(DEFAULT_DEGREE), exponential(T::one(), DEFAULT_DEGREE)]
}
