//! Winding numbers by summing principal argument increments.

use num_complex::Complex;

use crate::branch::principal_arg;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Minimum allowed distance between a target and the curve.
pub const CURVE_CLEARANCE: f64 = 1e-10;
const SPLIT_INCREMENT: f64 = std::f64::consts::FRAC_PI_4;
const MAX_DEPTH: usize = 24;

fn increment<T: Real>(a: Complex<T>, b: Complex<T>, target: Complex<T>) -> T {
    principal_arg((b - target) / (a - target))
}

fn clearance_check<T: Real>(p: Complex<T>, targets: &[Complex<T>]) -> Result<()> {
    let clearance = lit::<T>(CURVE_CLEARANCE);
    if let Some(t) = targets.iter().find(|t| (p - **t).norm() < clearance) {
        return Err(Error::Inconclusive(format!("curve passes within {CURVE_CLEARANCE:e} of target {t}")));
    }
    Ok(())
}

/// Winding numbers of the closed curve `theta -> curve(theta)`,
/// `theta in [0, 2 pi]`, around each target.
///
/// Starts from `initial` uniform samples and bisects any segment whose
/// argument increment about some target exceeds `pi/4`.
pub fn closed_curve_winding<T, F>(curve: F, targets: &[Complex<T>], initial: usize) -> Result<Vec<i64>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let n = initial.max(8);
    let split = lit::<T>(SPLIT_INCREMENT);
    let mut totals = vec![T::zero(); targets.len()];
    let theta = |k: usize| T::TAU() * lit::<T>(k as f64) / lit::<T>(n as f64);
    let first = curve(T::zero());
    clearance_check(first, targets)?;
    let mut prev = (T::zero(), first);
    for k in 1..=n {
        let end_theta = if k == n { T::TAU() } else { theta(k) };
        let end = if k == n { first } else { curve(end_theta) };
        clearance_check(end, targets)?;
        // depth-first bisection, fixed order for determinism
        let mut stack = vec![(prev, (end_theta, end), 0usize)];
        while let Some((a, b, depth)) = stack.pop() {
            let needs_split = targets.iter().any(|t| increment(a.1, b.1, *t).abs() > split);
            if needs_split && depth < MAX_DEPTH {
                let mid_theta = (a.0 + b.0) / lit::<T>(2.0);
                let mid = curve(mid_theta);
                clearance_check(mid, targets)?;
                stack.push(((mid_theta, mid), b, depth + 1));
                stack.push((a, (mid_theta, mid), depth + 1));
            } else {
                for (total, t) in totals.iter_mut().zip(targets) {
                    *total = *total + increment(a.1, b.1, *t);
                }
            }
        }
        prev = (end_theta, end);
    }
    totals.into_iter().map(|s| round_turns(s)).collect()
}

fn round_turns<T: Real>(total: T) -> Result<i64> {
    let turns = total / T::TAU();
    let rounded = turns.round();
    if (turns - rounded).abs() > lit(0.1) {
        return Err(Error::Inconclusive(format!("argument sum {turns} turns is not near an integer")));
    }
    Ok(rounded.to_i64().expect("winding count fits"))
}

/// Winding number of a sampled closed curve (first sample equal to last
/// within `1e-10`). Increments of `3 pi / 4` or more cannot be resolved
/// without resampling and are reported as inconclusive.
pub fn sampled_winding<T: Real>(curve: &[Complex<T>], target: Complex<T>) -> Result<i64> {
    if curve.len() < 3 {
        return Err(Error::Invalid("closed curve needs at least 3 samples".into()));
    }
    if (curve[0] - curve[curve.len() - 1]).norm() > lit(1e-10) {
        return Err(Error::Invalid("curve is not closed".into()));
    }
    let limit = T::PI() * lit(0.75);
    let mut total = T::zero();
    for (i, pair) in curve.windows(2).enumerate() {
        clearance_check(pair[0], &[target])?;
        let d = increment(pair[0], pair[1], target);
        if d.abs() >= limit {
            return Err(Error::Inconclusive(format!("argument increment {d} between samples {i} and {}", i + 1)));
        }
        total = total + d;
    }
    round_turns(total)
}
