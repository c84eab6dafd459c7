//! The integral operator
//!
//! ```text
//! F(z) = [ gamma * int_0^z u^(gamma-1) (f'(u))^alpha (g(u)/phi(u))^beta du ]^(1/gamma)
//!      = z * [ gamma * int_0^1 t^(gamma-1) h(t z) dt ]^(1/gamma)
//! ```
//!
//! with `h = (f')^alpha (g/phi)^beta` on principal branches. The inner
//! integral (the *bracket*) is computed after `t = s^p`, with Gauss-Legendre
//! panels graded geometrically toward `s = 0` and uniform panels on the rest
//! of `[0, 1]` doubled until two successive estimates agree to `rel_tol`.
//!
//! Along the ray `t z` the arguments of `f'` and `g/phi` are followed
//! continuously from their value `1` at the origin, and so is the bracket of
//! the radial family `r z`, `0 < r <= 1` (sampled at panel ends). Any
//! departure from the principal sheet sets `branch_crossing`; the principal
//! value is still returned.

use num_complex::Complex;
use num_traits::Zero;

use crate::branch::{principal_log, principal_power, ArgumentTracker};
use crate::error::{Error, Result};
use crate::params::{FunctionSet, ParameterSet};
use crate::quadrature::QuadratureConfig;
use crate::scalar::{is_finite, lit, real, to_c64, Real};
use crate::series::vanishing_floor;

/// Upper end of the geometrically graded part of `[0, 1]`.
const GRADED_END: f64 = 0.125;
const GRADING_RATIO: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorResult<T> {
    pub value: Complex<T>,
    /// `gamma * int_0^1 t^(gamma-1) h(t z) dt`.
    pub bracket: Complex<T>,
    pub panels_used: usize,
    /// When set, `value` is the principal-branch value but not the analytic
    /// continuation from the origin.
    pub branch_crossing: bool,
}

/// `h(u)` together with the quantities whose arguments are tracked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample<T> {
    pub value: Complex<T>,
    pub derivative: Complex<T>,
    pub ratio: Complex<T>,
}

/// `h(u) = (f'(u))^alpha (g(u)/phi(u))^beta`, principal branches.
pub fn integrand<T: Real>(u: Complex<T>, p: &ParameterSet<T>, fs: &FunctionSet<T>) -> Result<IntegrandSample<T>> {
    let (_, derivative, _) = fs.f.horner(u);
    let (qg, _) = fs.g.reduced(u);
    let (qphi, _) = fs.phi.reduced(u);
    let mut log = Complex::zero();
    if !p.alpha.is_zero() {
        if derivative.norm() <= vanishing_floor::<T>() {
            return Err(Error::DerivativeVanishes { witness: to_c64(u) });
        }
        log = log + p.alpha * principal_log(derivative);
    }
    let ratio = qg / qphi;
    if !p.beta.is_zero() {
        if qg.norm() <= vanishing_floor::<T>() || qphi.norm() <= vanishing_floor::<T>() || !is_finite(ratio) {
            return Err(Error::Hypothesis(format!("g or phi vanishes at u = {}", to_c64(u))));
        }
        log = log + p.beta * principal_log(ratio);
    }
    Ok(IntegrandSample { value: log.exp(), derivative, ratio })
}

#[derive(Debug, Clone, Copy)]
struct RayState<T> {
    derivative: ArgumentTracker<T>,
    ratio: ArgumentTracker<T>,
    bracket: ArgumentTracker<T>,
    sum: Complex<T>,
    samples: usize,
}

impl<T: Real> RayState<T> {
    fn start() -> Result<Self> {
        let one = real(T::one());
        let mut state = Self {
            derivative: ArgumentTracker::default(),
            ratio: ArgumentTracker::default(),
            bracket: ArgumentTracker::default(),
            sum: Complex::zero(),
            samples: 1,
        };
        state.derivative.push(one, 0)?;
        state.ratio.push(one, 0)?;
        state.bracket.push(one, 0)?;
        Ok(state)
    }

    fn crossed(&self) -> bool {
        self.derivative.crossed() || self.ratio.crossed() || self.bracket.crossed()
    }
}

/// Result of the bracket integral `gamma * int_0^1 t^(gamma-1) h(t w) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketIntegral<T> {
    pub value: Complex<T>,
    pub panels_used: usize,
    pub branch_crossing: bool,
}

struct RayIntegrator<'a, T> {
    w: Complex<T>,
    params: &'a ParameterSet<T>,
    fs: &'a FunctionSet<T>,
    q: &'a QuadratureConfig<T>,
    power: T,
    /// `p gamma - 1`
    exponent: Complex<T>,
    /// `p gamma`
    scale: Complex<T>,
}

impl<'a, T: Real> RayIntegrator<'a, T> {
    fn segment(&self, lo: T, hi: T, state: &mut RayState<T>) -> Result<()> {
        let mut part = Complex::<T>::zero();
        for (s, weight) in self.q.rule().mapped(lo, hi) {
            let ln_s = s.ln();
            let u = self.w * (self.power * ln_s).exp();
            let sample = integrand(u, self.params, self.fs)?;
            // undersampling along the ray leaves the sheet undecided: treat as a crossing
            if !self.params.alpha.is_zero() && state.derivative.push(sample.derivative, state.samples).is_err() {
                state.derivative = ArgumentTracker::starting_on_sheet(1);
            }
            if !self.params.beta.is_zero() && state.ratio.push(sample.ratio, state.samples).is_err() {
                state.ratio = ArgumentTracker::starting_on_sheet(1);
            }
            state.samples += 1;
            part = part + sample.value * (self.exponent * ln_s).exp() * weight;
        }
        state.sum = state.sum + part * self.scale;
        // bracket of the radial family at r = hi^p: (sum so far) * r^(-gamma)
        let checkpoint = state.sum * (-self.scale * hi.ln()).exp();
        if !checkpoint.is_zero() && state.bracket.push(checkpoint, state.samples).is_err() {
            state.bracket = ArgumentTracker::starting_on_sheet(1);
        }
        Ok(())
    }

    /// Geometric panels on `[0, GRADED_END]`: `[0, x_min]`, then ratio-8 steps.
    fn graded_breakpoints(&self) -> Vec<T> {
        let re = self.scale.re;
        // x_min^(Re p gamma) below 1e-3 rel_tol, so the first panel is negligible
        let x_min = (self.q.rel_tol() * lit(1e-3)).powf(T::one() / re);
        let end = lit::<T>(GRADED_END);
        let ratio = lit::<T>(GRADING_RATIO);
        let levels = ((end / x_min).ln() / ratio.ln()).ceil().max(T::one()).min(lit(60.0));
        let levels = levels.to_usize().expect("bounded level count");
        let mut points = vec![T::zero()];
        points.extend((0..=levels).rev().map(|j| end / ratio.powi(j as i32)));
        points
    }
}

/// `gamma * int_0^1 t^(gamma-1) h(t w) dt` (equal to `1` at `w = 0`).
pub fn bracket_integral<T: Real>(
    w: Complex<T>,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<BracketIntegral<T>> {
    p.require_positive_gamma()?;
    if w.is_zero() {
        return Ok(BracketIntegral { value: real(T::one()), panels_used: 0, branch_crossing: false });
    }
    let power = q.substitution_power(p.gamma.re);
    let power_t = lit::<T>(power as f64);
    let integrator = RayIntegrator {
        w,
        params: p,
        fs,
        q,
        power: power_t,
        exponent: p.gamma * power_t - T::one(),
        scale: p.gamma * power_t,
    };

    let graded = integrator.graded_breakpoints();
    let mut base = RayState::start()?;
    for pair in graded.windows(2) {
        integrator.segment(pair[0], pair[1], &mut base)?;
    }
    let graded_panels = graded.len() - 1;

    let start = lit::<T>(GRADED_END);
    let span = T::one() - start;
    let mut previous: Option<Complex<T>> = None;
    let mut n = 1usize;
    while n <= q.max_panels() {
        let mut state = base;
        let nf = lit::<T>(n as f64);
        for k in 0..n {
            let lo = start + span * lit::<T>(k as f64) / nf;
            let hi = if k + 1 == n { T::one() } else { start + span * lit::<T>((k + 1) as f64) / nf };
            integrator.segment(lo, hi, &mut state)?;
        }
        if !is_finite(state.sum) {
            return Err(Error::Degenerate(format!("bracket integral is not finite at z = {}", to_c64(w))));
        }
        if let Some(prev) = previous {
            if (state.sum - prev).norm() <= q.rel_tol() * state.sum.norm() {
                return Ok(BracketIntegral {
                    value: state.sum,
                    panels_used: graded_panels + n,
                    branch_crossing: state.crossed(),
                });
            }
        }
        previous = Some(state.sum);
        n *= 2;
    }
    Err(Error::NoConvergence { what: "bracket quadrature", limit: q.max_panels(), unit: "panels" })
}

/// `F(z) = z * bracket(z)^(1/gamma)`.
pub fn operator_eval<T: Real>(
    z: Complex<T>,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    q: &QuadratureConfig<T>,
) -> Result<OperatorResult<T>> {
    p.require_positive_gamma()?;
    if !is_finite(z) || z.norm() >= T::one() {
        return Err(Error::Domain(format!("operator needs |z| < 1, got |z| = {}", z.norm())));
    }
    let b = bracket_integral(z, p, fs, q)?;
    let root = principal_power(b.value, real(T::one()) / p.gamma)?;
    Ok(OperatorResult {
        value: z * root,
        bracket: b.value,
        panels_used: b.panels_used,
        branch_crossing: b.branch_crossing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::series::SeriesFunction;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn example31(alpha: f64, beta: f64, gamma: Complex<f64>) -> (ParameterSet<f64>, FunctionSet<f64>) {
        let p = ParameterSet::new(c(alpha, 0.0), c(beta, 0.0), gamma).unwrap();
        (p, FunctionSet::new(catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity()))
    }

    #[test]
    fn identity_functions_give_the_identity() {
        let fs = FunctionSet::identity();
        let q = QuadratureConfig::default();
        for g in [c(2.0, 1.0), c(1.0, 0.0), c(0.5, 0.8), c(0.05, 0.0)] {
            let p = ParameterSet::new(c(1.0, 0.0), c(1.0, 0.0), g).unwrap();
            let z = c(0.5, 0.3);
            let r = operator_eval(z, &p, &fs, &q).unwrap();
            assert!((r.bracket - 1.0).norm() < 1e-13, "gamma={g}: {}", r.bracket);
            assert!((r.value - z).norm() < 1e-13 * z.norm());
            assert!(!r.branch_crossing);
        }
    }

    #[test]
    fn gamma_one_reproduces_f() {
        let p = ParameterSet::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let fs = FunctionSet::new(catalog::quadratic(0.25), SeriesFunction::identity(), SeriesFunction::identity());
        let r = operator_eval(c(0.5, 0.0), &p, &fs, &QuadratureConfig::default()).unwrap();
        assert!((r.value - c(0.5625, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn example31_antiderivative() {
        // alpha + beta = 1, gamma = 1: F(z) = int_0^z (1 + u/2) du = z + z^2/4
        let (p, fs) = example31(0.5, 0.5, c(1.0, 0.0));
        let r = operator_eval(c(0.0, 0.8), &p, &fs, &QuadratureConfig::default()).unwrap();
        assert!((r.value - c(-0.16, 0.8)).norm() < 1e-14, "{}", r.value);
    }

    #[test]
    fn origin_and_domain() {
        let (p, fs) = example31(0.5, 0.5, c(1.0, 0.0));
        let q = QuadratureConfig::default();
        let r = operator_eval(c(0.0, 0.0), &p, &fs, &q).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        assert!(matches!(operator_eval(c(1.0, 0.0), &p, &fs, &q), Err(Error::Domain(_))));
        let (p_bad, _) = example31(0.5, 0.5, c(-0.5, 1.0));
        assert!(matches!(operator_eval(c(0.5, 0.0), &p_bad, &fs, &q), Err(Error::NonPositiveGamma(_))));
    }

    #[test]
    fn normalization_near_origin() {
        let (p, fs) = example31(0.3, 0.2, c(1.2, 0.5));
        let z = c(1e-4, 0.0);
        let r = operator_eval(z, &p, &fs, &QuadratureConfig::default()).unwrap();
        assert!((r.value / z - 1.0).norm() < 1e-3);
    }

    #[test]
    fn gamma_one_matches_direct_path_integral() {
        // oracle: composite Simpson on the segment [0, z] of (f')^alpha (g/phi)^beta
        let cases = [
            (catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity(), 0.5, 0.5),
            (catalog::exponential(1.0, 64), SeriesFunction::identity(), SeriesFunction::identity(), 0.7, 0.0),
            (catalog::koebe(64), catalog::exponential(0.5, 64), catalog::quadratic(0.2), 0.25, 0.4),
        ];
        let q = QuadratureConfig::default();
        for (f, g, phi, alpha, beta) in cases {
            let fs = FunctionSet::new(f, g, phi);
            let p = ParameterSet::new(c(alpha, 0.0), c(beta, 0.0), c(1.0, 0.0)).unwrap();
            for z in [c(0.3, 0.2), c(-0.4, 0.1)] {
                let n = 20_000;
                let h = |s: f64| integrand(z * s, &p, &fs).unwrap().value;
                let mut acc = h(0.0) + h(1.0);
                for k in 1..n {
                    acc += h(k as f64 / n as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
                }
                let oracle = z * acc / (3.0 * n as f64);
                let value = operator_eval(z, &p, &fs, &q).unwrap().value;
                assert!((value - oracle).norm() < 1e-12, "{} vs {}", value, oracle);
            }
        }
    }

    #[test]
    fn tighter_tolerance_stays_within_previous_tolerance() {
        let (p, fs) = example31(0.3, 0.2, c(0.4, 0.9));
        let z = c(0.6, -0.5);
        let mut tol = 1e-6;
        let mut last = operator_eval(z, &p, &fs, &QuadratureConfig::default().with_rel_tol(tol).unwrap()).unwrap();
        for _ in 0..4 {
            let next_tol = tol / 2.0;
            let q = QuadratureConfig::default().with_rel_tol(next_tol).unwrap();
            let next = operator_eval(z, &p, &fs, &q).unwrap();
            assert!((next.bracket - last.bracket).norm() <= tol * next.bracket.norm());
            last = next;
            tol = next_tol;
        }
    }

    #[test]
    fn derivative_crossing_the_cut_is_flagged() {
        // f' = (1 + 4u)^2: along the ray to -0.6 - 0.05i, 1 + 4u turns by almost -pi,
        // so f' turns by almost -2 pi and crosses the negative real axis;
        // alpha = 1 keeps the integrand smooth across the cut
        let f = SeriesFunction::normalized(vec![c(1.0, 0.0), c(4.0, 0.0), c(16.0 / 3.0, 0.0)], "square").unwrap();
        let fs = FunctionSet::new(f, SeriesFunction::identity(), SeriesFunction::identity());
        let p = ParameterSet::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let q = QuadratureConfig::default();
        assert!(!operator_eval(c(0.2, 0.1), &p, &fs, &q).unwrap().branch_crossing);
        assert!(operator_eval(c(-0.6, -0.05), &p, &fs, &q).unwrap().branch_crossing);
    }
}
