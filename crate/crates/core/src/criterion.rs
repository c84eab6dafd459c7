//! Point evaluation of the univalence criteria and disk scans for their
//! supremum.
//!
//! A passing [`CriterionReport`] means no violation was found at the sampled
//! points (plus a local refinement around the worst one). It is evidence,
//! not a proof.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::DiskGrid;
use crate::params::{FunctionSet, ParameterSet};
use crate::scalar::{lit, real, Real};
use crate::series::{criterion_terms, nonvanishing_check, pre_schwarzian, SeriesFunction};

/// Absolute slack in `sup <= bound`.
pub const STRICTNESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `|(1-|z|^((m+1)gamma))/gamma * B - (m-1)/2| <= (m+1)/2`
    #[default]
    Thm31,
    /// `(1-|z|^((m+1)Re gamma))/Re gamma * |B| <= 1`
    Thm32,
    /// Thm31 with `beta = alpha`, `g = z`, `phi = f`.
    Cor31,
    /// `(1-|z|^(2 Re gamma))/Re gamma * |z f''/f'| <= 1`
    Cor32,
    /// Thm31 expression against the bound `k (m+1)/2`.
    Thm41,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::Thm31, Variant::Thm32, Variant::Cor31, Variant::Cor32, Variant::Thm41];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Thm31 => "thm31",
            Variant::Thm32 => "thm32",
            Variant::Cor31 => "cor31",
            Variant::Cor32 => "cor32",
            Variant::Thm41 => "thm41",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn bound<T: Real>(self, p: &ParameterSet<T>) -> T {
        let half = (p.m + T::one()) / lit(2.0);
        match self {
            Variant::Thm31 | Variant::Cor31 => half,
            Variant::Thm32 | Variant::Cor32 => T::one(),
            Variant::Thm41 => p.k_or_one() * half,
        }
    }
}

/// `(1 - r^c) / gamma` with `r^c = exp(c ln r)`, `c = (m+1) gamma`.
pub fn radial_weight<T: Real>(r: T, gamma: Complex<T>, m: T) -> Complex<T> {
    let power = if r.is_zero() { Complex::zero() } else { (gamma * (m + T::one()) * r.ln()).exp() };
    (real(T::one()) - power) / gamma
}

/// `(1 - r^((m+1) Re gamma)) / Re gamma`.
pub fn radial_weight_re<T: Real>(r: T, gamma_re: T, m: T) -> T {
    (T::one() - r.powf((m + T::one()) * gamma_re)) / gamma_re
}

/// `alpha z f''/f' + beta (z g'/g - z phi'/phi)`.
pub fn bracket<T: Real>(z: Complex<T>, p: &ParameterSet<T>, fs: &FunctionSet<T>) -> Result<Complex<T>> {
    let t = criterion_terms(&fs.f, &fs.g, &fs.phi, z)?;
    Ok(p.alpha * t.pre_schwarzian + p.beta * t.log_ratio)
}

/// Left-hand side of the variant's inequality at `z`.
pub fn criterion_value<T: Real>(
    variant: Variant,
    z: Complex<T>,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
) -> Result<T> {
    if p.gamma.is_zero() {
        return Err(Error::ZeroGamma);
    }
    let r = z.norm();
    let shift = real((p.m - T::one()) / lit(2.0));
    Ok(match variant {
        Variant::Thm31 | Variant::Thm41 => (radial_weight(r, p.gamma, p.m) * bracket(z, p, fs)? - shift).norm(),
        Variant::Thm32 => radial_weight_re(r, p.gamma.re, p.m) * bracket(z, p, fs)?.norm(),
        Variant::Cor31 => {
            let t = criterion_terms(&fs.f, &SeriesFunction::identity(), &fs.f, z)?;
            let b = p.alpha * (t.pre_schwarzian + t.log_ratio);
            (radial_weight(r, p.gamma, p.m) * b - shift).norm()
        }
        Variant::Cor32 => radial_weight_re(r, p.gamma.re, T::one()) * pre_schwarzian(&fs.f, z)?.norm(),
    })
}

/// Grid metadata carried by a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary<T> {
    pub radii: Vec<T>,
    pub angles_per_radius: usize,
    pub refine_steps: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport<T> {
    pub variant: Variant,
    pub passed: bool,
    #[serde(rename = "sup")]
    pub sup_value: T,
    pub bound: T,
    pub witness: Complex<T>,
    pub margin: T,
    pub grid: GridSummary<T>,
    pub warnings: Vec<String>,
}

impl<T: Real> CriterionReport<T> {
    pub fn verdict(&self) -> &'static str {
        if self.passed {
            "PASS (no violation found by sampling)"
        } else {
            "FAIL"
        }
    }
}

/// Checks the hypotheses a variant needs before its scan is meaningful.
pub fn check_hypotheses<T: Real>(
    variant: Variant,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    grid: &DiskGrid<T>,
) -> Result<()> {
    p.validate()?;
    grid.validate()?;
    if matches!(variant, Variant::Thm32 | Variant::Cor32) && p.gamma.re <= T::zero() {
        return Err(Error::Hypothesis(format!("{} requires Re gamma > 0", variant.name())));
    }
    if variant == Variant::Thm32 && p.m < T::one() {
        return Err(Error::Hypothesis("thm32 requires m >= 1".into()));
    }
    let needs: Vec<(&str, &SeriesFunction<T>)> = match variant {
        Variant::Cor31 => vec![("f", &fs.f)],
        Variant::Cor32 => vec![],
        _ => vec![("g", &fs.g), ("phi", &fs.phi)],
    };
    for (name, s) in needs {
        let report = nonvanishing_check(s, grid.max_radius(), grid)?;
        if !report.nonvanishing {
            let w = report.witness.unwrap_or_else(Complex::zero);
            return Err(Error::Hypothesis(format!("{name}(z)/z vanishes near z = {}{:+}i", w.re, w.im)));
        }
    }
    Ok(())
}

/// Scans the grid for the supremum of the variant's expression, refines
/// around the worst sample, and compares against the bound.
pub fn criterion_check<T: Real>(
    variant: Variant,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    grid: &DiskGrid<T>,
) -> Result<CriterionReport<T>> {
    check_hypotheses(variant, p, fs, grid)?;
    let bound = variant.bound(p);
    let summary = GridSummary {
        radii: grid.radii.clone(),
        angles_per_radius: grid.angles_per_radius,
        refine_steps: grid.refine_steps,
        samples: grid.len(),
    };
    let mut warnings: Vec<String> = fs
        .iter()
        .filter(|(_, s)| s.tail_exceeds(grid.max_radius()))
        .map(|(name, s)| {
            format!(
                "{name}: truncation tail |c_N| r^N = {:e} exceeds tolerance at r = {}",
                s.tail_bound(grid.max_radius()),
                grid.max_radius()
            )
        })
        .collect();

    let points = grid.points();
    let values: Vec<Result<T>> = points.par_iter().map(|z| criterion_value(variant, *z, p, fs)).collect();

    let mut best: Option<(T, usize)> = None;
    for (i, v) in values.into_iter().enumerate() {
        match v {
            Ok(v) if v.is_nan() => {
                return Err(Error::Degenerate(format!("criterion value is NaN at sample {i}")));
            }
            Ok(v) => {
                if best.is_none_or(|(b, _)| v > b) {
                    best = Some((v, i));
                }
            }
            Err(Error::DerivativeVanishes { .. }) => {
                warnings.push(format!("f' vanishes at {} inside the scanned region", points[i]));
                return Ok(CriterionReport {
                    variant,
                    passed: false,
                    sup_value: T::infinity(),
                    bound,
                    witness: points[i],
                    margin: T::neg_infinity(),
                    grid: summary,
                    warnings,
                });
            }
            Err(e) => return Err(e),
        }
    }
    let (grid_sup, index) = best.expect("validated grid is nonempty");
    let ring = index / grid.angles_per_radius;
    let (sup_value, witness) = refine(variant, p, fs, grid, ring, index % grid.angles_per_radius, grid_sup)?;
    Ok(CriterionReport {
        variant,
        passed: sup_value <= bound + lit(STRICTNESS_TOLERANCE),
        sup_value,
        bound,
        witness,
        margin: bound - sup_value,
        grid: summary,
        warnings,
    })
}

/// Coordinate search in `(r, theta)` from the best grid sample, halving the
/// steps `refine_steps` times. Radii stay within `[0, max grid radius]`.
fn refine<T: Real>(
    variant: Variant,
    p: &ParameterSet<T>,
    fs: &FunctionSet<T>,
    grid: &DiskGrid<T>,
    ring: usize,
    angle: usize,
    start: T,
) -> Result<(T, Complex<T>)> {
    let half = lit::<T>(0.5);
    let mut r = grid.radii[ring];
    let mut theta = grid.angle(angle);
    let mut best = start;
    let r_max = grid.max_radius();
    let below = if ring > 0 { grid.radii[ring - 1] } else { T::zero() };
    let mut dr = (r - below) * half;
    let mut dtheta = T::TAU() / lit(grid.angles_per_radius as f64) * half;
    for _ in 0..grid.refine_steps {
        let mut moved = true;
        while moved {
            moved = false;
            let candidates = [(r + dr, theta), (r - dr, theta), (r, theta + dtheta), (r, theta - dtheta)];
            for (cr, ct) in candidates {
                let cr = cr.max(T::zero()).min(r_max);
                if cr == r && ct == theta {
                    continue;
                }
                match criterion_value(variant, Complex::from_polar(cr, ct), p, fs) {
                    Ok(v) if v > best => {
                        best = v;
                        r = cr;
                        theta = ct;
                        moved = true;
                    }
                    Ok(_) => {}
                    Err(Error::DerivativeVanishes { .. }) => {
                        return Ok((T::infinity(), Complex::from_polar(cr, ct)));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        dr = dr * half;
        dtheta = dtheta * half;
    }
    Ok((best, Complex::from_polar(r, theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn example31() -> (ParameterSet<f64>, FunctionSet<f64>) {
        let p = ParameterSet::new(c(0.5, 0.0), c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        let fs = FunctionSet::new(catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity());
        (p, fs)
    }

    #[test]
    fn identity_kills_the_bracket() {
        let fs = FunctionSet::identity();
        let p = ParameterSet::new(c(0.7, 0.1), c(-0.2, 0.3), c(2.0, 1.0)).unwrap();
        for z in [c(0.3, 0.2), c(-0.9, 0.0), c(0.0, 0.5)] {
            assert_eq!(criterion_value(Variant::Thm31, z, &p, &fs).unwrap(), 0.0);
        }
        let p3 = p.with_m(3.0).unwrap();
        assert_eq!(criterion_value(Variant::Thm31, c(0.4, 0.1), &p3, &fs).unwrap(), 1.0);
        assert_eq!(Variant::Thm31.bound(&p3), 2.0);
    }

    #[test]
    fn koebe_cor32_value() {
        let fs = FunctionSet::new(catalog::koebe(2048), SeriesFunction::identity(), SeriesFunction::identity());
        let p = ParameterSet::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let v = criterion_value(Variant::Cor32, c(0.9, 0.0), &p, &fs).unwrap();
        // (1 - 0.81) * (4*0.9 + 2*0.81) / (1 - 0.81)
        assert!((v - 5.22).abs() < 1e-10, "{v}");
    }

    #[test]
    fn thm32_passes_on_example31() {
        let (p, fs) = example31();
        let report = criterion_check(Variant::Thm32, &p, &fs, &DiskGrid::default()).unwrap();
        assert!(report.passed);
        assert!(report.sup_value < 1.0);
        assert!(report.warnings.is_empty());
        assert_eq!(report.verdict(), "PASS (no violation found by sampling)");
    }

    #[test]
    fn thm31_identity_passes_with_zero_sup() {
        let fs = FunctionSet::identity();
        for g in [c(1.0, 0.0), c(-0.5, 2.0)] {
            let p = ParameterSet::new(c(1.0, 0.0), c(1.0, 0.0), g).unwrap();
            let report = criterion_check(Variant::Thm31, &p, &fs, &DiskGrid::default()).unwrap();
            assert!(report.passed);
            assert_eq!(report.sup_value, 0.0);
            assert_eq!(report.bound, 1.0);
        }
    }

    #[test]
    fn cor32_fails_on_koebe() {
        let fs = FunctionSet::new(catalog::koebe(40_000), SeriesFunction::identity(), SeriesFunction::identity());
        let p = ParameterSet::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let grid = DiskGrid::default();
        let report = criterion_check(Variant::Cor32, &p, &fs, &grid).unwrap();
        assert!(!report.passed);
        assert!(report.sup_value > 5.9);
        assert!(report.witness.im.abs() < 1e-8 && report.witness.re > 0.0, "{report:?}");
        assert!((report.witness.norm() - grid.max_radius()).abs() < 1e-12);
    }

    #[test]
    fn hypothesis_violations() {
        let (p, mut fs) = example31();
        let grid = DiskGrid::default();
        let p_low_m = p.with_m(0.5).unwrap();
        assert!(matches!(criterion_check(Variant::Thm32, &p_low_m, &fs, &grid), Err(Error::Hypothesis(_))));
        // m < 1 is fine for thm31
        assert!(criterion_check(Variant::Thm31, &p_low_m, &fs, &grid).is_ok());
        let p_neg = ParameterSet::new(c(0.5, 0.0), c(0.5, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(matches!(criterion_check(Variant::Cor32, &p_neg, &fs, &grid), Err(Error::Hypothesis(_))));
        fs.g = catalog::quadratic(-2.0);
        assert!(matches!(criterion_check(Variant::Thm31, &p, &fs, &grid), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn vanishing_derivative_fails_with_witness() {
        // f' = 1 + 4z vanishes at -1/4
        let fs = FunctionSet::new(catalog::quadratic(2.0), SeriesFunction::identity(), SeriesFunction::identity());
        let p = ParameterSet::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let grid = DiskGrid::new(vec![0.25, 0.5], 8, 4).unwrap();
        let report = criterion_check(Variant::Thm31, &p, &fs, &grid).unwrap();
        assert!(!report.passed);
        assert_eq!(report.witness, Complex::from_polar(0.25, std::f64::consts::PI));
    }

    #[test]
    fn complex_radial_weight_is_bounded_by_the_real_one() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for _ in 0..500 {
            let r = rng.gen_range(0.0..1.0);
            let g = c(rng.gen_range(1e-3..5.0), rng.gen_range(-5.0..5.0));
            let m = rng.gen_range(0.0..5.0);
            let lhs = radial_weight(r, g, m).norm();
            assert!(lhs <= radial_weight_re(r, g.re, m) + 1e-12, "r={r} g={g} m={m}");
        }
    }

    #[test]
    fn thm32_pass_implies_thm31_pass_pointwise() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(32);
        let fs = FunctionSet::new(catalog::quadratic(0.25), catalog::quadratic(0.5), SeriesFunction::identity());
        let mut checked = 0;
        for _ in 0..2000 {
            let p = ParameterSet::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(0.05..2.0), rng.gen_range(-2.0..2.0)),
            )
            .unwrap()
            .with_m(rng.gen_range(1.0..4.0))
            .unwrap();
            let z = Complex::from_polar(rng.gen_range(0.0..0.999), rng.gen_range(-3.2..3.2));
            if criterion_value(Variant::Thm32, z, &p, &fs).unwrap() <= 1.0 {
                checked += 1;
                assert!(criterion_value(Variant::Thm31, z, &p, &fs).unwrap() <= Variant::Thm31.bound(&p) + 1e-12);
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn thm41_shares_the_thm31_value() {
        let (p, fs) = example31();
        let pk = p.with_k(0.3).unwrap();
        for z in [c(0.3, 0.1), c(-0.8, 0.5)] {
            assert_eq!(
                criterion_value(Variant::Thm41, z, &pk, &fs).unwrap(),
                criterion_value(Variant::Thm31, z, &pk, &fs).unwrap()
            );
        }
        assert!((Variant::Thm41.bound(&pk) - 0.3).abs() < 1e-16);
    }

    #[test]
    fn cor31_matches_thm31_specialization() {
        let f = catalog::quadratic(0.25);
        let p = ParameterSet::new(c(0.6, 0.2), c(0.6, 0.2), c(1.5, 0.5)).unwrap().with_m(2.0).unwrap();
        let direct = FunctionSet::new(f.clone(), SeriesFunction::identity(), f.clone());
        let fs = FunctionSet::new(f, catalog::quadratic(0.9), catalog::quadratic(-0.3));
        for z in [c(0.2, 0.3), c(-0.6, -0.1)] {
            let a = criterion_value(Variant::Cor31, z, &p, &fs).unwrap();
            let b = criterion_value(Variant::Thm31, z, &p, &direct).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn enlarging_the_grid_never_lowers_the_sampled_sup() {
        let fs = FunctionSet::new(catalog::exponential(1.0, 64), catalog::quadratic(0.3), SeriesFunction::identity());
        let p = ParameterSet::new(c(0.4, 0.1), c(0.3, 0.0), c(1.0, 0.5)).unwrap();
        let coarse = DiskGrid::new(vec![0.5, 0.75, 0.875], 16, 0).unwrap();
        let fine = DiskGrid::new(vec![0.5, 0.6, 0.75, 0.875, 0.95], 32, 0).unwrap();
        let a = criterion_check(Variant::Thm31, &p, &fs, &coarse).unwrap();
        let b = criterion_check(Variant::Thm31, &p, &fs, &fine).unwrap();
        assert!(b.sup_value >= a.sup_value);
    }
}
