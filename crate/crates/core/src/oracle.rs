//! Injectivity oracles that do not depend on any criterion: a pairwise
//! collision scan over sampled values and winding-number covering counts.

use std::collections::HashMap;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::winding::{closed_curve_winding, sampled_winding};

/// Default collision tolerance relative to the value diameter.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-6;
/// Required distance between targets and a sampled curve.
pub const TARGET_CLEARANCE: f64 = 1e-8;

/// Sampled `(z, F(z))` pairs with `|z| <= radius < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCloud<T> {
    points: Vec<(Complex<T>, Complex<T>)>,
    radius: T,
    dropped: usize,
}

impl<T: Real> SampleCloud<T> {
    pub fn new(points: Vec<(Complex<T>, Complex<T>)>, radius: T) -> Result<Self> {
        if !(radius > T::zero() && radius < T::one()) {
            return Err(Error::Domain(format!("cloud radius must lie in (0, 1), got {radius}")));
        }
        let reach = radius * (T::one() + lit::<T>(8.0) * T::epsilon());
        if let Some((z, _)) = points.iter().find(|(z, _)| z.norm() > reach) {
            return Err(Error::Domain(format!("sample {z} lies outside radius {radius}")));
        }
        if points.iter().any(|(_, w)| !crate::scalar::is_finite(*w)) {
            return Err(Error::Invalid("cloud values must be finite".into()));
        }
        Ok(Self { points, radius, dropped: 0 })
    }

    /// `radial x angular` samples `r_i e^(i theta_j)` with
    /// `r_i = radius (i+1) / radial`. The map returns `None` for values that
    /// must be left out (branch-crossing evaluations).
    pub fn polar<F>(radial: usize, angular: usize, radius: T, map: F) -> Result<Self>
    where
        F: Fn(Complex<T>) -> Result<Option<Complex<T>>> + Sync,
    {
        let zs: Vec<Complex<T>> = (0..radial)
            .flat_map(|i| {
                let r = radius * lit::<T>((i + 1) as f64) / lit::<T>(radial as f64);
                (0..angular)
                    .map(move |j| Complex::from_polar(r, T::TAU() * lit::<T>(j as f64) / lit::<T>(angular as f64)))
            })
            .collect();
        let values = zs.par_iter().map(|&z| map(z)).collect::<Result<Vec<_>>>()?;
        let total = zs.len();
        let points: Vec<_> = zs.into_iter().zip(values).filter_map(|(z, w)| w.map(|w| (z, w))).collect();
        let dropped = total - points.len();
        let mut cloud = Self::new(points, radius)?;
        cloud.dropped = dropped;
        Ok(cloud)
    }

    pub fn points(&self) -> &[(Complex<T>, Complex<T>)] {
        &self.points
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    /// Samples left out by `polar`.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Diagonal of the bounding box of the values.
    pub fn value_diameter(&self) -> T {
        let mut lo = Complex::new(T::infinity(), T::infinity());
        let mut hi = Complex::new(T::neg_infinity(), T::neg_infinity());
        for (_, w) in &self.points {
            lo = Complex::new(lo.re.min(w.re), lo.im.min(w.im));
            hi = Complex::new(hi.re.max(w.re), hi.im.max(w.im));
        }
        if self.points.is_empty() {
            T::zero()
        } else {
            (hi - lo).norm()
        }
    }

    /// `1e-6` times the value diameter.
    pub fn default_tolerance(&self) -> T {
        self.value_diameter() * lit(DEFAULT_RELATIVE_TOLERANCE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collision<T> {
    pub first: usize,
    pub second: usize,
    pub z1: Complex<T>,
    pub z2: Complex<T>,
    pub w1: Complex<T>,
    pub w2: Complex<T>,
}

fn cell<T: Real>(w: Complex<T>, size: T) -> (i64, i64) {
    let key = |x: T| (x / size).floor().to_i64().unwrap_or(if x > T::zero() { i64::MAX } else { i64::MIN });
    (key(w.re), key(w.im))
}

/// First pair `(i, j)`, `i < j` in lexicographic order, with
/// `|z_i - z_j| > 10 tol` and `|F_i - F_j| < tol`.
///
/// Values are hashed into cells of side `tol`, so only the 3x3 block of
/// neighboring cells is compared; this finds exactly the pairs of the
/// exhaustive scan.
pub fn injectivity_scan<T: Real>(cloud: &SampleCloud<T>, tol: T) -> Result<Option<Collision<T>>> {
    if cloud.is_empty() {
        return Err(Error::Invalid("sample cloud is empty".into()));
    }
    if !(tol > T::zero() && tol.is_finite()) {
        return Err(Error::Invalid(format!("collision tolerance must be positive, got {tol}")));
    }
    let pts = cloud.points();
    let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, (_, w)) in pts.iter().enumerate() {
        cells.entry(cell(*w, tol)).or_default().push(i);
    }
    let separation = tol * lit(10.0);
    let found = (0..pts.len()).into_par_iter().find_map_first(|i| {
        let (zi, wi) = pts[i];
        let (cx, cy) = cell(wi, tol);
        let mut best: Option<usize> = None;
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                let Some(bucket) = cells.get(&(cx.saturating_add(dx), cy.saturating_add(dy))) else { continue };
                for &j in bucket {
                    if j <= i || best.is_some_and(|b| b < j) {
                        continue;
                    }
                    let (zj, wj) = pts[j];
                    if (wi - wj).norm() < tol && (zi - zj).norm() > separation {
                        best = Some(j);
                    }
                }
            }
        }
        best.map(|j| (i, j))
    });
    Ok(found.map(|(i, j)| Collision { first: i, second: j, z1: pts[i].0, z2: pts[j].0, w1: pts[i].1, w2: pts[j].1 }))
}

/// The same scan without hashing, for cross-checks.
pub fn injectivity_scan_exhaustive<T: Real>(cloud: &SampleCloud<T>, tol: T) -> Option<(usize, usize)> {
    let pts = cloud.points();
    let separation = tol * lit(10.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i].1 - pts[j].1).norm() < tol && (pts[i].0 - pts[j].0).norm() > separation {
                return Some((i, j));
            }
        }
    }
    None
}

fn segment_distance<T: Real>(a: Complex<T>, b: Complex<T>, p: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let s = ((p - a).re * d.re + (p - a).im * d.im) / len2;
    let s = s.max(T::zero()).min(T::one());
    (p - (a + d * s)).norm()
}

/// Winding number of a sampled closed curve about each target.
pub fn covering_counts<T: Real>(curve: &[Complex<T>], targets: &[Complex<T>]) -> Result<Vec<i64>> {
    let clearance = lit::<T>(TARGET_CLEARANCE);
    targets
        .iter()
        .map(|&t| {
            if curve.windows(2).any(|s| segment_distance(s[0], s[1], t) <= clearance) {
                return Err(Error::Inconclusive(format!("target {t} lies within {TARGET_CLEARANCE:e} of the curve")));
            }
            sampled_winding(curve, t)
        })
        .collect()
}

/// True iff every target has winding number exactly one with respect to
/// the sampled closed curve (first sample equal to last within `1e-10`).
pub fn argument_principle_check<T: Real>(curve: &[Complex<T>], targets: &[Complex<T>]) -> Result<bool> {
    Ok(covering_counts(curve, targets)?.iter().all(|&w| w == 1))
}

/// Winding numbers of `F(radius e^(i theta))` about each target, sampling
/// the curve adaptively.
pub fn covering_counts_on_circle<T, F>(map: F, radius: T, targets: &[Complex<T>]) -> Result<Vec<i64>>
where
    T: Real,
    F: Fn(Complex<T>) -> Result<Complex<T>>,
{
    let failure = std::cell::RefCell::new(None);
    let curve = |theta: T| match map(Complex::from_polar(radius, theta)) {
        Ok(w) => w,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex::new(T::nan(), T::nan())
        }
    };
    let counts = closed_curve_winding(curve, targets, 256);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn cloud<F: Fn(Complex<f64>) -> Complex<f64> + Sync>(n: usize, f: F) -> SampleCloud<f64> {
        SampleCloud::polar(n, n, 0.99, |z| Ok(Some(f(z)))).unwrap()
    }

    #[test]
    fn square_collides_identity_does_not() {
        let sq = cloud(40, |z| z * z);
        let tol = sq.default_tolerance();
        let hit = injectivity_scan(&sq, tol).unwrap().unwrap();
        assert!((hit.z1 + hit.z2).norm() < 1e-12);
        assert_eq!(Some((hit.first, hit.second)), injectivity_scan_exhaustive(&sq, tol));
        let id = cloud(40, |z| z);
        assert_eq!(injectivity_scan(&id, id.default_tolerance()).unwrap(), None);
    }

    #[test]
    fn hashed_scan_matches_exhaustive() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let pts: Vec<_> = (0..300)
                .map(|_| {
                    let z = c(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                    let w = c((z.re * 20.0).round() / 20.0, (z.im * 20.0).round() / 20.0);
                    (z, w)
                })
                .collect();
            let cl = SampleCloud::new(pts, 0.9).unwrap();
            let tol = 1e-3;
            let hashed = injectivity_scan(&cl, tol).unwrap().map(|h| (h.first, h.second));
            assert_eq!(hashed, injectivity_scan_exhaustive(&cl, tol));
        }
    }

    #[test]
    fn cloud_validation() {
        assert!(SampleCloud::new(vec![(c(0.5, 0.0), c(0.0, 0.0))], 0.4).is_err());
        assert!(SampleCloud::new(vec![(c(0.5, 0.0), c(0.0, 0.0))], 1.0).is_err());
        let empty = SampleCloud::<f64>::new(vec![], 0.5).unwrap();
        assert!(injectivity_scan(&empty, 1e-6).is_err());
        let dropped = SampleCloud::polar(4, 8, 0.5, |z: Complex<f64>| Ok((z.im >= 0.0).then_some(z))).unwrap();
        assert_eq!(dropped.len() + dropped.dropped(), 32);
    }

    #[test]
    fn argument_principle_examples() {
        let circle: Vec<_> =
            (0..=512).map(|k| Complex::from_polar(0.5, std::f64::consts::TAU * k as f64 / 512.0)).collect();
        assert!(argument_principle_check(&circle, &[c(0.2, 0.0)]).unwrap());
        let sq: Vec<_> = circle.iter().map(|z| z * z).collect();
        assert!(!argument_principle_check(&sq, &[c(0.1, 0.0)]).unwrap());
        assert_eq!(covering_counts(&sq, &[c(0.1, 0.0)]).unwrap(), vec![2]);
        assert!(matches!(argument_principle_check(&circle, &[c(0.5, 0.0)]), Err(Error::Inconclusive(_))));
        let counts =
            covering_counts_on_circle(|z: Complex<f64>| Ok(z * z), 0.5, &[c(0.1, 0.0), c(0.0, 0.2), c(0.9, 0.0)])
                .unwrap();
        assert_eq!(counts, vec![2, 2, 0]);
    }
}
