//! Gauss-Legendre rules and the quadrature settings of the operator.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Newton iteration on `P_n` from the Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a Gauss rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = lit::<T>(n as f64);
        let two = lit::<T>(2.0);
        for i in 0..n.div_ceil(2) {
            let mut x = (T::PI() * (lit::<T>(i as f64) + lit(0.75)) / (nf + lit(0.5))).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= T::epsilon() * lit(2.0) {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != T::zero() {
                dp = d;
            }
            let w = two / ((T::one() - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights mapped to `[lo, hi]`, ascending.
    pub fn mapped(&self, lo: T, hi: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (hi - lo) / lit(2.0);
        let mid = (hi + lo) / lit(2.0);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = lit::<T>(k as f64);
        let p2 = ((lit::<T>(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = lit::<T>(n as f64);
    (p1, nf * (x * p1 - p0) / (x * x - T::one()))
}

/// Settings for the singular integral behind the operator.
///
/// `substitution_power` overrides the default `p = max(1, ceil(2 / Re gamma))`
/// of the change of variables `t = s^p`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig<T> {
    nodes_per_panel: usize,
    max_panels: usize,
    rel_tol: T,
    substitution_power: Option<u32>,
    rule: GaussLegendre<T>,
}

pub const DEFAULT_NODES_PER_PANEL: usize = 32;
pub const DEFAULT_MAX_PANELS: usize = 64;
pub const DEFAULT_REL_TOL: f64 = 1e-10;

impl<T: Real> QuadratureConfig<T> {
    pub fn new(nodes_per_panel: usize, max_panels: usize, rel_tol: T) -> Result<Self> {
        if nodes_per_panel < 2 {
            return Err(Error::Invalid("nodes_per_panel must be at least 2".into()));
        }
        if max_panels < 2 {
            return Err(Error::Invalid("max_panels must be at least 2".into()));
        }
        if !(rel_tol > T::zero()) {
            return Err(Error::Invalid("rel_tol must be positive".into()));
        }
        Ok(Self {
            nodes_per_panel,
            max_panels,
            rel_tol,
            substitution_power: None,
            rule: GaussLegendre::new(nodes_per_panel),
        })
    }

    pub fn with_substitution_power(mut self, p: u32) -> Result<Self> {
        if p == 0 {
            return Err(Error::Invalid("substitution_power must be at least 1".into()));
        }
        self.substitution_power = Some(p);
        Ok(self)
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Result<Self> {
        if !(rel_tol > T::zero()) {
            return Err(Error::Invalid("rel_tol must be positive".into()));
        }
        self.rel_tol = rel_tol;
        Ok(self)
    }

    pub fn nodes_per_panel(&self) -> usize {
        self.nodes_per_panel
    }

    pub fn max_panels(&self) -> usize {
        self.max_panels
    }

    pub fn rel_tol(&self) -> T {
        self.rel_tol
    }

    pub fn substitution_power_override(&self) -> Option<u32> {
        self.substitution_power
    }

    /// The power `p` used for a given `Re gamma > 0`.
    pub fn substitution_power(&self, gamma_re: T) -> u32 {
        self.substitution_power.unwrap_or_else(|| {
            let p = (lit::<T>(2.0) / gamma_re).ceil();
            p.to_u32().unwrap_or(u32::MAX).max(1)
        })
    }

    pub fn rule(&self) -> &GaussLegendre<T> {
        &self.rule
    }
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self::new(DEFAULT_NODES_PER_PANEL, DEFAULT_MAX_PANELS, lit(DEFAULT_REL_TOL)).expect("defaults are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 32] {
            let rule = GaussLegendre::<f64>::new(n);
            assert!((rule.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
            let deg = 2 * n - 1;
            // int_0^1 x^deg dx = 1/(deg+1)
            let v: f64 = rule.mapped(0.0, 1.0).map(|(x, w)| w * x.powi(deg as i32)).sum();
            assert!((v - 1.0 / (deg + 1) as f64).abs() < 1e-14, "n={n}");
            assert!(rule.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn known_three_point_rule() {
        let r = GaussLegendre::<f64>::new(3);
        assert!((r.nodes()[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!((r.weights()[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn substitution_power_default() {
        let q = QuadratureConfig::<f64>::default();
        assert_eq!(q.substitution_power(1.0), 2);
        assert_eq!(q.substitution_power(2.0), 1);
        assert_eq!(q.substitution_power(5.0), 1);
        assert_eq!(q.substitution_power(0.3), 7);
        assert_eq!(q.with_substitution_power(3).unwrap().substitution_power(0.3), 3);
    }

    #[test]
    fn invalid_configs() {
        assert!(QuadratureConfig::<f64>::new(1, 64, 1e-10).is_err());
        assert!(QuadratureConfig::<f64>::new(32, 64, 0.0).is_err());
        assert!(QuadratureConfig::<f64>::default().with_substitution_power(0).is_err());
    }
}
