use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Polar sampling of the open unit disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiskGrid<T> {
    pub radii: Vec<T>,
    pub angles_per_radius: usize,
    pub refine_steps: usize,
}

pub const DEFAULT_LEVELS: u32 = 10;
pub const DEFAULT_ANGLES: usize = 512;
pub const DEFAULT_REFINE_STEPS: usize = 30;

impl<T: Real> DiskGrid<T> {
    pub fn new(radii: Vec<T>, angles_per_radius: usize, refine_steps: usize) -> Result<Self> {
        let grid = Self { radii, angles_per_radius, refine_steps };
        grid.validate()?;
        Ok(grid)
    }

    /// Radii `1 - 2^-j` for `j = 1..=levels`.
    pub fn dyadic(levels: u32, angles_per_radius: usize, refine_steps: usize) -> Result<Self> {
        let radii = (1..=levels).map(|j| T::one() - lit::<T>(2f64.powi(-(j as i32)))).collect();
        Self::new(radii, angles_per_radius, refine_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::Invalid("grid radii must be nonempty".into()));
        }
        if self.radii.iter().any(|r| !(*r > T::zero() && *r < T::one())) {
            return Err(Error::Invalid("grid radii must lie in (0, 1)".into()));
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("grid radii must be strictly increasing".into()));
        }
        if self.angles_per_radius < 8 {
            return Err(Error::Invalid("angles_per_radius must be at least 8".into()));
        }
        Ok(())
    }

    pub fn max_radius(&self) -> T {
        *self.radii.last().expect("validated grid has radii")
    }

    pub fn angle(&self, k: usize) -> T {
        T::TAU() * lit::<T>(k as f64) / lit::<T>(self.angles_per_radius as f64)
    }

    /// Samples in radius-major order.
    pub fn points(&self) -> Vec<Complex<T>> {
        self.radii
            .iter()
            .flat_map(|&r| (0..self.angles_per_radius).map(move |k| (r, k)))
            .map(|(r, k)| Complex::from_polar(r, self.angle(k)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles_per_radius
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: Real> Default for DiskGrid<T> {
    fn default() -> Self {
        Self::dyadic(DEFAULT_LEVELS, DEFAULT_ANGLES, DEFAULT_REFINE_STEPS).expect("default grid is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let g = DiskGrid::<f64>::default();
        assert_eq!(g.radii.len(), 10);
        assert_eq!(g.radii[0], 0.5);
        assert_eq!(g.max_radius(), 1.0 - 1.0 / 1024.0);
        assert_eq!(g.points().len(), 5120);
    }

    #[test]
    fn invalid_grids() {
        assert!(DiskGrid::<f64>::new(vec![], 16, 0).is_err());
        assert!(DiskGrid::new(vec![0.5, 1.0], 16, 0).is_err());
        assert!(DiskGrid::new(vec![0.6, 0.5], 16, 0).is_err());
        assert!(DiskGrid::new(vec![0.5], 4, 0).is_err());
    }
}
