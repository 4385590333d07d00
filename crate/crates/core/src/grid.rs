//! Uniform space-time mesh.

use crate::error::{Error, Result};

/// Uniform mesh on `[0, L] x [0, T]` with `M` space and `N` time subintervals.
///
/// Construction enforces the CFL bound `r = c dt / dx <= 1` (inclusive).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    length: f64,
    horizon: f64,
    space_steps: usize,
    time_steps: usize,
    speed: f64,
    dx: f64,
    dt: f64,
    ratio: f64,
}

impl GridSpec {
    pub fn new(length: f64, horizon: f64, space_steps: usize, time_steps: usize, speed: f64) -> Result<Self> {
        for (name, v) in [("L", length), ("T", horizon), ("c", speed)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if space_steps < 2 {
            return Err(Error::InvalidDimension(format!("M must be >= 2, got {space_steps}")));
        }
        if time_steps < 1 {
            return Err(Error::InvalidDimension(format!("N must be >= 1, got {time_steps}")));
        }
        let dx = length / space_steps as f64;
        let dt = horizon / time_steps as f64;
        let ratio = speed * dt / dx;
        // Allow r = 1 up to rounding in c*dt/dx.
        if ratio > 1.0 + 4.0 * f64::EPSILON {
            return Err(Error::CflViolation { ratio });
        }
        Ok(Self {
            length,
            horizon,
            space_steps,
            time_steps,
            speed,
            dx,
            dt,
            ratio,
        })
    }

    /// Unit square with `c = 1`, the setting of every bundled example.
    pub fn unit(space_steps: usize, time_steps: usize) -> Result<Self> {
        Self::new(1.0, 1.0, space_steps, time_steps, 1.0)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Number of space subintervals `M`.
    pub fn m(&self) -> usize {
        self.space_steps
    }

    /// Number of time subintervals `N`.
    pub fn n(&self) -> usize {
        self.time_steps
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// CFL ratio `c dt / dx`.
    pub fn r(&self) -> f64 {
        self.ratio
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    pub fn t(&self, j: usize) -> f64 {
        j as f64 * self.dt
    }

    pub fn xs(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.space_steps + 1).map(|i| self.x(i))
    }

    pub fn ts(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.time_steps + 1).map(|j| self.t(j))
    }

    /// Number of interior nodes `M - 1`, the size of one force block.
    pub fn interior(&self) -> usize {
        self.space_steps - 1
    }
}

/// Free-function constructor matching [`GridSpec::new`].
pub fn make_grid(length: f64, horizon: f64, m: usize, n: usize, speed: f64) -> Result<GridSpec> {
    GridSpec::new(length, horizon, m, n, speed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_mesh_runs_at_unit_ratio() {
        let g = make_grid(1.0, 1.0, 80, 80, 1.0).unwrap();
        assert_eq!(g.r(), 1.0);
        assert_eq!(g.interior(), 79);
    }

    #[test]
    fn derived_steps() {
        let g = make_grid(1.0, 1.0, 10, 10, 1.0).unwrap();
        assert!((g.dx() - 0.1).abs() < 1e-15);
        assert!((g.dt() - 0.1).abs() < 1e-15);
        assert!((g.r() - 1.0).abs() < 1e-15);
        assert_eq!(g.xs().len(), 11);
        assert!((g.x(10) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_cfl_violation() {
        match make_grid(1.0, 1.0, 10, 5, 1.0) {
            Err(Error::CflViolation { ratio }) => assert!((ratio - 2.0).abs() < 1e-12),
            other => panic!("expected CflViolation, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            make_grid(1.0, 1.0, 1, 10, 1.0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            make_grid(1.0, 1.0, 4, 0, 1.0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            make_grid(-1.0, 1.0, 4, 4, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            make_grid(1.0, 1.0, 4, 4, f64::NAN),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn slower_waves_allow_coarser_time_steps() {
        let g = make_grid(2.0, 1.0, 10, 5, 0.5).unwrap();
        assert!((g.r() - 0.5).abs() < 1e-15);
    }
}
