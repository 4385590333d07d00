//! The five benchmark problems: closed-form data sampled onto a grid, plus
//! exact solutions for error reporting.
//!
//! | id | `h(x,t)`   | data                               | exact `f`           |
//! |----|------------|------------------------------------|---------------------|
//! | 1  | 1          | `u0 = sin(pi x)`, `v0 = 1`         | `1 + pi^2 sin(pi x)`|
//! | 2  | 1 + t      | zero                               | hat                 |
//! | 3  | 1 + x + t  | zero                               | hat                 |
//! | 4  | t^2        | zero                               | hat                 |
//! | 5  | 1, theta=t | `v0 = x^2 + 1`, `PL = 2t + t^2/2`  | as 1, `g = -2`      |

use std::f64::consts::PI;

use crate::direct::{flux, solve_direct};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{
    sample_space_time, BoundaryData, BoundaryEnd, FluxSeries, ForceVector, InitialData, SourceModel, WaveProblem,
};
use crate::regularization::RegOrder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Example {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
    Five = 5,
}

/// Triangular force, peak `0.5` at `x = 1/2`.
pub fn hat(x: f64) -> f64 {
    if x <= 0.5 {
        x
    } else {
        1.0 - x
    }
}

impl Example {
    pub const ALL: [Example; 5] = [Example::One, Example::Two, Example::Three, Example::Four, Example::Five];
    pub const SINGLE_SOURCE: [Example; 4] = [Example::One, Example::Two, Example::Three, Example::Four];

    pub fn from_id(id: u8) -> Result<Self> {
        match id {
            1 => Ok(Example::One),
            2 => Ok(Example::Two),
            3 => Ok(Example::Three),
            4 => Ok(Example::Four),
            5 => Ok(Example::Five),
            _ => Err(Error::UnknownExample(id)),
        }
    }

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn is_dual(self) -> bool {
        self == Example::Five
    }

    pub fn u0(self, x: f64) -> f64 {
        match self {
            Example::One | Example::Five => (PI * x).sin(),
            _ => 0.0,
        }
    }

    pub fn v0(self, x: f64) -> f64 {
        match self {
            Example::One => 1.0,
            Example::Five => x * x + 1.0,
            _ => 0.0,
        }
    }

    pub fn p0(self, t: f64) -> f64 {
        match self {
            Example::One | Example::Five => t + 0.5 * t * t,
            _ => 0.0,
        }
    }

    pub fn pl(self, t: f64) -> f64 {
        match self {
            Example::One => t + 0.5 * t * t,
            Example::Five => 2.0 * t + 0.5 * t * t,
            _ => 0.0,
        }
    }

    pub fn h(self, x: f64, t: f64) -> f64 {
        match self {
            Example::One | Example::Five => 1.0,
            Example::Two => 1.0 + t,
            Example::Three => 1.0 + x + t,
            Example::Four => t * t,
        }
    }

    pub fn theta(self, _x: f64, t: f64) -> Option<f64> {
        self.is_dual().then_some(t)
    }

    pub fn exact_f(self, x: f64) -> f64 {
        match self {
            Example::One | Example::Five => 1.0 + PI * PI * (PI * x).sin(),
            _ => hat(x),
        }
    }

    pub fn exact_g(self, _x: f64) -> Option<f64> {
        self.is_dual().then_some(-2.0)
    }

    /// Closed-form displacement, where one exists.
    pub fn exact_u(self, x: f64, t: f64) -> Option<f64> {
        match self {
            Example::One => Some((PI * x).sin() + t + 0.5 * t * t),
            Example::Five => Some(x * x * t + (PI * x).sin() + t + 0.5 * t * t),
            _ => None,
        }
    }

    /// Closed-form outward flux, where one exists.
    pub fn exact_flux(self, end: BoundaryEnd, t: f64) -> Option<f64> {
        match (self, end) {
            (Example::One, _) | (Example::Five, BoundaryEnd::Left) => Some(-PI),
            (Example::Five, BoundaryEnd::Right) => Some(2.0 * t - PI),
            _ => None,
        }
    }
}

/// Exact force on the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub force: ForceVector,
}

impl ExactSolution {
    pub fn f(&self) -> &[f64] {
        self.force.f()
    }

    pub fn g(&self) -> Option<&[f64]> {
        self.force.g()
    }
}

fn require_unit_grid(grid: &GridSpec) -> Result<()> {
    if grid.length() != 1.0 || grid.horizon() != 1.0 || grid.speed() != 1.0 {
        return Err(Error::InvalidParameter(
            "bundled examples are posed with c = L = T = 1".into(),
        ));
    }
    Ok(())
}

/// Problem with the force left unknown, plus the exact force on the grid.
pub fn example(ex: Example, grid: &GridSpec) -> Result<(WaveProblem, ExactSolution)> {
    require_unit_grid(grid)?;
    let init = InitialData::sample(grid, |x| ex.u0(x), |x| ex.v0(x));
    let bc = BoundaryData::sample(grid, |t| ex.p0(t), |t| ex.pl(t));
    let h = sample_space_time(grid, |x, t| ex.h(x, t));
    let interior: Vec<f64> = (1..grid.m()).map(|i| grid.x(i)).collect();
    let f: Vec<f64> = interior.iter().map(|&x| ex.exact_f(x)).collect();
    let (source, force) = if ex.is_dual() {
        let theta = sample_space_time(grid, |x, t| ex.theta(x, t).unwrap_or(0.0));
        let g: Vec<f64> = interior.iter().map(|&x| ex.exact_g(x).unwrap_or(0.0)).collect();
        let force = ForceVector::dual(&f, &g)?;
        (
            SourceModel::Dual {
                h,
                theta,
                f: None,
                g: None,
            },
            force,
        )
    } else {
        (SourceModel::Single { h, f: None }, ForceVector::single(f))
    };
    Ok((WaveProblem::new(*grid, init, bc, source)?, ExactSolution { force }))
}

/// Where synthetic measurements for examples 2-4 are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataMesh {
    /// The inversion mesh itself (the published setup).
    #[default]
    Same,
    /// A mesh refined by this factor in both `x` and `t`, restricted to the
    /// coarse time nodes.
    Refined(usize),
}

/// Noise-free measured flux at `end` on the inversion grid.
pub fn measured_flux(ex: Example, grid: &GridSpec, end: BoundaryEnd) -> Result<FluxSeries> {
    measured_flux_on(ex, grid, end, DataMesh::Same)
}

/// Analytic flux for examples 1 and 5; otherwise the direct-solver flux with
/// the exact force on the chosen data mesh.
pub fn measured_flux_on(ex: Example, grid: &GridSpec, end: BoundaryEnd, mesh: DataMesh) -> Result<FluxSeries> {
    require_unit_grid(grid)?;
    if ex.exact_flux(end, 0.0).is_some() {
        return Ok(FluxSeries::sample(grid, end, |t| ex.exact_flux(end, t).unwrap()));
    }
    let factor = match mesh {
        DataMesh::Same => 1,
        DataMesh::Refined(0) => return Err(Error::InvalidParameter("refinement factor must be >= 1".into())),
        DataMesh::Refined(k) => k,
    };
    let fine = GridSpec::unit(grid.m() * factor, grid.n() * factor)?;
    let (problem, exact) = example(ex, &fine)?;
    let resolved = problem.with_source(problem.source().with_force(&exact.force)?)?;
    let q = flux(&solve_direct(&resolved)?, end)?;
    let coarse = (1..=grid.n()).map(|j| q.at(j * factor)).collect();
    Ok(FluxSeries::new(end, coarse))
}

/// Tabulated optimal regularisation parameters for examples 2-4 at
/// `M = N = 80`, indexed by order then noise level (1, 3, 5 %).
pub fn reference_lambda(ex: Example, order: RegOrder, percent: u32) -> Option<f64> {
    let table: [[f64; 3]; 3] = match ex {
        Example::Two => [[1e-6, 1e-5, 1e-5], [1e-4, 1e-4, 1e-3], [1e-3, 1e-1, 1e-1]],
        Example::Three => [[1e-5, 1e-5, 1e-5], [1e-4, 1e-3, 1e-3], [1e-3, 1e-1, 1e-1]],
        Example::Four => [[1e-8, 1e-8, 1e-8], [1e-6, 1e-6, 1e-5], [1e-5, 1e-4, 1e-4]],
        _ => return None,
    };
    let col = match percent {
        1 => 0,
        3 => 1,
        5 => 2,
        _ => return None,
    };
    Some(table[order.k()][col])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_one_flux_is_minus_pi() {
        let g = GridSpec::unit(80, 80).unwrap();
        let q = measured_flux(Example::One, &g, BoundaryEnd::Left).unwrap();
        assert_eq!(q.len(), 80);
        assert!(q.values().iter().all(|&v| v == -PI));
    }

    #[test]
    fn hat_peaks_at_half() {
        let g = GridSpec::unit(80, 80).unwrap();
        let (_, exact) = example(Example::Two, &g).unwrap();
        let f = exact.f();
        let peak = f.iter().cloned().fold(f64::MIN, f64::max);
        assert_eq!(peak, 0.5);
        assert_eq!(f[39], 0.5); // x_40 = 1/2
        assert_eq!(hat(0.5), 0.5);
    }

    #[test]
    fn example_five_has_constant_g() {
        let g = GridSpec::unit(20, 20).unwrap();
        let (p, exact) = example(Example::Five, &g).unwrap();
        assert!(matches!(p.source(), SourceModel::Dual { .. }));
        assert!(exact.g().unwrap().iter().all(|&v| v == -2.0));
        assert_eq!(exact.g().unwrap().len(), 19);
    }

    #[test]
    fn example_five_exact_u_matches_data() {
        let g = GridSpec::unit(16, 16).unwrap();
        let (p, _) = example(Example::Five, &g).unwrap();
        let ex = Example::Five;
        for (i, x) in g.xs().enumerate() {
            assert_eq!(p.init().displacement[i], ex.exact_u(x, 0.0).unwrap());
        }
        for (j, t) in g.ts().enumerate() {
            assert!((p.boundary().left[j] - ex.exact_u(0.0, t).unwrap()).abs() < 1e-15);
            assert!((p.boundary().right[j] - ex.exact_u(1.0, t).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn unknown_ids_and_grids() {
        assert_eq!(Example::from_id(6), Err(Error::UnknownExample(6)));
        assert_eq!(Example::from_id(0), Err(Error::UnknownExample(0)));
        let g = GridSpec::new(2.0, 1.0, 10, 10, 1.0).unwrap();
        assert!(example(Example::One, &g).is_err());
    }

    #[test]
    fn refined_data_is_close_to_same_mesh() {
        let g = GridSpec::unit(20, 20).unwrap();
        let same = measured_flux(Example::Two, &g, BoundaryEnd::Left).unwrap();
        let fine = measured_flux_on(Example::Two, &g, BoundaryEnd::Left, DataMesh::Refined(4)).unwrap();
        let gap = same
            .values()
            .iter()
            .zip(fine.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(gap > 0.0 && gap < 5e-3, "gap {gap}");
    }

    #[test]
    fn reference_lambda_lookup() {
        assert_eq!(reference_lambda(Example::Two, RegOrder::Second, 1), Some(1e-3));
        assert_eq!(reference_lambda(Example::Four, RegOrder::First, 5), Some(1e-5));
        assert_eq!(reference_lambda(Example::One, RegOrder::First, 5), None);
        assert_eq!(reference_lambda(Example::Two, RegOrder::First, 2), None);
    }
}
