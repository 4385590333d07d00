//! Explicit central-difference solver for the forced wave equation and the
//! one-sided boundary flux stencils.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::model::{BoundaryEnd, FluxSeries, WaveField, WaveProblem};

/// Solve the direct problem with a fully resolved source.
///
/// Row `j = 0` is `u0`, row `j = 1` folds the velocity condition into the
/// first step (including the `dt^2 F_{i,0} / 2` term), and later rows use the
/// three-level recurrence. Boundary columns are the Dirichlet data verbatim.
pub fn solve_direct(problem: &WaveProblem) -> Result<WaveField> {
    let grid = problem.grid();
    let force = problem.source().force_samples(grid)?;
    let init = problem.init();
    let bc = problem.boundary();
    let values = march(grid, &init.displacement, &init.velocity, &bc.left, &bc.right, &force);
    Ok(WaveField { values, grid: *grid })
}

/// Time-march on raw samples. Callers guarantee the sample counts.
pub(crate) fn march(
    grid: &GridSpec,
    u0: &[f64],
    v0: &[f64],
    p0: &[f64],
    pl: &[f64],
    force: &DMatrix<f64>,
) -> DMatrix<f64> {
    let (m, n) = (grid.m(), grid.n());
    let rows = m + 1;
    let r2 = grid.r() * grid.r();
    let dt = grid.dt();
    let dt2 = dt * dt;

    let mut u = DMatrix::<f64>::zeros(rows, n + 1);
    {
        // Column-major: time level j occupies u[j * rows .. (j + 1) * rows].
        let data = u.as_mut_slice();
        data[..rows].copy_from_slice(u0);
        for j in 0..=n {
            data[j * rows] = p0[j];
            data[j * rows + m] = pl[j];
        }

        for i in 1..m {
            data[rows + i] = 0.5 * r2 * u0[i + 1]
                + (1.0 - r2) * u0[i]
                + 0.5 * r2 * u0[i - 1]
                + dt * v0[i]
                + 0.5 * dt2 * force[(i, 0)];
        }

        for j in 1..n {
            let (done, todo) = data.split_at_mut((j + 1) * rows);
            let older = &done[(j - 1) * rows..j * rows];
            let cur = &done[j * rows..(j + 1) * rows];
            let next = &mut todo[..rows];
            for i in 1..m {
                next[i] =
                    r2 * cur[i + 1] + 2.0 * (1.0 - r2) * cur[i] + r2 * cur[i - 1] - older[i] + dt2 * force[(i, j)];
            }
        }
    }
    u
}

impl WaveField {
    /// Wrap externally computed values, e.g. for flux evaluation.
    pub fn from_values(grid: GridSpec, values: DMatrix<f64>) -> Result<Self> {
        if values.shape() != (grid.m() + 1, grid.n() + 1) {
            return Err(Error::DimensionMismatch {
                what: "wave field",
                expected: (grid.m() + 1) * (grid.n() + 1),
                found: values.len(),
            });
        }
        Ok(Self { values, grid })
    }
}

/// Boundary flux at `t_1..t_N` from the second-order one-sided stencils.
pub fn flux(field: &WaveField, end: BoundaryEnd) -> Result<FluxSeries> {
    let grid = field.grid();
    if grid.m() < 2 {
        return Err(Error::DimensionMismatch {
            what: "space nodes for flux stencil",
            expected: 3,
            found: grid.m() + 1,
        });
    }
    Ok(FluxSeries::new(end, flux_values(grid, field.values(), end)))
}

pub(crate) fn flux_values(grid: &GridSpec, u: &DMatrix<f64>, end: BoundaryEnd) -> Vec<f64> {
    let m = grid.m();
    let two_dx = 2.0 * grid.dx();
    (1..=grid.n())
        .map(|j| match end {
            BoundaryEnd::Left => -(4.0 * u[(1, j)] - u[(2, j)] - 3.0 * u[(0, j)]) / two_dx,
            BoundaryEnd::Right => (3.0 * u[(m, j)] - 4.0 * u[(m - 1, j)] + u[(m - 2, j)]) / two_dx,
        })
        .collect()
}
