//! Reduction of the discrete inverse source problem to a dense system `A f = b`.
//!
//! The flux map `(force, data) -> q` of the explicit scheme is affine in the
//! force coefficients, so column `k` of `A` is the boundary-flux response to a
//! unit coefficient at interior node `x_k` with homogeneous data, and `b` is the
//! measured flux minus the response of the unforced problem with the true data.
//! This is the same system that eliminating every `u_{i,j}` from the global
//! finite-difference equations produces.

use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::dense::{numerical_rank, qr_least_squares, singular_values, RANK_TOL};
use crate::direct::{flux_values, march};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::io::format_f64;
use crate::model::{BoundaryEnd, FluxSeries, ForceLayout, ForceVector, SourceModel, SpaceTimeSamples, WaveProblem};
use crate::noise::NoiseSpec;

/// Row normalisation of the observation equations.
///
/// `Stencil` keeps each flux equation in undivided form, `2 dx q_j =
/// -(4 u_{1,j} - u_{2,j} - 3 u_{0,j})`, which puts the regularisation
/// parameter on the same scale as the published `lambda` values.
/// `Derivative` keeps rows in units of `du/dx`. Condition numbers are identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxScaling {
    #[default]
    Stencil,
    Derivative,
}

impl FluxScaling {
    pub fn factor(self, grid: &GridSpec) -> f64 {
        match self {
            FluxScaling::Stencil => 2.0 * grid.dx(),
            FluxScaling::Derivative => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InverseSystem {
    matrix: DMatrix<f64>,
    rhs: DVector<f64>,
    background: Vec<FluxSeries>,
    grid: GridSpec,
    layout: ForceLayout,
    scaling: FluxScaling,
    /// Noise applied to the measurements, if known.
    pub noise: Option<NoiseSpec>,
    /// Free-form provenance, e.g. the example id.
    pub label: Option<String>,
}

impl InverseSystem {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    /// Fluxes of the unforced problem with the true initial/boundary data.
    pub fn background(&self) -> &[FluxSeries] {
        &self.background
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn layout(&self) -> ForceLayout {
        self.layout
    }

    pub fn scaling(&self) -> FluxScaling {
        self.scaling
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Same system with `b` replaced; used for sensitivity studies.
    pub fn with_rhs(&self, rhs: DVector<f64>) -> Result<Self> {
        if rhs.len() != self.rows() {
            return Err(Error::DimensionMismatch {
                what: "right-hand side",
                expected: self.rows(),
                found: rhs.len(),
            });
        }
        Ok(Self { rhs, ..self.clone() })
    }

    pub fn residual(&self, force: &ForceVector) -> Result<DVector<f64>> {
        let f = self.force_column(force)?;
        Ok(&self.matrix * f - &self.rhs)
    }

    /// Boundary fluxes the discrete model predicts for `force`:
    /// background plus `A f`, undoing the row scaling.
    pub fn predicted_flux(&self, force: &ForceVector) -> Result<Vec<FluxSeries>> {
        let af = &self.matrix * self.force_column(force)?;
        let scale = self.scaling.factor(&self.grid);
        let n = self.grid.n();
        Ok(self
            .background
            .iter()
            .enumerate()
            .map(|(block, bg)| {
                let values = bg
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(j, q)| q + af[block * n + j] / scale)
                    .collect();
                FluxSeries::new(bg.end(), values)
            })
            .collect())
    }

    pub fn wrap_solution(&self, x: DVector<f64>) -> ForceVector {
        ForceVector::from_parts(x.iter().copied().collect(), self.layout)
    }

    fn force_column(&self, force: &ForceVector) -> Result<DVector<f64>> {
        if force.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                what: "force vector",
                expected: self.cols(),
                found: force.len(),
            });
        }
        Ok(DVector::from_column_slice(force.as_slice()))
    }

    /// Write `A` and `b` as headerless CSV, one matrix row per line.
    pub fn write_csv(&self, mut matrix_out: impl Write, mut rhs_out: impl Write) -> io::Result<()> {
        for row in self.matrix.row_iter() {
            let line: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
            writeln!(matrix_out, "{}", line.join(","))?;
        }
        for &v in self.rhs.iter() {
            writeln!(rhs_out, "{}", format_f64(v))?;
        }
        Ok(())
    }
}

/// Builds inverse systems with a chosen row scaling.
#[derive(Debug, Clone, Copy, Default)]
pub struct Assembler {
    pub scaling: FluxScaling,
}

impl Assembler {
    pub fn new(scaling: FluxScaling) -> Self {
        Self { scaling }
    }

    /// Single source `F = f(x) h(x, t)` observed through the left flux.
    pub fn single(&self, problem: &WaveProblem, measured: &FluxSeries) -> Result<InverseSystem> {
        let grid = *problem.grid();
        let h = match problem.source() {
            SourceModel::Single { h, .. } => h,
            _ => {
                return Err(Error::InvalidParameter(
                    "single-source assembly needs a Single source model".into(),
                ))
            }
        };
        measured.check(&grid, BoundaryEnd::Left)?;
        let (rows, cols) = (grid.n(), grid.interior());
        if rows < cols {
            return Err(Error::UnderdeterminedSystem { rows, cols });
        }
        let ends = [BoundaryEnd::Left];
        let matrix = self.response_matrix(&grid, &[h], &ends);
        let background = background_flux(problem, &ends);
        let rhs = self.rhs(&grid, &[measured], &background);
        Ok(InverseSystem {
            matrix,
            rhs,
            background,
            grid,
            layout: ForceLayout::Single,
            scaling: self.scaling,
            noise: None,
            label: None,
        })
    }

    /// Dual source `F = f h + g theta` observed through both end fluxes.
    /// Rows: left then right; columns: `f` block then `g` block.
    pub fn dual(&self, problem: &WaveProblem, left: &FluxSeries, right: &FluxSeries) -> Result<InverseSystem> {
        let grid = *problem.grid();
        let (h, theta) = match problem.source() {
            SourceModel::Dual { h, theta, .. } => (h, theta),
            _ => {
                return Err(Error::InvalidParameter(
                    "dual-source assembly needs a Dual source model".into(),
                ))
            }
        };
        left.check(&grid, BoundaryEnd::Left)?;
        right.check(&grid, BoundaryEnd::Right)?;
        let (rows, cols) = (2 * grid.n(), 2 * grid.interior());
        if rows < cols {
            return Err(Error::UnderdeterminedSystem { rows, cols });
        }
        let ends = [BoundaryEnd::Left, BoundaryEnd::Right];
        let matrix = self.response_matrix(&grid, &[h, theta], &ends);
        let background = background_flux(problem, &ends);
        let rhs = self.rhs(&grid, &[left, right], &background);
        Ok(InverseSystem {
            matrix,
            rhs,
            background,
            grid,
            layout: ForceLayout::Dual,
            scaling: self.scaling,
            noise: None,
            label: None,
        })
    }

    fn response_matrix(&self, grid: &GridSpec, bases: &[&SpaceTimeSamples], ends: &[BoundaryEnd]) -> DMatrix<f64> {
        let interior = grid.interior();
        let n = grid.n();
        let scale = self.scaling.factor(grid);
        let columns: Vec<Vec<f64>> = (0..bases.len() * interior)
            .into_par_iter()
            .map(|col| {
                let basis = bases[col / interior];
                unit_response(grid, basis, col % interior + 1, ends)
            })
            .collect();
        DMatrix::from_fn(ends.len() * n, columns.len(), |row, col| columns[col][row] * scale)
    }

    fn rhs(&self, grid: &GridSpec, measured: &[&FluxSeries], background: &[FluxSeries]) -> DVector<f64> {
        let scale = self.scaling.factor(grid);
        let values: Vec<f64> = measured
            .iter()
            .zip(background)
            .flat_map(|(m, bg)| m.values().iter().zip(bg.values()).map(move |(q, q0)| (q - q0) * scale))
            .collect();
        DVector::from_vec(values)
    }
}

/// Stacked end fluxes for a unit coefficient at interior node `node`.
fn unit_response(grid: &GridSpec, basis: &SpaceTimeSamples, node: usize, ends: &[BoundaryEnd]) -> Vec<f64> {
    let (m, n) = (grid.m(), grid.n());
    let mut force = DMatrix::zeros(m + 1, n + 1);
    force.row_mut(node).copy_from(&basis.row(node));
    let zx = vec![0.0; m + 1];
    let zt = vec![0.0; n + 1];
    let u = march(grid, &zx, &zx, &zt, &zt, &force);
    ends.iter().flat_map(|&end| flux_values(grid, &u, end)).collect()
}

fn background_flux(problem: &WaveProblem, ends: &[BoundaryEnd]) -> Vec<FluxSeries> {
    let grid = problem.grid();
    let init = problem.init();
    let bc = problem.boundary();
    let zero = DMatrix::zeros(grid.m() + 1, grid.n() + 1);
    let u = march(grid, &init.displacement, &init.velocity, &bc.left, &bc.right, &zero);
    ends.iter()
        .map(|&end| FluxSeries::new(end, flux_values(grid, &u, end)))
        .collect()
}

pub fn assemble_single(problem: &WaveProblem, measured: &FluxSeries) -> Result<InverseSystem> {
    Assembler::default().single(problem, measured)
}

pub fn assemble_dual(problem: &WaveProblem, left: &FluxSeries, right: &FluxSeries) -> Result<InverseSystem> {
    Assembler::default().dual(problem, left, right)
}

/// Plain least-squares solution of `A f = b`.
pub fn least_squares(sys: &InverseSystem) -> Result<ForceVector> {
    least_squares_dense(sys.matrix(), sys.rhs()).map(|x| sys.wrap_solution(x))
}

/// Least squares on a bare matrix, refusing numerically rank-deficient `a`
/// (singular values below `1e-12 * sv(1)`).
pub fn least_squares_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::UnderdeterminedSystem { rows, cols });
    }
    let rank = numerical_rank(&singular_values(a), RANK_TOL);
    if rank < cols {
        return Err(Error::RankDeficient { rank, cols });
    }
    qr_least_squares(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_space_time, BoundaryData, InitialData};

    fn homogeneous(grid: GridSpec, h: SpaceTimeSamples) -> WaveProblem {
        WaveProblem::new(
            grid,
            InitialData::zeros(&grid),
            BoundaryData::zeros(&grid),
            SourceModel::Single { h, f: None },
        )
        .unwrap()
    }

    #[test]
    fn shape_is_n_by_interior() {
        let g = GridSpec::unit(6, 8).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, _| 1.0));
        let sys = assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![0.0; 8])).unwrap();
        assert_eq!((sys.rows(), sys.cols()), (8, 5));
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let g = GridSpec::unit(6, 6).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |x, t| 1.0 + x * t));
        let sys = assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![0.0; 6])).unwrap();
        assert!(sys.rhs().iter().all(|&v| v == 0.0));
        let f = least_squares(&sys).unwrap();
        assert!(f.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn underdetermined_is_rejected() {
        let g = GridSpec::new(1.0, 0.25, 8, 2, 1.0).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, _| 1.0));
        let err = assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![0.0; 2])).unwrap_err();
        assert_eq!(err, Error::UnderdeterminedSystem { rows: 2, cols: 7 });
    }

    #[test]
    fn measured_series_must_match() {
        let g = GridSpec::unit(4, 4).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, _| 1.0));
        assert!(assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![0.0; 3])).is_err());
        assert!(assemble_single(&p, &FluxSeries::new(BoundaryEnd::Right, vec![0.0; 4])).is_err());
    }

    #[test]
    fn zero_basis_is_rank_deficient() {
        let g = GridSpec::unit(5, 5).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, _| 0.0));
        let sys = assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![1.0; 5])).unwrap();
        assert!(matches!(
            least_squares(&sys),
            Err(Error::RankDeficient { rank: 0, cols: 4 })
        ));
    }

    #[test]
    fn identity_least_squares() {
        let a = DMatrix::<f64>::identity(4, 4);
        let b = DVector::from_vec(vec![1.0, -2.0, 3.5, 0.25]);
        assert!((least_squares_dense(&a, &b).unwrap() - &b).amax() < 1e-15);
    }

    #[test]
    fn scaling_changes_magnitude_not_shape() {
        let g = GridSpec::unit(8, 8).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, t| 1.0 + t));
        let q = FluxSeries::new(BoundaryEnd::Left, (1..=8).map(|j| j as f64).collect());
        let a = Assembler::new(FluxScaling::Stencil).single(&p, &q).unwrap();
        let b = Assembler::new(FluxScaling::Derivative).single(&p, &q).unwrap();
        let ratio = 2.0 * g.dx();
        assert!((a.matrix() - b.matrix() * ratio).amax() < 1e-15);
        assert!((a.rhs() - b.rhs() * ratio).amax() < 1e-15);
    }

    #[test]
    fn dual_with_null_theta_reuses_single_block() {
        let g = GridSpec::unit(6, 6).unwrap();
        let h = sample_space_time(&g, |x, t| 1.0 + x + t);
        let zero = sample_space_time(&g, |_, _| 0.0);
        let single = homogeneous(g, h.clone());
        let dual = single
            .with_source(SourceModel::Dual {
                h,
                theta: zero,
                f: None,
                g: None,
            })
            .unwrap();
        let l = FluxSeries::new(BoundaryEnd::Left, vec![0.5; 6]);
        let r = FluxSeries::new(BoundaryEnd::Right, vec![0.5; 6]);
        let s = assemble_single(&single, &l).unwrap();
        let d = assemble_dual(&dual, &l, &r).unwrap();
        assert_eq!((d.rows(), d.cols()), (12, 10));
        assert_eq!(d.matrix().view((0, 0), (6, 5)), s.matrix().view((0, 0), (6, 5)));
        assert!(d.matrix().view((0, 5), (12, 5)).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn csv_dump_layout() {
        let g = GridSpec::unit(3, 3).unwrap();
        let p = homogeneous(g, sample_space_time(&g, |_, _| 1.0));
        let sys = assemble_single(&p, &FluxSeries::new(BoundaryEnd::Left, vec![1.0, 2.0, 3.0])).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        sys.write_csv(&mut a, &mut b).unwrap();
        let a = String::from_utf8(a).unwrap();
        assert_eq!(a.lines().count(), 3);
        assert!(a.lines().all(|l| l.split(',').count() == 2));
        assert_eq!(String::from_utf8(b).unwrap().lines().count(), 3);
    }
}
