//! Shared domain types: initial/boundary data, source models, fields, fluxes and
//! force vectors. Everything here is plain data; the algorithms live elsewhere.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Compatibility tolerance between boundary and initial displacement at `t = 0`.
pub const COMPATIBILITY_TOL: f64 = 1e-12;

/// Initial displacement `u0` and velocity `v0`, sampled on `x_0..x_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub displacement: Vec<f64>,
    pub velocity: Vec<f64>,
}

impl InitialData {
    pub fn new(displacement: Vec<f64>, velocity: Vec<f64>) -> Self {
        Self { displacement, velocity }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        let n = grid.m() + 1;
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    pub fn sample(grid: &GridSpec, u0: impl Fn(f64) -> f64, v0: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.xs().map(&u0).collect(), grid.xs().map(&v0).collect())
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        expect_len("initial displacement", &self.displacement, grid.m() + 1)?;
        expect_len("initial velocity", &self.velocity, grid.m() + 1)
    }
}

/// Dirichlet data `P0(t)` at `x = 0` and `PL(t)` at `x = L`, sampled on `t_0..t_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl BoundaryData {
    pub fn new(left: Vec<f64>, right: Vec<f64>) -> Self {
        Self { left, right }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        let n = grid.n() + 1;
        Self::new(vec![0.0; n], vec![0.0; n])
    }

    pub fn sample(grid: &GridSpec, p0: impl Fn(f64) -> f64, pl: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.ts().map(&p0).collect(), grid.ts().map(&pl).collect())
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        expect_len("left boundary data", &self.left, grid.n() + 1)?;
        expect_len("right boundary data", &self.right, grid.n() + 1)
    }
}

/// Samples of a function of `(x_i, t_j)`, stored `(M + 1) x (N + 1)`.
pub type SpaceTimeSamples = DMatrix<f64>;

pub fn sample_space_time(grid: &GridSpec, f: impl Fn(f64, f64) -> f64) -> SpaceTimeSamples {
    DMatrix::from_fn(grid.m() + 1, grid.n() + 1, |i, j| f(grid.x(i), grid.t(j)))
}

/// How the forcing term `F(x, t)` is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum SourceModel {
    /// Fully known `F(x_i, t_j)`.
    Known(SpaceTimeSamples),
    /// `F = f(x) h(x, t)` with `f` on the interior nodes, possibly unknown.
    Single { h: SpaceTimeSamples, f: Option<Vec<f64>> },
    /// `F = f(x) h(x, t) + g(x) theta(x, t)`.
    Dual {
        h: SpaceTimeSamples,
        theta: SpaceTimeSamples,
        f: Option<Vec<f64>>,
        g: Option<Vec<f64>>,
    },
}

impl SourceModel {
    pub fn zero(grid: &GridSpec) -> Self {
        SourceModel::Known(DMatrix::zeros(grid.m() + 1, grid.n() + 1))
    }

    pub fn unknowns(&self) -> usize {
        match self {
            SourceModel::Known(_) => 0,
            SourceModel::Single { .. } => 1,
            SourceModel::Dual { .. } => 2,
        }
    }

    /// Replace the unknown components by `force`.
    pub fn with_force(&self, force: &ForceVector) -> Result<Self> {
        match (self, force.layout()) {
            (SourceModel::Single { h, .. }, ForceLayout::Single) => Ok(SourceModel::Single {
                h: h.clone(),
                f: Some(force.f().to_vec()),
            }),
            (SourceModel::Dual { h, theta, .. }, ForceLayout::Dual) => Ok(SourceModel::Dual {
                h: h.clone(),
                theta: theta.clone(),
                f: Some(force.f().to_vec()),
                g: force.g().map(<[f64]>::to_vec),
            }),
            (SourceModel::Known(_), _) => Err(Error::InvalidParameter(
                "known source has no unknown force to substitute".into(),
            )),
            _ => Err(Error::InvalidParameter(
                "force layout does not match source model".into(),
            )),
        }
    }

    fn check(&self, grid: &GridSpec) -> Result<()> {
        let shape = (grid.m() + 1, grid.n() + 1);
        let check_shape = |what: &'static str, a: &SpaceTimeSamples| {
            if a.shape() != shape {
                Err(Error::DimensionMismatch {
                    what,
                    expected: shape.0 * shape.1,
                    found: a.len(),
                })
            } else {
                Ok(())
            }
        };
        let check_force = |what: &'static str, f: &Option<Vec<f64>>| match f {
            Some(f) => expect_len(what, f, grid.interior()),
            None => Ok(()),
        };
        match self {
            SourceModel::Known(force) => check_shape("force samples", force),
            SourceModel::Single { h, f } => {
                check_shape("h samples", h)?;
                check_force("f", f)
            }
            SourceModel::Dual { h, theta, f, g } => {
                check_shape("h samples", h)?;
                check_shape("theta samples", theta)?;
                check_force("f", f)?;
                check_force("g", g)
            }
        }
    }

    /// Concrete `F_{i,j}`. Interior rows carry `f_i h_{i,j} (+ g_i theta_{i,j})`;
    /// the boundary rows are never read by the scheme and are left at zero.
    pub fn force_samples(&self, grid: &GridSpec) -> Result<SpaceTimeSamples> {
        self.check(grid)?;
        let interior = |mut out: SpaceTimeSamples, coeff: &[f64], basis: &SpaceTimeSamples| {
            for j in 0..=grid.n() {
                for (k, c) in coeff.iter().enumerate() {
                    out[(k + 1, j)] += c * basis[(k + 1, j)];
                }
            }
            out
        };
        let zeros = DMatrix::zeros(grid.m() + 1, grid.n() + 1);
        match self {
            SourceModel::Known(force) => Ok(force.clone()),
            SourceModel::Single { h, f: Some(f) } => Ok(interior(zeros, f, h)),
            SourceModel::Dual {
                h,
                theta,
                f: Some(f),
                g: Some(g),
            } => Ok(interior(interior(zeros, f, h), g, theta)),
            SourceModel::Single { .. } => Err(Error::UnresolvedSource("f")),
            SourceModel::Dual { f: None, .. } => Err(Error::UnresolvedSource("f")),
            SourceModel::Dual { .. } => Err(Error::UnresolvedSource("g")),
        }
    }
}

/// One direct (or inverse) problem instance: mesh, data and source.
///
/// Construction checks every sample count against the grid and enforces
/// `P0(0) = u0(0)`, `PL(0) = u0(L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProblem {
    grid: GridSpec,
    init: InitialData,
    boundary: BoundaryData,
    source: SourceModel,
}

impl WaveProblem {
    pub fn new(grid: GridSpec, init: InitialData, boundary: BoundaryData, source: SourceModel) -> Result<Self> {
        init.check(&grid)?;
        boundary.check(&grid)?;
        source.check(&grid)?;
        let m = grid.m();
        for (at, b, u) in [
            (0.0, boundary.left[0], init.displacement[0]),
            (grid.length(), boundary.right[0], init.displacement[m]),
        ] {
            if (b - u).abs() > COMPATIBILITY_TOL {
                return Err(Error::IncompatibleData {
                    at,
                    boundary: b,
                    initial: u,
                });
            }
        }
        Ok(Self {
            grid,
            init,
            boundary,
            source,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn init(&self) -> &InitialData {
        &self.init
    }

    pub fn boundary(&self) -> &BoundaryData {
        &self.boundary
    }

    pub fn source(&self) -> &SourceModel {
        &self.source
    }

    pub fn with_source(&self, source: SourceModel) -> Result<Self> {
        source.check(&self.grid)?;
        Ok(Self { source, ..self.clone() })
    }

    /// Same data with the force removed.
    pub fn unforced(&self) -> Self {
        Self {
            source: SourceModel::zero(&self.grid),
            ..self.clone()
        }
    }
}

/// Displacement `u_{i,j}` on the mesh, `(M + 1) x (N + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub(crate) values: DMatrix<f64>,
    pub(crate) grid: GridSpec,
}

impl WaveField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn max_abs_error(&self, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0_f64;
        for j in 0..=g.n() {
            for i in 0..=g.m() {
                worst = worst.max((self.values[(i, j)] - exact(g.x(i), g.t(j))).abs());
            }
        }
        worst
    }
}

/// String end at which a flux is observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryEnd {
    Left,
    Right,
}

impl BoundaryEnd {
    pub fn tag(self) -> u64 {
        match self {
            BoundaryEnd::Left => 0x4c45_4654,
            BoundaryEnd::Right => 0x5249_4748,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryEnd::Left => "left",
            BoundaryEnd::Right => "right",
        }
    }
}

/// Boundary flux samples at `t_1..t_N`.
///
/// `Left` stores `-du/dx(0, t)`, `Right` stores `+du/dx(L, t)`: both are the
/// outward normal derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct FluxSeries {
    end: BoundaryEnd,
    values: Vec<f64>,
}

impl FluxSeries {
    pub fn new(end: BoundaryEnd, values: Vec<f64>) -> Self {
        Self { end, values }
    }

    pub fn sample(grid: &GridSpec, end: BoundaryEnd, q: impl Fn(f64) -> f64) -> Self {
        Self::new(end, (1..=grid.n()).map(|j| q(grid.t(j))).collect())
    }

    pub fn end(&self) -> BoundaryEnd {
        self.end
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at time index `j` (1-based, as on the mesh).
    pub fn at(&self, j: usize) -> f64 {
        self.values[j - 1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub(crate) fn check(&self, grid: &GridSpec, end: BoundaryEnd) -> Result<()> {
        if self.end != end {
            return Err(Error::InvalidParameter(format!(
                "expected a {} flux series, got {}",
                end.name(),
                self.end.name()
            )));
        }
        expect_len("flux series", &self.values, grid.n())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceLayout {
    Single,
    Dual,
}

/// Nodal force values on `x_1..x_{M-1}`; dual-source vectors stack `f` then `g`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceVector {
    values: Vec<f64>,
    layout: ForceLayout,
}

impl ForceVector {
    pub fn single(f: Vec<f64>) -> Self {
        Self {
            values: f,
            layout: ForceLayout::Single,
        }
    }

    pub fn dual(f: &[f64], g: &[f64]) -> Result<Self> {
        expect_len("g", g, f.len())?;
        Ok(Self {
            values: f.iter().chain(g).copied().collect(),
            layout: ForceLayout::Dual,
        })
    }

    pub(crate) fn from_parts(values: Vec<f64>, layout: ForceLayout) -> Self {
        Self { values, layout }
    }

    pub fn layout(&self) -> ForceLayout {
        self.layout
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn block(&self) -> usize {
        match self.layout {
            ForceLayout::Single => self.values.len(),
            ForceLayout::Dual => self.values.len() / 2,
        }
    }

    pub fn f(&self) -> &[f64] {
        &self.values[..self.block()]
    }

    pub fn g(&self) -> Option<&[f64]> {
        match self.layout {
            ForceLayout::Single => None,
            ForceLayout::Dual => Some(&self.values[self.block()..]),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub(crate) fn expect_len(what: &'static str, v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            what,
            expected,
            found: v.len(),
        });
    }
    Ok(())
}
