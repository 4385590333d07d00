//! Identification of space-dependent forces in the 1-D wave equation
//! `u_tt = c^2 u_xx + f(x) h(x, t) [+ g(x) theta(x, t)]` from boundary
//! Cauchy data.
//!
//! The pipeline: an explicit central-difference solver ([`direct`]) maps a
//! force to boundary fluxes; [`inverse`] turns that affine map into a dense
//! system `A f = b`; [`regularization`] solves it with Tikhonov penalties of
//! order 0-2 and [`lcurve`] picks the parameter. [`benchmarks`] carries the
//! five reference problems.

pub mod benchmarks;
mod dense;
pub mod direct;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod inverse;
pub mod io;
pub mod lcurve;
pub mod model;
pub mod noise;
pub mod regularization;

pub use benchmarks::{example, measured_flux, measured_flux_on, DataMesh, ExactSolution, Example};
pub use dense::{singular_values, RANK_TOL};
pub use direct::{flux, solve_direct};
pub use error::{Error, Result};
pub use grid::{make_grid, GridSpec};
pub use inverse::{
    assemble_dual, assemble_single, least_squares, least_squares_dense, Assembler, FluxScaling, InverseSystem,
};
pub use lcurve::{corner, corner_with, default_lambda_grid, lambda_grid, sweep, CornerAxes, LCurve, LCurvePoint};
pub use model::{
    sample_space_time, BoundaryData, BoundaryEnd, FluxSeries, ForceLayout, ForceVector, InitialData, SourceModel,
    SpaceTimeSamples, WaveField, WaveProblem,
};
pub use noise::{add_noise, NoiseSpec};
pub use regularization::{
    accuracy_error, condition_number, difference_operator, normalized_singular_values, relative_l2_error,
    tikhonov_dense, tikhonov_solve, RegConfig, RegOrder,
};
