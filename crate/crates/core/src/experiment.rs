//! End-to-end runs on the bundled examples: data, noise, assembly, inversion.

use crate::benchmarks::{example, measured_flux_on, DataMesh, ExactSolution, Example};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::inverse::{Assembler, FluxScaling, InverseSystem};
use crate::model::BoundaryEnd;
use crate::noise::{add_noise, NoiseSpec};
use crate::regularization::{accuracy_error, relative_l2_error, tikhonov_solve, RegConfig};
use crate::ForceVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub example: Example,
    pub grid: GridSpec,
    pub noise: NoiseSpec,
    pub scaling: FluxScaling,
    pub data_mesh: DataMesh,
}

impl Scenario {
    pub fn new(example: Example, grid: GridSpec) -> Self {
        Self {
            example,
            grid,
            noise: NoiseSpec::none(),
            scaling: FluxScaling::default(),
            data_mesh: DataMesh::default(),
        }
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_scaling(mut self, scaling: FluxScaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn with_data_mesh(mut self, mesh: DataMesh) -> Self {
        self.data_mesh = mesh;
        self
    }

    /// Noisy measurements assembled into `A f = b`.
    pub fn system(&self) -> Result<(InverseSystem, ExactSolution)> {
        let (problem, exact) = example(self.example, &self.grid)?;
        let measure = |end| -> Result<_> {
            let q = measured_flux_on(self.example, &self.grid, end, self.data_mesh)?;
            Ok(add_noise(&q, &self.noise))
        };
        let assembler = Assembler::new(self.scaling);
        let mut sys = if self.example.is_dual() {
            assembler.dual(&problem, &measure(BoundaryEnd::Left)?, &measure(BoundaryEnd::Right)?)?
        } else {
            assembler.single(&problem, &measure(BoundaryEnd::Left)?)?
        };
        sys.noise = Some(self.noise);
        sys.label = Some(format!("example {}", self.example.id()));
        Ok((sys, exact))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inversion {
    pub force: ForceVector,
    pub config: RegConfig,
    /// `||f_num - f_exact||` over all unknowns.
    pub accuracy_error: f64,
    pub f_relative_error: f64,
    pub g_relative_error: Option<f64>,
}

pub fn invert(sys: &InverseSystem, exact: &ExactSolution, config: RegConfig) -> Result<Inversion> {
    let force = tikhonov_solve(sys, &config)?;
    let accuracy_error = accuracy_error(force.as_slice(), exact.force.as_slice())?;
    let f_relative_error = relative_l2_error(force.f(), exact.f())?;
    let g_relative_error = match (force.g(), exact.g()) {
        (Some(g), Some(ge)) => Some(relative_l2_error(g, ge)?),
        _ => None,
    };
    Ok(Inversion {
        force,
        config,
        accuracy_error,
        f_relative_error,
        g_relative_error,
    })
}
