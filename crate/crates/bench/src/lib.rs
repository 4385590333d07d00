//! Fixtures shared by the benchmark targets.

use wavesource::{experiment::Scenario, Example, GridSpec, InverseSystem, NoiseSpec, Result};

/// Mesh sizes swept by the scaling benchmarks.
pub const SIZES: [usize; 4] = [10, 20, 40, 80];

/// Example `ex` at `M = N = size` with `percent` noise and a fixed seed.
pub fn noisy_system(ex: Example, size: usize, percent: f64) -> Result<InverseSystem> {
    let grid = GridSpec::unit(size, size)?;
    let scenario = Scenario::new(ex, grid).with_noise(NoiseSpec::from_percent(percent, 7)?);
    Ok(scenario.system()?.0)
}
