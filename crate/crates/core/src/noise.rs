//! Reproducible additive Gaussian noise on flux measurements.
//!
//! Each series is perturbed by i.i.d. `N(0, sigma^2)` draws with
//! `sigma = p * max_j |q_j|`. The generator is ChaCha8 seeded from the user
//! seed mixed with the boundary-end tag, so left and right series in a
//! dual-source run use independent streams. Normals come from `rand_distr`'s
//! ziggurat sampler.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::FluxSeries;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    fraction: f64,
    pub seed: u64,
}

impl NoiseSpec {
    /// `fraction` is the noise level as a fraction: `0.01` means 1%.
    pub fn new(fraction: f64, seed: u64) -> Result<Self> {
        if !(fraction.is_finite() && fraction >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "noise level must be >= 0, got {fraction}"
            )));
        }
        Ok(Self { fraction, seed })
    }

    pub fn from_percent(percent: f64, seed: u64) -> Result<Self> {
        Self::new(percent / 100.0, seed)
    }

    pub fn none() -> Self {
        Self { fraction: 0.0, seed: 0 }
    }

    pub fn fraction(&self) -> f64 {
        self.fraction
    }

    pub fn percent(&self) -> f64 {
        self.fraction * 100.0
    }

    /// Standard deviation used for `q`.
    pub fn sigma(&self, q: &FluxSeries) -> f64 {
        self.fraction * q.max_abs()
    }
}

fn stream_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn add_noise(q: &FluxSeries, spec: &NoiseSpec) -> FluxSeries {
    let sigma = spec.sigma(q);
    if sigma == 0.0 {
        return q.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(spec.seed, q.end().tag()));
    let values = q
        .values()
        .iter()
        .map(|&v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + sigma * z
        })
        .collect();
    FluxSeries::new(q.end(), values)
}
