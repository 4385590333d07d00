//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use wavesource::{lambda_grid, CornerAxes, FluxScaling, GridSpec, RegOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scaling {
    Stencil,
    Derivative,
}

impl From<Scaling> for FluxScaling {
    fn from(s: Scaling) -> Self {
        match s {
            Scaling::Stencil => FluxScaling::Stencil,
            Scaling::Derivative => FluxScaling::Derivative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axes {
    Linear,
    Loglog,
}

impl From<Axes> for CornerAxes {
    fn from(a: Axes) -> Self {
        match a {
            Axes::Linear => CornerAxes::Linear,
            Axes::Loglog => CornerAxes::LogLog,
        }
    }
}

/// Every setting, all optional. Used both as the JSON file schema and as the
/// flag set; flags win.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    /// Bundled example 1-5
    #[arg(long)]
    pub example: Option<u8>,
    /// Space subintervals
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Time subintervals
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// String length
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,
    /// Time horizon
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
    /// Wave speed
    #[arg(long = "c")]
    #[serde(rename = "c")]
    pub speed: Option<f64>,
    /// Noise level in percent (1 means 1%)
    #[arg(long)]
    pub noise_pct: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Regularisation order 0, 1 or 2
    #[arg(long)]
    pub reg_order: Option<u8>,
    /// Regularisation parameter, or "lcurve" to pick it from the L-curve corner
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Comma-separated lambda values, ascending
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda_grid: Option<Vec<f64>>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Row scaling of the flux equations
    #[arg(long, value_enum)]
    pub scaling: Option<Scaling>,
    /// Axes on which the L-curve corner is located
    #[arg(long, value_enum)]
    pub corner_axes: Option<Axes>,
    /// Generate example data on a mesh refined by this factor
    #[arg(long)]
    pub data_refine: Option<usize>,
    /// Also write A.csv and b.csv
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_system: Option<bool>,

    /// External initial displacement (M+1 lines)
    #[arg(long)]
    pub u0: Option<PathBuf>,
    /// External initial velocity (M+1 lines)
    #[arg(long)]
    pub v0: Option<PathBuf>,
    /// External left Dirichlet data (N+1 lines)
    #[arg(long)]
    pub p0: Option<PathBuf>,
    /// External right Dirichlet data (N+1 lines)
    #[arg(long)]
    pub pl: Option<PathBuf>,
    /// External force F(x_i, t_j): M+1 rows of N+1 comma-separated values
    #[arg(long)]
    pub force: Option<PathBuf>,
    /// External basis h(x_i, t_j), same layout as --force
    #[arg(long)]
    pub h: Option<PathBuf>,
    /// External second basis theta(x_i, t_j) for dual-source inversion
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// Measured left flux, N lines for t_1..t_N
    #[arg(long)]
    pub flux_left: Option<PathBuf>,
    /// Measured right flux, N lines for t_1..t_N
    #[arg(long)]
    pub flux_right: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn overlay(mut self, top: &Settings) -> Self {
        overlay!(
            self,
            top,
            example,
            m,
            n,
            length,
            horizon,
            speed,
            noise_pct,
            seed,
            reg_order,
            lambda,
            lambda_grid,
            out,
            scaling,
            corner_axes,
            data_refine,
            dump_system,
            u0,
            v0,
            p0,
            pl,
            force,
            h,
            theta,
            flux_left,
            flux_right
        );
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "value")]
pub enum LambdaChoice {
    Fixed(f64),
    Lcurve,
}

/// Fully resolved configuration, recorded verbatim in the run manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(skip)]
    pub command: &'static str,
    #[serde(flatten)]
    pub settings: Settings,
    #[serde(skip)]
    pub grid: GridSpec,
    #[serde(skip)]
    pub order: RegOrder,
    #[serde(skip)]
    pub lambda: LambdaChoice,
    #[serde(skip)]
    pub lambdas: Vec<f64>,
}

impl RunConfig {
    pub fn resolve(command: &'static str, mut s: Settings) -> Result<Self> {
        s.m.get_or_insert(80);
        s.n.get_or_insert(80);
        s.length.get_or_insert(1.0);
        s.horizon.get_or_insert(1.0);
        s.speed.get_or_insert(1.0);
        s.noise_pct.get_or_insert(0.0);
        s.seed.get_or_insert(0);
        s.reg_order.get_or_insert(0);
        s.lambda.get_or_insert_with(|| "0".to_string());
        s.out.get_or_insert_with(|| PathBuf::from("out"));
        s.scaling.get_or_insert(Scaling::Stencil);
        s.corner_axes.get_or_insert(Axes::Linear);

        let grid = GridSpec::new(
            s.length.unwrap(),
            s.horizon.unwrap(),
            s.m.unwrap(),
            s.n.unwrap(),
            s.speed.unwrap(),
        )?;
        let order = RegOrder::from_k(s.reg_order.unwrap())?;
        let lambda = match s.lambda.as_deref().unwrap().trim() {
            "lcurve" => LambdaChoice::Lcurve,
            text => LambdaChoice::Fixed(text.parse().map_err(|_| {
                wavesource::Error::InvalidParameter(format!("lambda must be a number or \"lcurve\", got {text:?}"))
            })?),
        };
        if s.example.is_some() && (s.h.is_some() || s.flux_left.is_some() || s.u0.is_some()) {
            bail!(wavesource::Error::InvalidParameter(
                "--example cannot be combined with external data files".into()
            ));
        }
        // First-order and second-order penalties need one more decade of lambda.
        let lambdas = s.lambda_grid.clone().unwrap_or_else(|| {
            if order == RegOrder::Zeroth {
                lambda_grid(-9, -2)
            } else {
                lambda_grid(-9, -1)
            }
        });
        s.lambda_grid = Some(lambdas.clone());

        Ok(Self {
            command,
            settings: s,
            grid,
            order,
            lambda,
            lambdas,
        })
    }

    pub fn out_dir(&self) -> &Path {
        self.settings.out.as_deref().unwrap()
    }

    pub fn noise_pct(&self) -> f64 {
        self.settings.noise_pct.unwrap()
    }

    pub fn seed(&self) -> u64 {
        self.settings.seed.unwrap()
    }

    pub fn scaling(&self) -> FluxScaling {
        self.settings.scaling.unwrap().into()
    }

    pub fn corner_axes(&self) -> CornerAxes {
        self.settings.corner_axes.unwrap().into()
    }
}
