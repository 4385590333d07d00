//! L-curve sweep over the regularisation parameter and automatic corner location.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inverse::InverseSystem;
use crate::io::format_f64;
use crate::regularization::{penalty_operator, tikhonov_with_operator, RegOrder};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LCurvePoint {
    pub lambda: f64,
    /// `||A f_lambda - b||_2`
    pub residual_norm: f64,
    /// `||D_k f_lambda||_2`
    pub solution_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LCurve {
    pub order: RegOrder,
    pub points: Vec<LCurvePoint>,
    /// Parameters whose solve failed; they are skipped, not fatal.
    pub failures: Vec<(f64, Error)>,
}

impl LCurve {
    pub fn corner(&self) -> Result<f64> {
        corner(&self.points)
    }

    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "lambda,residual_norm,solution_norm")?;
        for p in &self.points {
            writeln!(
                out,
                "{},{},{}",
                format_f64(p.lambda),
                format_f64(p.residual_norm),
                format_f64(p.solution_norm)
            )?;
        }
        Ok(())
    }
}

/// `{1, 5} x 10^e` for `e` in `lo..=hi`, ascending.
pub fn lambda_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi)
        .flat_map(|e| [1, 5].map(|m| format!("{m}e{e}").parse::<f64>().unwrap()))
        .collect()
}

/// `{1, 5} x 10^e`, `e = -9..=-2`.
pub fn default_lambda_grid() -> Vec<f64> {
    lambda_grid(-9, -2)
}

/// Solve for every `lambda` and record the residual and penalised solution norms.
pub fn sweep(sys: &InverseSystem, order: RegOrder, lambdas: &[f64]) -> Result<LCurve> {
    if lambdas.is_empty() {
        return Err(Error::InvalidParameter("lambda grid is empty".into()));
    }
    if lambdas.iter().any(|&l| !(l.is_finite() && l > 0.0)) {
        return Err(Error::InvalidParameter("lambda grid must be strictly positive".into()));
    }
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("lambda grid must be strictly ascending".into()));
    }
    let d = penalty_operator(order, sys.layout(), sys.cols())?;
    let (a, b) = (sys.matrix(), sys.rhs());
    let outcomes: Vec<(f64, Result<LCurvePoint>)> = lambdas
        .par_iter()
        .map(|&lambda| {
            let point = tikhonov_with_operator(a, b, &d, lambda).map(|f| LCurvePoint {
                lambda,
                residual_norm: (a * &f - b).norm(),
                solution_norm: (&d * &f).norm(),
            });
            (lambda, point)
        })
        .collect();

    let mut curve = LCurve {
        order,
        points: Vec::with_capacity(lambdas.len()),
        failures: Vec::new(),
    };
    for (lambda, outcome) in outcomes {
        match outcome {
            Ok(p) => curve.points.push(p),
            Err(e) => curve.failures.push((lambda, e)),
        }
    }
    Ok(curve)
}

/// Coordinates in which the curve's bend is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CornerAxes {
    /// `(residual_norm, solution_norm)` as plotted on linear axes.
    #[default]
    Linear,
    /// `(ln residual_norm, ln solution_norm)`.
    LogLog,
}

/// Relative curvature difference treated as a tie.
const TIE_TOL: f64 = 1e-12;

/// Corner of the L-curve on linear axes; see [`corner_with`].
pub fn corner(points: &[LCurvePoint]) -> Result<f64> {
    corner_with(points, CornerAxes::Linear)
}

/// `lambda` at the point of maximum signed curvature, the curve being
/// parametrised by `ln lambda`. Positive curvature is the convex bend from
/// the steep small-`lambda` branch to the flat large-`lambda` branch. Ties
/// go to the larger `lambda`.
pub fn corner_with(points: &[LCurvePoint], axes: CornerAxes) -> Result<f64> {
    let kappa = curvature(points, axes)?;
    let mut best = 0;
    for (i, &k) in kappa.iter().enumerate() {
        if k >= kappa[best] - TIE_TOL * kappa[best].abs() {
            best = i;
        }
    }
    Ok(points[best + 1].lambda)
}

/// Signed curvature at the interior points `1..len-1`, by three-point
/// differences on the non-uniform `ln lambda` grid.
pub fn curvature(points: &[LCurvePoint], axes: CornerAxes) -> Result<Vec<f64>> {
    if points.len() < 3 {
        return Err(Error::DegenerateCurve("need at least three points"));
    }
    if points.windows(2).any(|w| w[0].lambda >= w[1].lambda) {
        return Err(Error::InvalidParameter(
            "L-curve points must be sorted by ascending lambda".into(),
        ));
    }
    let coord = |v: f64| match axes {
        CornerAxes::Linear => v,
        CornerAxes::LogLog => v.ln(),
    };
    let mut xs = Vec::with_capacity(points.len());
    let mut ys = Vec::with_capacity(points.len());
    for p in points {
        let (x, y) = (coord(p.residual_norm), coord(p.solution_norm));
        if !(x.is_finite() && y.is_finite() && p.lambda > 0.0) {
            return Err(Error::DegenerateCurve("non-finite coordinate"));
        }
        xs.push(x);
        ys.push(y);
    }
    let s: Vec<f64> = points.iter().map(|p| p.lambda.ln()).collect();

    if collinear(&xs, &ys) {
        return Err(Error::DegenerateCurve("all points collinear"));
    }

    Ok((1..points.len() - 1)
        .map(|i| {
            let (h1, h2) = (s[i] - s[i - 1], s[i + 1] - s[i]);
            let d = |v: &[f64]| {
                let first =
                    -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i] + h1 / (h2 * (h1 + h2)) * v[i + 1];
                let second = 2.0 * (v[i - 1] / (h1 * (h1 + h2)) - v[i] / (h1 * h2) + v[i + 1] / (h2 * (h1 + h2)));
                (first, second)
            };
            let (x1, x2) = d(&xs);
            let (y1, y2) = d(&ys);
            let speed = (x1 * x1 + y1 * y1).powf(1.5);
            if speed == 0.0 {
                0.0
            } else {
                (x1 * y2 - x2 * y1) / speed
            }
        })
        .collect())
}

fn collinear(xs: &[f64], ys: &[f64]) -> bool {
    let (x0, y0) = (xs[0], ys[0]);
    let far = (1..xs.len())
        .max_by(|&a, &b| {
            let da = (xs[a] - x0).hypot(ys[a] - y0);
            let db = (xs[b] - x0).hypot(ys[b] - y0);
            da.total_cmp(&db)
        })
        .unwrap();
    let (dx, dy) = (xs[far] - x0, ys[far] - y0);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return true;
    }
    xs.iter()
        .zip(ys)
        .all(|(&x, &y)| ((x - x0) * dy - (y - y0) * dx).abs() / len <= 1e-12 * len.max(1.0))
}
