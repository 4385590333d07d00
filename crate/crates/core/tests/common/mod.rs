//! Independent reference implementations shared by the integration tests.
//! Deliberately naive: nested `Vec`s, no shared code with the library.

#![allow(dead_code, clippy::needless_range_loop, clippy::manual_memcpy)]

use nalgebra::{DMatrix, DVector};

/// Plain scalar three-level recurrence, `u[i][j]` with `i` in space.
#[allow(clippy::too_many_arguments)]
pub fn oracle_field(
    length: f64,
    horizon: f64,
    m: usize,
    n: usize,
    c: f64,
    u0: &[f64],
    v0: &[f64],
    p0: &[f64],
    pl: &[f64],
    force: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    let dx = length / m as f64;
    let dt = horizon / n as f64;
    let r = c * dt / dx;
    let mut u = vec![vec![0.0; n + 1]; m + 1];
    for i in 0..=m {
        u[i][0] = u0[i];
    }
    for j in 0..=n {
        u[0][j] = p0[j];
        u[m][j] = pl[j];
    }
    for i in 1..m {
        u[i][1] =
            r * r / 2.0 * (u0[i + 1] + u0[i - 1]) + (1.0 - r * r) * u0[i] + dt * v0[i] + dt * dt / 2.0 * force[i][0];
    }
    for j in 1..n {
        for i in 1..m {
            u[i][j + 1] = r * r * (u[i + 1][j] + u[i - 1][j]) + 2.0 * (1.0 - r * r) * u[i][j] - u[i][j - 1]
                + dt * dt * force[i][j];
        }
    }
    u
}

/// Outward one-sided second-order flux at `x = 0` for `t_1..t_N`.
pub fn oracle_left_flux(u: &[Vec<f64>], dx: f64) -> Vec<f64> {
    (1..u[0].len())
        .map(|j| (3.0 * u[0][j] - 4.0 * u[1][j] + u[2][j]) / (2.0 * dx))
        .collect()
}

pub fn oracle_right_flux(u: &[Vec<f64>], dx: f64) -> Vec<f64> {
    let m = u.len() - 1;
    (1..u[0].len())
        .map(|j| (3.0 * u[m][j] - 4.0 * u[m - 1][j] + u[m - 2][j]) / (2.0 * dx))
        .collect()
}

/// Tikhonov minimiser through the normal equations, with `D_k` built from
/// its defining stencil.
pub fn oracle_tikhonov(a: &DMatrix<f64>, b: &DVector<f64>, k: usize, lambda: f64) -> DVector<f64> {
    let cols = a.ncols();
    let stencil: &[f64] = [&[1.0][..], &[-1.0, 1.0][..], &[1.0, -2.0, 1.0][..]][k];
    let d = DMatrix::from_fn(
        cols - k,
        cols,
        |r, c| if c >= r && c - r <= k { stencil[c - r] } else { 0.0 },
    );
    let lhs = a.transpose() * a + (d.transpose() * &d) * lambda;
    let rhs = a.transpose() * b;
    lhs.lu().solve(&rhs).expect("normal equations are nonsingular")
}

pub fn relative_diff(x: &[f64], y: &[f64]) -> f64 {
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let den: f64 = y.iter().map(|b| b * b).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
