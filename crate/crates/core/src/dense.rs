//! Thin wrappers over nalgebra's Householder QR and SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative singular-value threshold below which a column direction counts as lost.
pub const RANK_TOL: f64 = 1e-12;

/// Singular values, non-increasing.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

pub fn numerical_rank(sv: &[f64], rel_tol: f64) -> usize {
    match sv.first() {
        Some(&s1) if s1 > 0.0 => sv.iter().filter(|&&s| s > rel_tol * s1).count(),
        _ => 0,
    }
}

/// Minimiser of `||a x - b||_2` for `a` with at least as many rows as columns,
/// via Householder QR. Fails if `R` has an exactly zero pivot.
pub fn qr_least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::UnderdeterminedSystem { rows, cols });
    }
    if b.len() != rows {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: rows,
            found: b.len(),
        });
    }
    let qr = a.clone().qr();
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let r = qr.r();
    let head = qtb.rows(0, cols).into_owned();
    if r.diagonal().iter().any(|&d| d == 0.0 || !d.is_finite()) {
        return Err(Error::SingularSystem);
    }
    r.solve_upper_triangular(&head).ok_or(Error::SingularSystem)
}
