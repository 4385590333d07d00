//! Tikhonov regularisation of order 0, 1 or 2 and SVD diagnostics.

use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::dense::{qr_least_squares, singular_values};
use crate::error::{Error, Result};
use crate::inverse::{least_squares_dense, InverseSystem};
use crate::model::{ForceLayout, ForceVector};

/// Smoothness order of the penalty `||D_k f||`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegOrder {
    Zeroth,
    First,
    Second,
}

impl RegOrder {
    pub const ALL: [RegOrder; 3] = [RegOrder::Zeroth, RegOrder::First, RegOrder::Second];

    pub fn from_k(k: u8) -> Result<Self> {
        match k {
            0 => Ok(RegOrder::Zeroth),
            1 => Ok(RegOrder::First),
            2 => Ok(RegOrder::Second),
            _ => Err(Error::InvalidParameter(format!(
                "regularisation order must be 0, 1 or 2, got {k}"
            ))),
        }
    }

    pub fn k(self) -> usize {
        self as usize
    }
}

impl fmt::Display for RegOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegConfig {
    order: RegOrder,
    lambda: f64,
}

impl RegConfig {
    pub fn new(order: RegOrder, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self { order, lambda })
    }

    pub fn order(&self) -> RegOrder {
        self.order
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// `D_0 = I` (m x m), `D_1` rows `(.., 1, -1, ..)` ((m-1) x m),
/// `D_2` rows `(.., 1, -2, 1, ..)` ((m-2) x m).
pub fn difference_operator(order: RegOrder, m: usize) -> Result<DMatrix<f64>> {
    let k = order.k();
    if m <= k {
        return Err(Error::InvalidDimension(format!(
            "order {k} difference operator needs m > {k}, got {m}"
        )));
    }
    let stencil: &[f64] = match order {
        RegOrder::Zeroth => &[1.0],
        RegOrder::First => &[1.0, -1.0],
        RegOrder::Second => &[1.0, -2.0, 1.0],
    };
    let mut d = DMatrix::zeros(m - k, m);
    for row in 0..m - k {
        for (offset, &c) in stencil.iter().enumerate() {
            d[(row, row + offset)] = c;
        }
    }
    Ok(d)
}

/// Penalty operator for a force layout. Dual-source vectors are penalised
/// block by block, so differences never straddle the `f`/`g` seam.
pub fn penalty_operator(order: RegOrder, layout: ForceLayout, cols: usize) -> Result<DMatrix<f64>> {
    match layout {
        ForceLayout::Single => difference_operator(order, cols),
        ForceLayout::Dual => {
            let block = difference_operator(order, cols / 2)?;
            let (r, c) = block.shape();
            let mut d = DMatrix::zeros(2 * r, 2 * c);
            d.view_mut((0, 0), (r, c)).copy_from(&block);
            d.view_mut((r, c), (r, c)).copy_from(&block);
            Ok(d)
        }
    }
}

/// Minimiser of `||A f - b||^2 + lambda ||D_k f||^2`.
pub fn tikhonov_solve(sys: &InverseSystem, cfg: &RegConfig) -> Result<ForceVector> {
    let d = penalty_operator(cfg.order(), sys.layout(), sys.cols())?;
    tikhonov_with_operator(sys.matrix(), sys.rhs(), &d, cfg.lambda()).map(|x| sys.wrap_solution(x))
}

/// [`tikhonov_solve`] on a bare matrix with the plain `D_k`.
pub fn tikhonov_dense(a: &DMatrix<f64>, b: &DVector<f64>, cfg: &RegConfig) -> Result<DVector<f64>> {
    let d = difference_operator(cfg.order(), a.ncols())?;
    tikhonov_with_operator(a, b, &d, cfg.lambda())
}

/// Solved as the stacked least-squares problem `[A; sqrt(lambda) D] f ~ [b; 0]`
/// with Householder QR, which avoids squaring the condition number.
pub fn tikhonov_with_operator(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    d: &DMatrix<f64>,
    lambda: f64,
) -> Result<DVector<f64>> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    if d.ncols() != a.ncols() {
        return Err(Error::DimensionMismatch {
            what: "penalty operator columns",
            expected: a.ncols(),
            found: d.ncols(),
        });
    }
    if lambda == 0.0 {
        return least_squares_dense(a, b).map_err(|e| match e {
            Error::RankDeficient { .. } => Error::SingularSystem,
            other => other,
        });
    }
    let (rows, cols) = a.shape();
    let extra = d.nrows();
    let mut stacked = DMatrix::zeros(rows + extra, cols);
    stacked.view_mut((0, 0), (rows, cols)).copy_from(a);
    stacked
        .view_mut((rows, 0), (extra, cols))
        .copy_from(&(d * lambda.sqrt()));
    let mut rhs = DVector::zeros(rows + extra);
    rhs.rows_mut(0, rows).copy_from(b);
    qr_least_squares(&stacked, &rhs)
}

/// 2-norm condition number `sv(1) / sv(min(rows, cols))`.
pub fn condition_number(a: &DMatrix<f64>) -> Result<f64> {
    let sv = nonzero_singular_values(a)?;
    Ok(sv[0] / sv[sv.len() - 1])
}

/// `sv(k) / sv(1)`, non-increasing, starting at exactly 1.
pub fn normalized_singular_values(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let sv = nonzero_singular_values(a)?;
    let s1 = sv[0];
    Ok(sv.iter().map(|s| s / s1).collect())
}

fn nonzero_singular_values(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    let sv = singular_values(a);
    match sv.first() {
        Some(&s) if s > 0.0 => Ok(sv),
        _ => Err(Error::ZeroMatrix),
    }
}

/// Euclidean norm of `f_num - f_exact` over the nodal values.
pub fn accuracy_error(numerical: &[f64], exact: &[f64]) -> Result<f64> {
    if numerical.len() != exact.len() {
        return Err(Error::DimensionMismatch {
            what: "numerical force",
            expected: exact.len(),
            found: numerical.len(),
        });
    }
    Ok(numerical
        .iter()
        .zip(exact)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        .sqrt())
}

/// `||f_num - f_exact|| / ||f_exact||`.
pub fn relative_l2_error(numerical: &[f64], exact: &[f64]) -> Result<f64> {
    let norm = exact.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok(accuracy_error(numerical, exact)? / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_difference_operator() {
        let d = difference_operator(RegOrder::First, 3).unwrap();
        assert_eq!(d, DMatrix::from_row_slice(2, 3, &[1.0, -1.0, 0.0, 0.0, 1.0, -1.0]));
    }

    #[test]
    fn zeroth_is_identity() {
        assert_eq!(
            difference_operator(RegOrder::Zeroth, 4).unwrap(),
            DMatrix::identity(4, 4)
        );
    }

    #[test]
    fn second_difference_annihilates_affine() {
        let d = difference_operator(RegOrder::Second, 4).unwrap();
        assert_eq!(
            d,
            DMatrix::from_row_slice(2, 4, &[1.0, -2.0, 1.0, 0.0, 0.0, 1.0, -2.0, 1.0])
        );
        let line = DVector::from_vec(vec![0.5, 2.0, 3.5, 5.0]);
        assert!((d * line).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn operator_dimension_errors() {
        assert!(matches!(
            difference_operator(RegOrder::Second, 2),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            difference_operator(RegOrder::First, 1),
            Err(Error::InvalidDimension(_))
        ));
        assert!(RegOrder::from_k(3).is_err());
    }

    #[test]
    fn dual_penalty_is_block_diagonal() {
        let d = penalty_operator(RegOrder::First, ForceLayout::Dual, 6).unwrap();
        assert_eq!(d.shape(), (4, 6));
        assert_eq!(d[(1, 2)], -1.0);
        assert_eq!(d[(1, 3)], 0.0);
        assert_eq!(d[(2, 3)], 1.0);
    }

    #[test]
    fn identity_filter_factor() {
        let a = DMatrix::<f64>::identity(5, 5);
        let b = DVector::from_vec(vec![1.0, -2.0, 0.5, 4.0, 3.0]);
        for lambda in [1e-3, 0.5, 2.0] {
            let f = tikhonov_dense(&a, &b, &RegConfig::new(RegOrder::Zeroth, lambda).unwrap()).unwrap();
            assert!((f - &b / (1.0 + lambda)).amax() < 1e-14);
        }
    }

    #[test]
    fn lambda_zero_on_singular_matrix() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let b = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let cfg = RegConfig::new(RegOrder::First, 0.0).unwrap();
        assert_eq!(tikhonov_dense(&a, &b, &cfg), Err(Error::SingularSystem));
        // a positive lambda with D_0 makes it solvable
        let cfg = RegConfig::new(RegOrder::Zeroth, 1e-3).unwrap();
        assert!(tikhonov_dense(&a, &b, &cfg).is_ok());
    }

    #[test]
    fn negative_lambda_rejected() {
        assert!(RegConfig::new(RegOrder::Zeroth, -1.0).is_err());
        assert!(RegConfig::new(RegOrder::Zeroth, f64::NAN).is_err());
    }

    #[test]
    fn condition_numbers() {
        assert!((condition_number(&DMatrix::identity(3, 3)).unwrap() - 1.0).abs() < 1e-15);
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        assert!((condition_number(&a).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(condition_number(&DMatrix::zeros(2, 2)), Err(Error::ZeroMatrix));
    }

    #[test]
    fn normalized_values() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert_eq!(normalized_singular_values(&a).unwrap(), vec![1.0, 0.5]);
        let r = DMatrix::from_fn(5, 3, |i, j| ((i * 3 + j) as f64).sin());
        let nsv = normalized_singular_values(&r).unwrap();
        assert_eq!(nsv.len(), 3);
        assert_eq!(nsv[0], 1.0);
        assert!(nsv.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn accuracy_error_is_euclidean() {
        assert_eq!(accuracy_error(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(accuracy_error(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 5.0);
        assert!(accuracy_error(&[1.0], &[1.0, 2.0]).is_err());
    }
}
