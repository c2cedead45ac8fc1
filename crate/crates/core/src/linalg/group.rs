use serde::{Deserialize, Serialize};

use super::lu::log_det;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Default bound on `max |MᵀM − I|` for accepting a matrix as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Compact classical group families, labelled by root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupType {
    /// Unitary group U(n).
    A,
    /// Odd special orthogonal group SO(2m+1).
    B,
    /// Compact symplectic group Sp(2m).
    C,
    /// Even special orthogonal group SO(2m).
    D,
}

impl GroupType {
    /// The real orthogonal family of the given dimension.
    pub fn orthogonal(dim: usize) -> Self {
        if dim % 2 == 1 {
            GroupType::B
        } else {
            GroupType::D
        }
    }
}

/// A validated real orthogonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: Matrix,
    det_sign: i8,
    group: GroupType,
}

impl GroupElement {
    /// Wraps a matrix already known to be orthogonal with the given determinant sign.
    /// Use [`validate_group_element`] for untrusted input.
    pub fn new_unchecked(matrix: Matrix, det_sign: i8) -> Self {
        let group = GroupType::orthogonal(matrix.rows());
        Self {
            matrix,
            det_sign,
            group,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked(Matrix::identity(n), 1)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn det_sign(&self) -> i8 {
        self.det_sign
    }

    #[inline]
    pub fn group(&self) -> GroupType {
        self.group
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// `self · other`; determinant signs multiply.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement::new_unchecked(
            self.matrix.matmul(&other.matrix),
            self.det_sign * other.det_sign,
        )
    }

    pub fn transpose(&self) -> GroupElement {
        GroupElement::new_unchecked(self.matrix.transpose(), self.det_sign)
    }
}

/// Checks orthogonality and records the determinant sign.
pub fn validate_group_element(m: Matrix, tol: f64) -> Result<GroupElement> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.orthogonality_defect();
    if defect > tol {
        return Err(Error::NotOrthogonal { defect, tol });
    }
    let det = log_det(m.as_slice(), m.rows());
    let sign = if det.sign < 0 { -1 } else { 1 };
    Ok(GroupElement::new_unchecked(m, sign))
}
