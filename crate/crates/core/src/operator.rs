// Copyright 2026 The overlap-lab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Certified operator types.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::spectral::{norm_bound_below, norm_of};
use crate::tolerance;

/// A matrix certified Hermitian. The stored matrix is the exact Hermitian
/// part of the input; `hermiticity_defect` records how far the input was.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, tolerance::HERMITIAN)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        matrix.check_finite()?;
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian { defect, tol });
        }
        Ok(Self::from_parts_unchecked(matrix))
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix) -> Self {
        let hermiticity_defect = matrix.hermiticity_defect();
        let matrix = if hermiticity_defect == 0.0 {
            matrix
        } else {
            matrix.hermitian_part()
        };
        Self {
            matrix,
            hermiticity_defect,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    pub fn norm(&self) -> Result<f64> {
        norm_of(&self.matrix)
    }
}

/// Hermitian operator with `‖R² − I‖ ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    op: HermitianOperator,
}

impl Reflection {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        Self::with_tolerance(op, tolerance::REFLECTION)
    }

    pub fn with_tolerance(op: HermitianOperator, tol: f64) -> Result<Self> {
        let m = op.matrix();
        let defect = norm_bound_below(&(&(m * m) - &ComplexMatrix::identity(m.dim())), tol)?;
        if defect > tol {
            return Err(Error::NotReflection { defect, tol });
        }
        Ok(Self { op })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self {
            op: HermitianOperator::from_parts_unchecked(m),
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Eigenprojection `½(I + sign·R)` for `sign = ±1`.
    pub fn eigenprojection(&self, sign: f64) -> ComplexMatrix {
        let id = ComplexMatrix::identity(self.dim());
        (&id + &self.matrix().scale_real(sign)).scale_real(0.5)
    }

    /// `½(I + R)` as a certified projection.
    pub fn to_projection(&self) -> Projection {
        Projection::from_matrix_unchecked(self.eigenprojection(1.0))
    }
}

/// Hermitian operator with `‖P² − P‖ ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    op: HermitianOperator,
}

impl Projection {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        Self::with_tolerance(op, tolerance::PROJECTION)
    }

    pub fn with_tolerance(op: HermitianOperator, tol: f64) -> Result<Self> {
        let m = op.matrix();
        let defect = norm_bound_below(&(&(m * m) - m), tol)?;
        if defect > tol {
            return Err(Error::NotProjection { defect, tol });
        }
        Ok(Self { op })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(m)?)
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self {
            op: HermitianOperator::from_parts_unchecked(m),
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `I − P`.
    pub fn complement(&self) -> Projection {
        let id = ComplexMatrix::identity(self.dim());
        Projection::from_matrix_unchecked(&id - self.matrix())
    }

    /// `2P − I`.
    pub fn to_reflection(&self) -> Reflection {
        let id = ComplexMatrix::identity(self.dim());
        Reflection::from_matrix_unchecked(&self.matrix().scale_real(2.0) - &id)
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        self.matrix().trace().re.round().max(0.0) as usize
    }
}

/// `(‖AB − BA‖, ‖AB + BA‖)`.
pub fn commutator_norms(a: &HermitianOperator, b: &HermitianOperator) -> Result<(f64, f64)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    Ok((norm_of(&(&ab - &ba))?, norm_of(&(&ab + &ba))?))
}

/// `‖AB − BA‖` for arbitrary square matrices of equal dimension.
pub fn commutator_norm(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    norm_of(&ComplexMatrix::commutator(a, b))
}
