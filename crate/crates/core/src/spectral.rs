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

//! Spectral routines: norms, Hermitian eigendecomposition, spectral rounding
//! and functional calculus.
//!
//! Every routine first splits the matrix into the connected components of its
//! nonzero pattern and works block by block. The structured operators in this
//! crate (Pauli strings, fermionic bilinears, truncated bit-flip operators)
//! are block diagonal up to a permutation, so this is a large saving and exact.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I};
use crate::operator::{HermitianOperator, Projection, Reflection};
use crate::tolerance;

/// Eigendecomposition `H = V diag(λ) V†` with ascending `λ`.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Target set for [`round_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumTarget {
    /// Round to `{0, 1}`; an eigenvalue of exactly `1/2` goes to `1`.
    Binary,
    /// Round to `{−1, +1}`; an eigenvalue of exactly `0` goes to `+1`.
    Sign,
}

impl SpectrumTarget {
    fn round(self, x: f64) -> f64 {
        match self {
            SpectrumTarget::Binary => {
                if x >= 0.5 {
                    1.0
                } else {
                    0.0
                }
            }
            SpectrumTarget::Sign => {
                if x >= 0.0 {
                    1.0
                } else {
                    -1.0
                }
            }
        }
    }
}

/// Spectral norm (largest singular value).
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    a.check_finite()?;
    norm_of(a)
}

pub(crate) fn norm_of(a: &ComplexMatrix) -> Result<f64> {
    let mut best = 0.0f64;
    for block in a.block_partition() {
        let b = if block.len() == 1 {
            a.get(block[0], block[0]).norm()
        } else {
            block_norm(a.submatrix(&block))?
        };
        best = best.max(b);
    }
    Ok(best)
}

fn block_norm(sub: Mat<C64>) -> Result<f64> {
    let m = ComplexMatrix::from_mat_unchecked(sub);
    let scale = m.max_abs_entry().max(1.0);
    let herm_tol = tolerance::HERMITIAN * scale;
    if m.hermiticity_defect() <= herm_tol {
        return max_abs_eigenvalue(m.hermitian_part().into_mat());
    }
    if m.anti_hermiticity_defect() <= herm_tol {
        return max_abs_eigenvalue(m.scale(I).hermitian_part().into_mat());
    }
    let sv = m
        .as_mat()
        .singular_values()
        .map_err(|_| Error::Convergence { residual: f64::NAN })?;
    Ok(sv.first().copied().unwrap_or(0.0))
}

fn max_abs_eigenvalue(h: Mat<C64>) -> Result<f64> {
    let ev = h
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Convergence { residual: f64::NAN })?;
    Ok(ev.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Upper bound on `‖A‖` that avoids an eigensolve when the Frobenius norm is
/// already below `tol`; otherwise the exact spectral norm.
pub(crate) fn norm_bound_below(a: &ComplexMatrix, tol: f64) -> Result<f64> {
    let f = a.frobenius_norm();
    if f <= tol {
        Ok(f)
    } else {
        norm_of(a)
    }
}

struct BlockEigh {
    indices: Vec<usize>,
    values: Vec<f64>,
    vectors: Mat<C64>,
}

fn block_eigh(h: &HermitianOperator) -> Result<Vec<BlockEigh>> {
    let a = h.matrix();
    let scale = a.max_abs_entry().max(1.0);
    let mut out = Vec::new();
    for block in a.block_partition() {
        if block.len() == 1 {
            out.push(BlockEigh {
                values: vec![a.get(block[0], block[0]).re],
                vectors: Mat::identity(1, 1),
                indices: block,
            });
            continue;
        }
        let sub = a.submatrix(&block);
        let evd = sub
            .self_adjoint_eigen(Side::Lower)
            .map_err(|_| Error::Convergence { residual: f64::NAN })?;
        let u = evd.U().to_owned();
        let s = evd.S();
        let values: Vec<f64> = (0..block.len())
            .map(|i| s.column_vector()[i].re)
            .collect();
        // Residual ‖HV − VΛ‖ (max entry).
        let hv = &sub * &u;
        let mut residual = 0.0f64;
        for j in 0..block.len() {
            for i in 0..block.len() {
                residual = residual.max((hv[(i, j)] - u[(i, j)] * values[j]).norm());
            }
        }
        if residual > 1e-10 * scale {
            return Err(Error::Convergence { residual });
        }
        out.push(BlockEigh {
            indices: block,
            values,
            vectors: u,
        });
    }
    Ok(out)
}

/// Hermitian eigendecomposition with eigenvalues ascending.
///
/// Eigenvalues that are equal are ordered by the block they come from and
/// then by the eigensolver's order within the block.
pub fn eigh(h: &HermitianOperator) -> Result<Eigh> {
    let blocks = block_eigh(h)?;
    let dim = h.dim();
    let mut order: Vec<(f64, usize, usize)> = Vec::with_capacity(dim);
    for (b, blk) in blocks.iter().enumerate() {
        for (k, &v) in blk.values.iter().enumerate() {
            order.push((v, b, k));
        }
    }
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut vectors = ComplexMatrix::zeros(dim);
    let mut values = Vec::with_capacity(dim);
    for (col, &(v, b, k)) in order.iter().enumerate() {
        values.push(v);
        let blk = &blocks[b];
        for (r, &row) in blk.indices.iter().enumerate() {
            vectors.set(row, col, blk.vectors[(r, k)]);
        }
    }
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues(h: &HermitianOperator) -> Result<Vec<f64>> {
    let a = h.matrix();
    let mut all = Vec::with_capacity(a.dim());
    for block in a.block_partition() {
        if block.len() == 1 {
            all.push(a.get(block[0], block[0]).re);
        } else {
            let ev = a
                .submatrix(&block)
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|_| Error::Convergence { residual: f64::NAN })?;
            all.extend(ev);
        }
    }
    all.sort_by(f64::total_cmp);
    Ok(all)
}

/// `f(H) = V diag(f(λ)) V†`.
pub fn hermitian_function(
    h: &HermitianOperator,
    f: impl Fn(f64) -> C64,
) -> Result<ComplexMatrix> {
    let dim = h.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for blk in block_eigh(h)? {
        let n = blk.indices.len();
        let fv: Vec<C64> = blk.values.iter().map(|&x| f(x)).collect();
        let scaled = Mat::from_fn(n, n, |i, j| blk.vectors[(i, j)] * fv[j]);
        let sub = &scaled * blk.vectors.adjoint();
        for (c, &col) in blk.indices.iter().enumerate() {
            for (r, &row) in blk.indices.iter().enumerate() {
                out.set(row, col, sub[(r, c)]);
            }
        }
    }
    Ok(out)
}

/// Replaces every eigenvalue by the nearest member of `target`, keeping the
/// eigenvectors.
pub fn round_spectrum(h: &HermitianOperator, target: SpectrumTarget) -> Result<HermitianOperator> {
    Ok(round_with_distance(h, target)?.0)
}

/// [`round_spectrum`] together with `‖round(H) − H‖ = max_i |λ_i − round(λ_i)|`.
pub fn round_with_distance(
    h: &HermitianOperator,
    target: SpectrumTarget,
) -> Result<(HermitianOperator, f64)> {
    let dim = h.dim();
    let mut out = ComplexMatrix::zeros(dim);
    let mut distance = 0.0f64;
    for blk in block_eigh(h)? {
        let n = blk.indices.len();
        let fv: Vec<f64> = blk.values.iter().map(|&x| target.round(x)).collect();
        for (x, r) in blk.values.iter().zip(&fv) {
            distance = distance.max((x - r).abs());
        }
        let scaled = Mat::from_fn(n, n, |i, j| blk.vectors[(i, j)] * fv[j]);
        let sub = &scaled * blk.vectors.adjoint();
        for (c, &col) in blk.indices.iter().enumerate() {
            for (r, &row) in blk.indices.iter().enumerate() {
                out.set(row, col, sub[(r, c)]);
            }
        }
    }
    Ok((HermitianOperator::from_parts_unchecked(out.hermitian_part()), distance))
}

/// Nearest projection in the eigenbasis of `h`.
pub fn round_to_projection(h: &HermitianOperator) -> Result<Projection> {
    Projection::new(round_spectrum(h, SpectrumTarget::Binary)?)
}

/// Nearest reflection in the eigenbasis of `h`.
pub fn round_to_reflection(h: &HermitianOperator) -> Result<Reflection> {
    Reflection::new(round_spectrum(h, SpectrumTarget::Sign)?)
}

/// `exp(i t H)`.
pub fn expm_i(h: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    hermitian_function(h, |x| (I * (t * x)).exp())
}

/// Largest eigenvalue distance `max_i |λ_i − target(λ_i)|`.
pub fn rounding_distance(h: &HermitianOperator, target: SpectrumTarget) -> Result<f64> {
    Ok(eigenvalues(h)?
        .iter()
        .fold(0.0f64, |m, &x| m.max((x - target.round(x)).abs())))
}
