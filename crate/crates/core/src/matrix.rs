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

//! Dense square complex matrices.

use std::ops::{Add, Mul, Neg, Sub};

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::MAX_DIM;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// A dense `dim × dim` complex matrix with finite entries.
///
/// Storage is a column-major [`faer::Mat`]; the logical order used by the
/// serialization formats is row-major.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    mat: Mat<C64>,
}

fn assert_dim(dim: usize) {
    assert!(dim >= 1, "matrix dimension must be positive");
    assert!(dim <= MAX_DIM, "matrix dimension {dim} exceeds {MAX_DIM}");
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert_dim(dim);
        Self {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        assert_dim(dim);
        Self {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        assert_dim(dim);
        Self {
            mat: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.mat[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.mat[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major rows, validating shape and finiteness.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        let m = Self::from_fn(dim, |i, j| rows[i][j]);
        m.check_finite()?;
        Ok(m)
    }

    /// Wraps a faer matrix, validating it is square, non-empty and finite.
    pub fn from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        if mat.nrows() > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: mat.nrows(),
                max: MAX_DIM,
            });
        }
        let m = Self { mat };
        m.check_finite()?;
        Ok(m)
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Self { mat }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.mat[(i, j)] = value;
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn check_finite(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                let z = self.mat[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::InvalidInput(format!(
                        "non-finite entry at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            mat: self.mat.transpose().to_owned(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        let n = self.dim();
        Self {
            mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] * s),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.mat[(i, j)].norm());
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                s += self.mat[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Max-entry `|A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// Max-entry `|A + A†|`.
    pub(crate) fn anti_hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                m = m.max((self.mat[(i, j)] + self.mat[(j, i)].conj()).norm());
            }
        }
        m
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self {
            mat: Mat::from_fn(n, n, |i, j| {
                (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5
            }),
        }
    }

    /// Max-entry distance to another matrix of the same dimension.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        m
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        let ab = a * b;
        let ba = b * a;
        &ab - &ba
    }

    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        let ab = a * b;
        let ba = b * a;
        &ab + &ba
    }

    /// Kronecker product `A ⊗ B`.
    pub fn kron(a: &Self, b: &Self) -> Self {
        let db = b.dim();
        Self::from_fn(a.dim() * db, |r, c| {
            a.mat[(r / db, c / db)] * b.mat[(r % db, c % db)]
        })
    }

    /// Kronecker product of a list of factors, left to right.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Self {
        let mut it = factors.into_iter();
        let first = it.next().expect("kron_all needs at least one factor").clone();
        it.fold(first, |acc, f| Self::kron(&acc, f))
    }

    /// Partial trace over every tensor factor not listed in `keep`.
    ///
    /// `factor_dims` lists the factor dimensions left to right (first factor
    /// most significant). Kept factors retain their relative order.
    pub fn partial_trace(&self, factor_dims: &[usize], keep: &[usize]) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::InvalidInput(
                "factor dimensions must be positive".into(),
            ));
        }
        let total: usize = factor_dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch {
                left: total,
                right: self.dim(),
            });
        }
        let mut kept = vec![false; factor_dims.len()];
        for &k in keep {
            if k >= factor_dims.len() {
                return Err(Error::InvalidInput(format!(
                    "keep index {k} out of range for {} factors",
                    factor_dims.len()
                )));
            }
            kept[k] = true;
        }
        let keep_dim: usize = factor_dims
            .iter()
            .zip(&kept)
            .filter(|(_, &k)| k)
            .map(|(d, _)| d)
            .product();
        let trace_dim = total / keep_dim;

        // Split each full index into (kept multi-index, traced multi-index).
        let mut by_trace: Vec<Vec<usize>> = vec![vec![0; keep_dim]; trace_dim];
        for full in 0..total {
            let mut rem = full;
            let (mut ki, mut kstride) = (0usize, 1usize);
            let (mut ti, mut tstride) = (0usize, 1usize);
            for (f, &d) in factor_dims.iter().enumerate().rev() {
                let digit = rem % d;
                rem /= d;
                if kept[f] {
                    ki += digit * kstride;
                    kstride *= d;
                } else {
                    ti += digit * tstride;
                    tstride *= d;
                }
            }
            by_trace[ti][ki] = full;
        }

        let mut out = Mat::<C64>::zeros(keep_dim, keep_dim);
        for rows in &by_trace {
            for (kc, &c) in rows.iter().enumerate() {
                for (kr, &r) in rows.iter().enumerate() {
                    out[(kr, kc)] += self.mat[(r, c)];
                }
            }
        }
        Ok(Self { mat: out })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        let n = self.dim();
        let mut out = vec![ZERO; n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == ZERO {
                continue;
            }
            let col = self.mat.col(j);
            for (i, o) in out.iter_mut().enumerate() {
                *o += col[i] * vj;
            }
        }
        out
    }

    /// Principal submatrix on the given index set.
    pub(crate) fn submatrix(&self, idx: &[usize]) -> Mat<C64> {
        Mat::from_fn(idx.len(), idx.len(), |i, j| self.mat[(idx[i], idx[j])])
    }

    /// Partition of the index set into the connected components of the
    /// nonzero pattern.
    ///
    /// After a common row/column permutation the matrix is block diagonal
    /// with one block per component. Components are ordered by their smallest
    /// index and each component is sorted.
    pub fn block_partition(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for j in 0..n {
            for i in 0..n {
                if i != j && self.mat[(i, j)] != ZERO {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut slot = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let root = find(&mut parent, i);
            if slot[root] == usize::MAX {
                slot[root] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[slot[root]].push(i);
        }
        blocks
    }

    /// Row-major `(re, im)` tables.
    pub fn to_row_major(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = self.dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| self.mat[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| self.mat[(i, j)].im).collect())
            .collect();
        (re, im)
    }
}

impl PartialEq for ComplexMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) == 0.0
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}
