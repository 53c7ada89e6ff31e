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

//! Separation of overlapping qubits through an ancilla lift.
//!
//! Each `X_j` becomes `σ^x_j ⊗ X_j` and each `Z_j` becomes `σ^z_j ⊗ Z_j` on
//! `(C²)^{⊗n} ⊗ H`, with the ancillas first. These lifted reflections nearly
//! commute pairwise, so the projection separation applies to
//! `½(I + R)`. Both of its basic operations keep the form `½(I + σ ⊗ A)` with
//! the Pauli string `σ` fixed, so the separated projections factor again and
//! the `H` factors are the new qubits.
//!
//! The dense route builds the lifted matrices. The factored route stores only
//! `(σ, A)` and acts on `H`, using
//!
//! - distance: `‖½(I + σ⊗A) − ½(I + σ⊗B)‖ = ½‖A − B‖`,
//! - commutator: `‖[½σ⊗A, ½τ⊗B]‖ = ¼‖AB − s·BA‖` with `s = +1` if `σ, τ`
//!   commute and `−1` otherwise,
//! - block-diagonalization against `½(I + τ⊗B)`: `A ↦ ½(A + s·BAB)`,
//! - rounding: `A ↦ sign(A)`.
//!
//! The routes agree except when `A` has an exactly zero eigenvalue, where
//! the dense rounding sends the eigenvalue `½` of the lifted projection to
//! `1` on both ancilla sectors while the factored route keeps the sector
//! structure.

use serde::{Deserialize, Serialize};

use super::projections::{separate_generic, SeparableOp, SeparationOptions};
use super::{Method, SeparationReport};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operator::{HermitianOperator, Reflection};
use crate::pauli::{local, pauli_string, Pauli};
use crate::qubit::{Label, QubitPair, QubitSystem};
use crate::report::BoundCheck;
use crate::spectral::{norm_bound_below, norm_of, round_with_distance, SpectrumTarget};
use crate::tolerance;

/// `½(I + σ ⊗ A)` with `σ` a Pauli string on the ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedOperator {
    pub tag: Vec<Pauli>,
    pub factor: HermitianOperator,
}

fn tag_sign(a: &[Pauli], b: &[Pauli]) -> f64 {
    let anti = a.iter().zip(b).filter(|(x, y)| !x.commutes_with(**y)).count();
    if anti % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl TaggedOperator {
    /// The lifted matrix `½(I + σ ⊗ A)`.
    pub fn to_dense(&self) -> ComplexMatrix {
        let s = ComplexMatrix::kron(&pauli_string(&self.tag), self.factor.matrix());
        (&ComplexMatrix::identity(s.dim()) + &s).scale_real(0.5)
    }
}

impl SeparableOp for TaggedOperator {
    fn round(&self) -> Result<(Self, f64)> {
        let (sign, d) = round_with_distance(&self.factor, SpectrumTarget::Sign)?;
        Ok((
            Self {
                tag: self.tag.clone(),
                factor: sign,
            },
            0.5 * d,
        ))
    }

    fn distance(&self, other: &Self) -> Result<f64> {
        if self.tag != other.tag {
            return Err(Error::Structural("distance between differently tagged operators".into()));
        }
        Ok(0.5 * norm_of(&(self.factor.matrix() - other.factor.matrix()))?)
    }

    fn commutator_norm(&self, other: &Self) -> Result<f64> {
        let (a, b) = (self.factor.matrix(), other.factor.matrix());
        let s = tag_sign(&self.tag, &other.tag);
        let m = &(a * b) - &(b * a).scale_real(s);
        Ok(0.25 * norm_of(&m)?)
    }

    fn block_diagonalize(&self, q: &Self) -> Result<Self> {
        let (a, b) = (self.factor.matrix(), q.factor.matrix());
        let s = tag_sign(&self.tag, &q.tag);
        let bab = &(b * a) * b;
        let m = (a + &bab.scale_real(s)).scale_real(0.5);
        Ok(Self {
            tag: self.tag.clone(),
            factor: HermitianOperator::from_parts_unchecked(m.hermitian_part()),
        })
    }

    fn trace(&self) -> f64 {
        let anc = 1usize << self.tag.len();
        let d = self.factor.dim() as f64;
        if self.tag.iter().all(|&p| p == Pauli::I) {
            0.5 * anc as f64 * (d + self.factor.matrix().trace().re)
        } else {
            0.5 * anc as f64 * d
        }
    }
}

/// How [`separate_qubits`] represents the lifted operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftStrategy {
    Dense,
    Factored,
    /// Dense when the lifted dimension is at most [`AUTO_DENSE_LIMIT`].
    #[default]
    Auto,
}

pub const AUTO_DENSE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QubitSeparationOptions {
    pub strategy: LiftStrategy,
    pub separation: SeparationOptions,
}

#[derive(Debug, Clone)]
pub struct QubitSeparation {
    pub system: QubitSystem,
    pub report: SeparationReport,
    /// The inner projection-separation report on the `2n` lifted projections.
    pub projection_report: SeparationReport,
    pub route: LiftStrategy,
    pub lifted_dim: usize,
}

fn label_pauli(label: Label) -> Pauli {
    match label {
        Label::X => Pauli::X,
        Label::Z => Pauli::Z,
    }
}

/// The reflection `X'` on `H` with `R ≈ σ_j ⊗ X'`, where `σ_j` acts on
/// ancilla `j` of `n`. Computed as `2^{−n} Tr_anc[(σ_j ⊗ I) R]`.
pub fn extract_factor(r: &Reflection, label: Pauli, j: usize, n: usize) -> Result<Reflection> {
    if j >= n {
        return Err(Error::InvalidInput(format!("ancilla {j} out of range for n = {n}")));
    }
    let anc = 1usize << n;
    if r.dim() % anc != 0 {
        return Err(Error::DimensionMismatch {
            left: r.dim(),
            right: anc,
        });
    }
    let h = r.dim() / anc;
    let sigma = local(label, j, n);
    let lifted = ComplexMatrix::kron(&sigma, &ComplexMatrix::identity(h));
    let traced = (&lifted * r.matrix()).partial_trace(&[anc, h], &[1])?;
    let factor = traced.scale_real(1.0 / anc as f64);
    let residual = norm_bound_below(
        &(&ComplexMatrix::kron(&sigma, &factor) - r.matrix()),
        tolerance::FACTOR_EXTRACTION,
    )?;
    if residual > tolerance::FACTOR_EXTRACTION {
        return Err(Error::FormViolation { residual });
    }
    Reflection::from_matrix(factor.hermitian_part())
        .map_err(|e| Error::Structural(format!("extracted factor is not a reflection: {e}")))
}

fn lift_tag(label: Label, j: usize, n: usize) -> Vec<Pauli> {
    let mut tag = vec![Pauli::I; n];
    tag[j] = label_pauli(label);
    tag
}

/// Exactly independent qubits near the input when its overlaps, anticommutator
/// defects and eigenvalue spreads are at most `eps`.
///
/// The movement bound asserted is `8nε/(1−ε)² + ε`; the tighter
/// `4nε/(1−ε)² + ε` is reported alongside without being asserted.
pub fn separate_qubits(
    system: &QubitSystem,
    eps: f64,
    opts: &QubitSeparationOptions,
) -> Result<QubitSeparation> {
    let n = system.n();
    let h = system.dim();
    if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "[0, 1)".into(),
        });
    }
    let lifted_dim = (1usize << n).saturating_mul(h);
    let route = match opts.strategy {
        LiftStrategy::Auto if lifted_dim <= AUTO_DENSE_LIMIT => LiftStrategy::Dense,
        LiftStrategy::Auto => LiftStrategy::Factored,
        s => s,
    };
    if route == LiftStrategy::Dense && lifted_dim > tolerance::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim: lifted_dim,
            max: tolerance::MAX_DIM,
        });
    }

    let measured = system.overlap_matrix()?.max_off_diagonal();
    let anticomm = system
        .pairs()
        .iter()
        .map(QubitPair::anticomm_defect)
        .fold(0.0, f64::max);
    let mut warnings = Vec::new();
    let ratio = eps / ((1.0 - eps) * (1.0 - eps));
    let mut precondition_ok = ratio <= 1.0 / (64.0 * n as f64);
    if !precondition_ok {
        warnings.push(format!(
            "ε/(1−ε)² = {ratio:.3e} exceeds 1/(64n) = {:.3e}; bounds are reported but not asserted",
            1.0 / (64.0 * n as f64)
        ));
    }
    if measured.max(anticomm) > eps * (1.0 + 1e-9) + 1e-12 {
        precondition_ok = false;
        warnings.push(format!(
            "measured overlap {measured:.3e} / anticommutator {anticomm:.3e} exceed ε = {eps:.3e}"
        ));
    }

    let labels: Vec<(usize, Label)> = (0..n)
        .flat_map(|j| Label::BOTH.into_iter().map(move |l| (j, l)))
        .collect();
    let eps_p = 0.25 * ratio;

    // Rounding R' to reflections acts on the H factor alone.
    let rounded: Vec<(HermitianOperator, f64)> = labels
        .iter()
        .map(|&(j, l)| round_with_distance(system.pair(j).get(l).op(), SpectrumTarget::Sign))
        .collect::<Result<_>>()?;
    let tagged: Vec<TaggedOperator> = labels
        .iter()
        .zip(&rounded)
        .map(|(&(j, l), (r, _))| TaggedOperator {
            tag: lift_tag(l, j, n),
            factor: r.clone(),
        })
        .collect();

    let (factors, projection_report) = match route {
        LiftStrategy::Factored => {
            let (qs, rep) = separate_generic(&tagged, eps_p, &opts.separation)?;
            let fs = qs
                .into_iter()
                .map(|q| {
                    Reflection::from_matrix(q.factor.into_matrix())
                        .map_err(|e| Error::Structural(format!("separated factor: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            (fs, rep)
        }
        _ => {
            let dense: Vec<HermitianOperator> = tagged
                .iter()
                .map(|t| HermitianOperator::from_parts_unchecked(t.to_dense()))
                .collect();
            let (qs, rep) = separate_generic(&dense, eps_p, &opts.separation)?;
            let id = ComplexMatrix::identity(lifted_dim);
            let fs = qs
                .iter()
                .zip(&labels)
                .map(|(q, &(j, l))| {
                    let r = Reflection::from_matrix_unchecked(&q.matrix().scale_real(2.0) - &id);
                    extract_factor(&r, label_pauli(l), j, n)
                })
                .collect::<Result<Vec<_>>>()?;
            (fs, rep)
        }
    };

    let mut pairs = Vec::with_capacity(n);
    let mut it = factors.into_iter();
    while let (Some(x), Some(z)) = (it.next(), it.next()) {
        pairs.push(QubitPair::with_tolerance(x, z, 1e-9)?);
    }
    let out = QubitSystem::new(pairs)?;

    let movement: Vec<f64> = labels
        .iter()
        .map(|&(j, l)| {
            norm_of(&(out.pair(j).get(l).matrix() - system.pair(j).get(l).matrix()))
        })
        .collect::<Result<_>>()?;
    let max_movement = movement.iter().copied().fold(0.0, f64::max);
    let residual = out.overlap_matrix()?.max_off_diagonal();
    let out_anticomm = out
        .pairs()
        .iter()
        .map(QubitPair::anticomm_defect)
        .fold(0.0, f64::max);
    let nf = n as f64;
    let proof_bound = 8.0 * nf * ratio + eps;
    let stated_bound = 4.0 * nf * ratio + eps;
    let rounding = rounded.iter().map(|r| r.1).fold(0.0, f64::max);

    let mut checks = vec![
        BoundCheck::new("max ‖S'_j − S_j‖ ≤ 8nε/(1−ε)² + ε", max_movement, proof_bound + 1e-12)
            .with_asserted(precondition_ok),
        BoundCheck::logged("max ‖S'_j − S_j‖ ≤ 4nε/(1−ε)² + ε", max_movement, stated_bound + 1e-12),
        BoundCheck::new("max overlap of separated qubits", residual, 1e-9),
        BoundCheck::new("max ‖{X'_j, Z'_j}‖", out_anticomm, 1e-9),
        BoundCheck::new("2^n ≤ dim H", (1u64 << n) as f64, h as f64),
        BoundCheck::new("max ‖R'_j − R_j‖ ≤ ε", rounding, eps + 1e-12).with_asserted(precondition_ok),
    ];
    for c in &projection_report.checks {
        let mut c = c.clone();
        c.name = format!("projections: {}", c.name);
        checks.push(c);
    }
    warnings.extend(projection_report.warnings.iter().cloned());

    let report = SeparationReport {
        method: Method::Qubits,
        n,
        epsilon: eps,
        measured_epsilon: measured.max(anticomm),
        order: projection_report.order.clone(),
        trace: projection_report.trace.clone(),
        slack: movement.iter().map(|m| proof_bound - m).collect(),
        movement,
        max_movement,
        max_residual_commutator: residual,
        bound: proof_bound,
        precondition_ok,
        warnings,
        rank_changes: projection_report.rank_changes.clone(),
        checks,
    };
    Ok(QubitSeparation {
        system: out,
        report,
        projection_report,
        route,
        lifted_dim,
    })
}
