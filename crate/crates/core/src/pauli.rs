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

//! Single-qubit Pauli matrices and Pauli strings on `(C²)^{⊗n}`.
//!
//! Qubit `0` is the leftmost (most significant) tensor factor.

use serde::{Deserialize, Serialize};

use crate::matrix::{ComplexMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> ComplexMatrix {
        let rows = match self {
            Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, -I], [I, ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        };
        ComplexMatrix::from_fn(2, |i, j| rows[i][j])
    }

    /// Whether the matrix flips the computational basis bit.
    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Coefficient of `σ|b⟩` on the basis vector it maps to.
    fn phase(self, bit: usize) -> C64 {
        match (self, bit) {
            (Pauli::I, _) | (Pauli::X, _) => ONE,
            (Pauli::Y, 0) => I,
            (Pauli::Y, _) => -I,
            (Pauli::Z, 0) => ONE,
            (Pauli::Z, _) => -ONE,
        }
    }

    pub fn commutes_with(self, other: Pauli) -> bool {
        self == Pauli::I || other == Pauli::I || self == other
    }
}

/// The Pauli string `P₀ ⊗ P₁ ⊗ … ⊗ P_{n−1}`.
pub fn pauli_string(paulis: &[Pauli]) -> ComplexMatrix {
    let n = paulis.len();
    let dim = 1usize << n;
    let mut flip = 0usize;
    for (q, p) in paulis.iter().enumerate() {
        if p.flips() {
            flip |= 1 << (n - 1 - q);
        }
    }
    let mut m = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let mut coeff = ONE;
        for (q, p) in paulis.iter().enumerate() {
            coeff *= p.phase((col >> (n - 1 - q)) & 1);
        }
        m.set(col ^ flip, col, coeff);
    }
    m
}

/// `σ` acting on qubit `site` of `n` qubits, identity elsewhere.
pub fn local(pauli: Pauli, site: usize, n: usize) -> ComplexMatrix {
    assert!(site < n, "site {site} out of range for {n} qubits");
    let mut s = vec![Pauli::I; n];
    s[site] = pauli;
    pauli_string(&s)
}

/// The standard Pauli pair `(σ^x_j, σ^z_j)` for every qubit of `(C²)^{⊗n}`.
pub fn standard_pairs(n: usize) -> Vec<(ComplexMatrix, ComplexMatrix)> {
    (0..n)
        .map(|j| (local(Pauli::X, j, n), local(Pauli::Z, j, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_string_matches_kronecker_chain() {
        let s = [Pauli::Y, Pauli::Z, Pauli::X];
        let chain = ComplexMatrix::kron_all(s.iter().map(|p| p.matrix()).collect::<Vec<_>>().iter());
        assert_eq!(pauli_string(&s), chain);
    }

    #[test]
    fn products_and_commutation() {
        let (x, y, z) = (Pauli::X.matrix(), Pauli::Y.matrix(), Pauli::Z.matrix());
        // XZ = −iY
        assert_eq!(&x * &z, y.scale(-I));
        assert!(Pauli::X.commutes_with(Pauli::I));
        assert!(!Pauli::X.commutes_with(Pauli::Z));
    }
}
