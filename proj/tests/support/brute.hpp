// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementations for tests. Everything here is built from dense
// Kronecker products and explicit enumeration, sharing no code with the
// library beyond its matrix and operator types.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/linalg.hpp"
#include "nrep/random.hpp"

namespace nrep::brute {

[[nodiscard]] CMatrix kron(const CMatrix& a, const CMatrix& b);

/// 2x2 Pauli matrix for 'I', 'X', 'Y' or 'Z'.
[[nodiscard]] CMatrix pauli(char letter);

/// Kronecker product for a word whose letter q acts on qubit q (bit q of the index).
[[nodiscard]] CMatrix pauli_word(std::string_view word);

/// a_j on 2^d with a_j |s> = (-1)^{#occupied below j} |s ^ bit j>, built as
/// I x ... x |0><1| x Z x ... x Z.
[[nodiscard]] CMatrix ladder(int modes, int mode, bool dagger);

/// Sum of coefficient * a^dag_{c1} ... a^dag_{ck} a_{a1} ... a_{al} on 2^d.
[[nodiscard]] CMatrix fock_matrix(const FermionOperator& op);

/// Rows and columns of a 2^d matrix at the given occupations.
[[nodiscard]] CMatrix restrict(const CMatrix& full, const std::vector<Occupation>& states);

/// Occupations with exactly N of d modes set, in lexicographic order of occupied-mode lists.
[[nodiscard]] std::vector<Occupation> sector_states(int modes, int particles);

/// Embeds a sector density into 2^d.
[[nodiscard]] CMatrix embed(const CMatrix& sector, const std::vector<Occupation>& states, int modes);

/// rho[I][K] = c_N tr(sigma a_K^dag a_I) with a_I = a_{i2} a_{i1}, on a 2^d density.
[[nodiscard]] CMatrix two_rdm(const CMatrix& fock_density, int modes, int particles);

/// gamma[i][j] = tr(sigma a_i^dag a_j), on a 2^d density.
[[nodiscard]] CMatrix one_rdm(const CMatrix& fock_density, int modes);

/// Euclidean projection of a vector onto the probability simplex (sort-based).
[[nodiscard]] std::vector<double> simplex_projection(std::vector<double> v);

/// Frobenius-nearest density matrix to a Hermitian matrix.
[[nodiscard]] CMatrix nearest_density(const CMatrix& h);

/// Ascending eigenvalues of a Hermitian matrix.
[[nodiscard]] std::vector<double> spectrum(const CMatrix& h);

/// Random Haar-like unitary from the QR of a Gaussian matrix.
[[nodiscard]] CMatrix random_unitary(int dim, Rng& rng);

/// Random 2-local Hamiltonian with Gaussian coefficients on every weight <= 2 word.
[[nodiscard]] SpinHamiltonian random_two_local(int qubits, Rng& rng, double density = 0.6);

}  // namespace nrep::brute
