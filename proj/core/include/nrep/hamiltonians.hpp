// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonians.hpp
 * @brief Pauli-string Hamiltonians and their fermionic images.
 *
 * Qubit q is bit q of a computational basis index, and character q of a Pauli
 * word. Qubit i of a spin Hamiltonian is carried by the mode pair
 * (a_i, b_i) = (2i, 2i+1); |0> is a_i^dag|vac> and |1> is b_i^dag|vac>.
 */

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/linalg.hpp"

namespace nrep {

/// Pauli string stored as X/Z bit masks; (x,z) = (1,1) on a qubit is Y.
/// As an operator, P|b> = i^{#Y} (-1)^{popcount(b & z)} |b xor x>.
struct PauliString {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  auto operator<=>(const PauliString&) const = default;

  [[nodiscard]] int weight() const { return __builtin_popcountll(x | z); }
  [[nodiscard]] int y_count() const { return __builtin_popcountll(x & z); }
  [[nodiscard]] char letter(int qubit) const;
  [[nodiscard]] std::string word(int qubits) const;

  static PauliString single(int qubit, char letter);
  /// Case-insensitive word over {I,X,Y,Z}; character q acts on qubit q.
  static PauliString parse(std::string_view word);
};

struct PauliProduct {
  Complex phase;
  PauliString string;
};

[[nodiscard]] PauliProduct multiply(const PauliString& a, const PauliString& b);

class QubitOperator {
 public:
  using TermMap = std::map<PauliString, Complex>;

  explicit QubitOperator(int qubits);

  static QubitOperator identity(int qubits, Complex scale = 1.0);
  static QubitOperator term(int qubits, const PauliString& p, Complex coefficient = 1.0);

  [[nodiscard]] int qubits() const noexcept { return qubits_; }
  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] Complex coefficient(const PauliString& p) const;

  void add(const PauliString& p, Complex coefficient);

  QubitOperator& operator+=(const QubitOperator& other);
  QubitOperator& operator-=(const QubitOperator& other);
  QubitOperator& operator*=(Complex s);
  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }
  friend QubitOperator operator*(QubitOperator a, Complex s) { return a *= s; }
  friend QubitOperator operator*(Complex s, QubitOperator a) { return a *= s; }
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);

  [[nodiscard]] QubitOperator adjoint() const;
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
  void prune(double tol = 1e-14);

  /// Dense 2^n x 2^n matrix (n <= 14).
  [[nodiscard]] CMatrix matrix() const;
  [[nodiscard]] CVector apply(const CVector& state) const;

 private:
  int qubits_;
  TermMap terms_;
};

struct SpinTerm {
  double coefficient;
  PauliString pauli;
};

class SpinHamiltonian {
 public:
  explicit SpinHamiltonian(int qubits);

  /// Throws WeightViolation for weight > 2 and InvalidArgument for support beyond n.
  void add_term(double coefficient, const PauliString& pauli);
  void add_term(double coefficient, std::string_view word) { add_term(coefficient, PauliString::parse(word)); }

  [[nodiscard]] int qubits() const noexcept { return qubits_; }
  [[nodiscard]] const std::vector<SpinTerm>& terms() const noexcept { return terms_; }
  /// Sum of |coefficient| over all terms.
  [[nodiscard]] double coefficient_norm() const;

  [[nodiscard]] QubitOperator to_qubit_operator() const;
  [[nodiscard]] CMatrix matrix() const;
  [[nodiscard]] double ground_energy() const;

 private:
  int qubits_;
  std::vector<SpinTerm> terms_;
};

/// Text format: optional `qubits=<n>` header, `<coef> <word>` lines, `#` comments.
[[nodiscard]] SpinHamiltonian parse_spin_hamiltonian(std::string_view text);
[[nodiscard]] std::string format_spin_hamiltonian(const SpinHamiltonian& h);

enum class Encoding {
  kOnePerSite,  ///< one fermion on each (a_i, b_i) pair
  kParity,      ///< zero or two fermions on each pair
};

struct EncodingMap {
  int qubits;
  Encoding encoding;
  double penalty_weight;

  [[nodiscard]] int modes() const { return 2 * qubits; }
  [[nodiscard]] static int mode_a(int qubit) { return 2 * qubit; }
  [[nodiscard]] static int mode_b(int qubit) { return 2 * qubit + 1; }
};

/// w = 2 * sum|c| + 1.
[[nodiscard]] double default_penalty_weight(const SpinHamiltonian& h);
inline constexpr double kDefaultParityPenalty = 0.5;

/// z bit q = qubit q. One-per-site: a_q occupied iff z_q = 0, b_q iff z_q = 1.
[[nodiscard]] Occupation encode_basis_state(std::uint64_t z, int qubits);
/// Parity encoding: both a_q, b_q occupied iff z_q = 1.
[[nodiscard]] Occupation encode_basis_state_parity(std::uint64_t z, int qubits);

/// P_i = (2 n_a - 1)(2 n_b - 1); equals -1 with one fermion on the pair, +1 otherwise.
[[nodiscard]] FermionOperator site_parity(int qubits, int qubit);

/// Image of one Pauli letter acting on one qubit under the chosen encoding.
[[nodiscard]] FermionOperator pauli_image(int qubits, int qubit, char letter, Encoding encoding);

struct FermionImage {
  FermionOperator op;
  EncodingMap map;
};

/// Substitutes the single-qubit images and adds w * sum_i (1 + P_i)/2, which
/// vanishes on one-fermion-per-site states and costs w on every other pair.
[[nodiscard]] FermionImage spin_to_fermion(const SpinHamiltonian& h, double penalty_weight);
[[nodiscard]] FermionImage spin_to_fermion(const SpinHamiltonian& h);

/// Zero-or-two encoding with penalty epsilon * sum_i (1 - P_i)/2.
[[nodiscard]] FermionOperator spin_to_fermion_parity(const SpinHamiltonian& h,
                                                     double epsilon = kDefaultParityPenalty);

/// Rewrites every a_i^dag a_j as (1/(N-1)) sum_k a_i^dag a_k^dag a_k a_j; constants are kept.
[[nodiscard]] FermionOperator two_body_normal_form(const FermionOperator& op, int particles);

/// a_q -> A_q = -(Z_0 ... Z_{q-1}) (X_q + i Y_q)/2, a_q^dag -> A_q^dag.
[[nodiscard]] QubitOperator jordan_wigner(const FermionOperator& op);
[[nodiscard]] QubitOperator jordan_wigner_annihilation(int modes, int mode);

}  // namespace nrep
