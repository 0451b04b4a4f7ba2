// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Slater-determinant bases and exact matrices of fermionic operators.
 *
 * Conventions used throughout the library:
 *
 *  - Modes are 0-based in code (mode k is printed as k+1). An occupation
 *    bitstring stores mode k in bit k.
 *  - A Slater basis state with occupied modes k1 < k2 < ... < kN is
 *    a_{k1}^dag a_{k2}^dag ... a_{kN}^dag |vac>.
 *  - Each elementary a_k or a_k^dag contributes (-1)^(number of occupied modes
 *    with index < k) when it acts; {a_i, a_j^dag} = delta_ij.
 *  - The N-particle basis is ordered lexicographically on the sorted list of
 *    occupied modes ({1,2} < {1,3} < ... < {2,3}), i.e. lexicographically on
 *    bitstrings printed with mode 1 first and '1' ranked before '0'.
 *  - Monomials are stored in canonical normal order
 *    a_{i1}^dag ... a_{ip}^dag a_{j1} ... a_{jq} with both index lists strictly
 *    ascending; any reordering sign lives in the coefficient.
 */

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nrep/linalg.hpp"

namespace nrep {

using Occupation = std::uint64_t;

inline constexpr int kMaxModes = 62;
inline constexpr std::size_t kDefaultSectorCap = 100000;

/// Exact binomial coefficient; saturates at UINT64_MAX.
[[nodiscard]] std::uint64_t binomial(int n, int k);

[[nodiscard]] inline int popcount(Occupation s) { return __builtin_popcountll(s); }

/// Sign (-1)^(occupied modes below `mode`).
[[nodiscard]] inline int parity_below(Occupation s, int mode) {
  const Occupation below = mode == 0 ? 0 : (s & ((Occupation{1} << mode) - 1));
  return (popcount(below) & 1) ? -1 : 1;
}

/// Printable form, mode 1 first: modes {0,1} of 4 -> "1100".
[[nodiscard]] std::string occupation_to_string(Occupation s, int modes);
[[nodiscard]] Occupation occupation_from_string(std::string_view text);
[[nodiscard]] Occupation occupation_from_modes(std::span<const int> modes);
[[nodiscard]] std::vector<int> occupied_modes(Occupation s, int modes);

class SlaterBasis {
 public:
  SlaterBasis(int modes, int particles, std::size_t cap = kDefaultSectorCap);

  [[nodiscard]] int modes() const noexcept { return modes_; }
  [[nodiscard]] int particles() const noexcept { return particles_; }
  [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
  [[nodiscard]] const std::vector<Occupation>& states() const noexcept { return states_; }
  [[nodiscard]] Occupation state(std::size_t k) const { return states_.at(k); }
  [[nodiscard]] std::optional<std::size_t> find(Occupation s) const;
  /// Like find() but throws when s is not in the basis.
  [[nodiscard]] std::size_t index(Occupation s) const;
  [[nodiscard]] std::string label(std::size_t k) const { return occupation_to_string(states_.at(k), modes_); }

 private:
  int modes_;
  int particles_;
  std::vector<Occupation> states_;
  std::unordered_map<Occupation, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const SlaterBasis>;

[[nodiscard]] SlaterBasis build_basis(int modes, int particles, std::size_t cap = kDefaultSectorCap);
[[nodiscard]] BasisPtr make_basis(int modes, int particles, std::size_t cap = kDefaultSectorCap);

struct Ladder {
  int mode;
  bool dagger;
};

struct Monomial {
  std::vector<int> creators;      ///< strictly ascending
  std::vector<int> annihilators;  ///< strictly ascending

  auto operator<=>(const Monomial&) const = default;
  [[nodiscard]] int particle_change() const {
    return static_cast<int>(creators.size()) - static_cast<int>(annihilators.size());
  }
  [[nodiscard]] int degree() const { return static_cast<int>(creators.size() + annihilators.size()); }
};

struct MonomialAction {
  int sign;
  Occupation result;
};

/// Applies a canonical monomial to a basis bitstring; nullopt when it annihilates it.
[[nodiscard]] std::optional<MonomialAction> apply_monomial(const Monomial& term, Occupation state);

/// Applies a raw word of ladder operators (rightmost acts first).
[[nodiscard]] std::optional<MonomialAction> apply_word(std::span<const Ladder> word, Occupation state);

class FermionOperator {
 public:
  using TermMap = std::map<Monomial, Complex>;

  explicit FermionOperator(int modes);

  static FermionOperator constant(int modes, Complex value);
  static FermionOperator creation(int modes, int mode);
  static FermionOperator annihilation(int modes, int mode);
  static FermionOperator number(int modes, int mode);
  /// coefficient * word, brought to canonical normal order with the
  /// anticommutation relations (contractions included).
  static FermionOperator from_word(int modes, std::span<const Ladder> word, Complex coefficient = 1.0);

  [[nodiscard]] int modes() const noexcept { return modes_; }
  [[nodiscard]] const TermMap& terms() const noexcept { return terms_; }
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }

  /// Adds coefficient * a^dag_{creators...} a_{annihilators...}; the index lists may be
  /// in any order (the permutation sign is absorbed), repeated indices give zero.
  void add_term(Complex coefficient, std::vector<int> creators, std::vector<int> annihilators);

  [[nodiscard]] Complex coefficient(const Monomial& m) const;
  [[nodiscard]] Complex constant_term() const { return coefficient(Monomial{}); }

  FermionOperator& operator+=(const FermionOperator& other);
  FermionOperator& operator-=(const FermionOperator& other);
  FermionOperator& operator*=(Complex scalar);

  friend FermionOperator operator+(FermionOperator a, const FermionOperator& b) { return a += b; }
  friend FermionOperator operator-(FermionOperator a, const FermionOperator& b) { return a -= b; }
  friend FermionOperator operator*(FermionOperator a, Complex s) { return a *= s; }
  friend FermionOperator operator*(Complex s, FermionOperator a) { return a *= s; }
  friend FermionOperator operator*(const FermionOperator& a, const FermionOperator& b);

  [[nodiscard]] FermionOperator adjoint() const;
  [[nodiscard]] bool is_number_conserving() const;
  /// Symbolic check: every coefficient of (O - O^dag) is below tol.
  [[nodiscard]] bool is_hermitian(double tol = 1e-12) const;
  [[nodiscard]] int max_degree() const;

  /// Drops terms with |coefficient| <= tol.
  void prune(double tol = 1e-14);

 private:
  void accumulate(const Monomial& m, Complex c);

  int modes_;
  TermMap terms_;
};

struct MatrixEntry {
  Eigen::Index row;
  Eigen::Index col;
  Complex value;
};

/// Nonzero entries of op : basis_in -> basis_out, duplicates merged, sorted by (col,row).
/// Terms whose particle change differs from out.N - in.N are skipped.
[[nodiscard]] std::vector<MatrixEntry> operator_entries(const FermionOperator& op, const SlaterBasis& basis_in,
                                                        const SlaterBasis& basis_out);

[[nodiscard]] CMatrix operator_matrix(const FermionOperator& op, const SlaterBasis& basis_in,
                                      const SlaterBasis& basis_out);

/// Sparse sector matrix in coordinate form.
struct SparseMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<MatrixEntry> entries;

  /// tr(S * sigma) = sum S[r][c] sigma[c][r].
  [[nodiscard]] Complex trace_product(const CMatrix& sigma) const;
  /// out += weight * S
  void add_to(CMatrix& out, Complex weight) const;
  [[nodiscard]] CMatrix dense() const;
};

[[nodiscard]] SparseMatrix sparse_operator_matrix(const FermionOperator& op, const SlaterBasis& basis_in,
                                                  const SlaterBasis& basis_out);
[[nodiscard]] CMatrix operator_matrix(const FermionOperator& op, const SlaterBasis& basis);

inline constexpr int kMaxFockModes = 14;

/// Matrix on the full 2^d Fock space, indexed by occupation bits.
[[nodiscard]] CMatrix fock_space_matrix(const FermionOperator& op);

struct NSectorState {
  BasisPtr basis;
  CVector amplitudes;

  /// Checks dimensions and (if requested) unit norm to 1e-12.
  void validate(bool normalized = true) const;
};

struct NSectorDensity {
  BasisPtr basis;
  CMatrix matrix;

  /// Hermitian to 1e-12, eigenvalues >= -1e-10, trace 1 +- 1e-10.
  void validate() const;

  [[nodiscard]] static NSectorDensity pure(const NSectorState& state);
  [[nodiscard]] static NSectorDensity maximally_mixed(BasisPtr basis);
  [[nodiscard]] static NSectorDensity slater(BasisPtr basis, Occupation occupied);
};

struct GroundState {
  double energy;
  NSectorState state;
};

/// Lowest eigenpair of op on the sector; throws NonHermitianError when the
/// sector matrix deviates from Hermitian by more than 1e-8.
[[nodiscard]] GroundState ground_energy_exact(const FermionOperator& op, BasisPtr basis);

}  // namespace nrep
