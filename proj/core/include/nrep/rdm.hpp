// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief Reduced density matrices and the pair-observable coordinate system.
 *
 * The pair basis is the N=2 Slater basis: pair I = {i1 < i2} is the state
 * a_{i1}^dag a_{i2}^dag |vac>, and a_I = a_{i2} a_{i1}. The two-body reduced
 * density matrix is
 *
 *     rho[I][K] = c_N <a_K^dag a_I>,   c_N = 2 / (N (N - 1)),
 *
 * which has unit trace and equals sigma itself when N = 2. Expectation
 * coordinates are alpha_S = tr(S_pair rho) = c_N tr(sigma S_N).
 */

#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/linalg.hpp"

namespace nrep {

/// 2 / (N (N - 1)).
[[nodiscard]] double pair_normalization(int particles);

class PairBasis {
 public:
  explicit PairBasis(int modes);

  [[nodiscard]] int modes() const noexcept { return slater_.modes(); }
  [[nodiscard]] std::size_t size() const noexcept { return slater_.size(); }
  [[nodiscard]] std::pair<int, int> pair(std::size_t k) const;
  [[nodiscard]] std::size_t index(int i, int j) const;
  [[nodiscard]] const SlaterBasis& slater() const noexcept { return slater_; }
  /// 1-based label, e.g. "1_2".
  [[nodiscard]] std::string label(std::size_t k) const;

 private:
  SlaterBasis slater_;
};

struct TwoRDM {
  int modes = 0;
  int particles = 0;
  CMatrix matrix;

  /// Hermitian, unit trace and PSD to the given tolerance.
  void validate(double tol = 1e-10) const;
  [[nodiscard]] std::size_t pair_count() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct OneRDM {
  int modes = 0;
  int particles = 0;
  CMatrix matrix;  ///< gamma[i][j] = <a_i^dag a_j>, trace N
};

[[nodiscard]] TwoRDM two_rdm(const NSectorDensity& sigma);
[[nodiscard]] OneRDM one_rdm(const NSectorDensity& sigma);

/// tau = (1/N) sum_i a_i sigma a_i^dag on the (N-1)-sector; keeps the 2-RDM unchanged.
[[nodiscard]] NSectorDensity remove_particle(const NSectorDensity& sigma);

/// Eigenvalues in [-1e-10, 1 + 1e-10] and trace N +- 1e-8.
[[nodiscard]] bool coleman_check(const OneRDM& gamma);

enum class ObservableKind { kX, kY, kZ };

struct Observable {
  ObservableKind kind;
  std::size_t first;   ///< pair index I
  std::size_t second;  ///< pair index J (equals I for Z)
};

/**
 * X_IJ = a_I^dag a_J + a_J^dag a_I and Y_IJ = -i a_I^dag a_J + i a_J^dag a_I
 * for I < J, then Z_I = a_I^dag a_I for every pair but the last. Together with
 * the identity these span the Hermitian m x m matrices.
 */
class ObservableBasis {
 public:
  explicit ObservableBasis(int modes);

  [[nodiscard]] int modes() const noexcept { return pairs_.modes(); }
  [[nodiscard]] std::size_t pair_count() const noexcept { return pairs_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return observables_.size(); }
  [[nodiscard]] const PairBasis& pairs() const noexcept { return pairs_; }
  [[nodiscard]] const std::vector<Observable>& observables() const noexcept { return observables_; }
  [[nodiscard]] const Observable& observable(std::size_t k) const { return observables_.at(k); }
  /// e.g. "X(1_2;1_3)" or "Z(1_2)"
  [[nodiscard]] std::string label(std::size_t k) const;

  [[nodiscard]] CMatrix pair_matrix(std::size_t k) const;
  [[nodiscard]] FermionOperator fermion_operator(std::size_t k) const;

  /// alpha_S = tr(S rho) for a Hermitian pair-space matrix.
  [[nodiscard]] RVector coordinates(const CMatrix& rho) const;
  /// The unique Hermitian trace-1 matrix with the given coordinates.
  [[nodiscard]] CMatrix density_from_coordinates(const RVector& alpha) const;
  /// Dual operator D_S: tr(D_S T) = delta_ST, tr(D_S) = 0.
  [[nodiscard]] CMatrix dual(std::size_t k) const;

  /// Rows vec(S) in the isometric real vectorization (l x m^2).
  [[nodiscard]] const RMatrix& analysis() const noexcept { return analysis_; }
  /// Columns vec(D_S) (m^2 x l); offset() is the dual of the identity.
  [[nodiscard]] const RMatrix& synthesis() const noexcept { return synthesis_; }
  [[nodiscard]] const RVector& offset() const noexcept { return offset_; }
  /// Hilbert-Schmidt metric on coordinate differences: synthesis^T synthesis.
  [[nodiscard]] const RMatrix& hs_metric() const noexcept { return hs_metric_; }

  /// ||alpha(A) - alpha(B)||_2 <= alpha_per_trace * ||A - B||_1.
  [[nodiscard]] double alpha_per_trace() const noexcept { return alpha_per_trace_; }
  /// ||A - B||_1 <= trace_per_alpha * ||alpha(A) - alpha(B)||_2.
  [[nodiscard]] double trace_per_alpha() const noexcept { return trace_per_alpha_; }
  /// Radius of an alpha-ball around alpha(I/m) that stays inside the pair densities.
  [[nodiscard]] double inner_radius() const noexcept { return inner_radius_; }

 private:
  PairBasis pairs_;
  std::vector<Observable> observables_;
  RMatrix analysis_;
  RMatrix synthesis_;
  RVector offset_;
  RMatrix hs_metric_;
  double alpha_per_trace_ = 0.0;
  double trace_per_alpha_ = 0.0;
  double inner_radius_ = 0.0;
};

using ObservableBasisPtr = std::shared_ptr<const ObservableBasis>;

/// Cached, shared basis for d modes (d >= 3).
[[nodiscard]] ObservableBasisPtr observable_basis(int modes);

[[nodiscard]] inline std::size_t observable_count(int modes) {
  const std::size_t m = static_cast<std::size_t>(modes) * static_cast<std::size_t>(modes - 1) / 2;
  return m * (m - 1) + m - 1;
}

struct ExpectationVector {
  int modes = 0;
  int particles = 0;
  RVector values;
};

[[nodiscard]] ExpectationVector expectation_vector(const TwoRDM& rho);

using SectorObservables = std::vector<SparseMatrix>;

/// Sector matrices S_N of the observable basis, cached per (d, N).
[[nodiscard]] std::shared_ptr<const SectorObservables> sector_observables(int modes, int particles);

/// alpha_S = c_N tr(sigma S_N) computed on the sector, without forming the 2-RDM.
[[nodiscard]] ExpectationVector sector_expectation_vector(const NSectorDensity& sigma);
[[nodiscard]] TwoRDM rdm_from_alpha(const ExpectationVector& alpha);

[[nodiscard]] double trace_distance(const CMatrix& a, const CMatrix& b);

/// D_ij = <a_i^dag a_j^dag a_j a_i> = rho[{ij}][{ij}] / c_N; symmetric, zero diagonal.
[[nodiscard]] RMatrix diagonal_elements(const TwoRDM& rho);

}  // namespace nrep
