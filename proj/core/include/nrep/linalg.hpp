// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file linalg.hpp
 * @brief Dense complex linear algebra shared by every module.
 *
 * Everything here operates on small dense Hermitian matrices (sector sizes up
 * to a few hundred). Eigen provides the storage and the dense eigensolvers;
 * the routines below add the density-matrix specific pieces: projection onto
 * the set of density matrices, trace norms, an isometric real vectorization
 * of Hermitian matrices and a shifted power iteration for the lowest
 * eigenpair.
 */

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace nrep {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// max_{ij} |M_ij - conj(M_ji)|
[[nodiscard]] double hermiticity_defect(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order.
[[nodiscard]] RVector hermitian_eigenvalues(const CMatrix& h);

/// Sum of absolute eigenvalues of a Hermitian matrix.
[[nodiscard]] double trace_norm(const CMatrix& h);

struct Eigenpair {
  double value = 0.0;
  CVector vector;
  int iterations = 0;
  bool converged = false;
};

enum class EigenMethod {
  kDense,         ///< Eigen::SelfAdjointEigenSolver
  kShiftedPower,  ///< power iteration on (s*I - H), dense fallback on stall
};

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 20000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  /// Fall back to the dense solver when the iteration budget runs out.
  bool dense_fallback = true;
};

/// Lowest eigenpair via power iteration on the shifted operator s*I - H, where
/// s is the Gershgorin upper bound of H. Deterministic start vector from the seed
/// unless a warm start is supplied.
[[nodiscard]] Eigenpair shifted_power_lowest(const CMatrix& h, const PowerIterationOptions& options = {},
                                             const CVector* warm_start = nullptr);

[[nodiscard]] Eigenpair lowest_eigenpair(const CMatrix& h, EigenMethod method = EigenMethod::kDense,
                                         const CVector* warm_start = nullptr);

/// Euclidean projection of v onto the probability simplex {p >= 0, sum p = 1}.
[[nodiscard]] RVector project_to_simplex(const RVector& v);

/// Frobenius-nearest density matrix (PSD, unit trace) to a Hermitian matrix.
[[nodiscard]] CMatrix project_to_density(const CMatrix& h);

/// Isometric map from n x n Hermitian matrices to R^{n^2}:
/// diagonal entries first, then sqrt(2)*Re and sqrt(2)*Im of the strict upper
/// triangle in row-major order. <A,B>_F = vec(A) . vec(B).
[[nodiscard]] RVector hermitian_to_real(const CMatrix& h);
[[nodiscard]] CMatrix real_to_hermitian(const RVector& v, Eigen::Index dim);

}  // namespace nrep
