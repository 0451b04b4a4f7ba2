// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ellipsoid.hpp
 * @brief Linear minimization over K with an oracle-driven ellipsoid method.
 *
 * The search runs on the coordinates where gamma is nonzero, since the minimum
 * over K equals the minimum over that coordinate projection of K. It starts
 * from the ball of radius sqrt(k) in those k coordinates, which contains the
 * projection since every |alpha_S| <= 1. A center outside K is cut by the certified halfspace
 * from the projection oracle; a center inside K records the feasible value of
 * its projection and is cut by the objective. The method stops when the best
 * feasible value is within eps of the ellipsoid lower bound
 * min over E of gamma.y + c0.
 */

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/linalg.hpp"
#include "nrep/oracle.hpp"
#include "nrep/rdm.hpp"

namespace nrep {

/// f(alpha) = gamma . alpha + constant.
struct LinearObjective {
  RVector gamma;
  double constant = 0.0;

  [[nodiscard]] double evaluate(const RVector& alpha) const { return gamma.dot(alpha) + constant; }
};

/// Objective with tr(sigma H) = gamma . alpha(sigma) + c0 for every N-particle density sigma.
/// H must be number conserving with only constant and two-creator two-annihilator terms.
[[nodiscard]] LinearObjective decompose_objective(const FermionOperator& h, const ObservableBasis& basis, int particles);

struct EllipsoidState {
  RVector center;
  RMatrix shape;  ///< E = {y : (y - c)^T shape^{-1} (y - c) <= 1}
  int iteration = 0;
  double log_volume = 0.0;  ///< log(vol E / vol unit ball)

  [[nodiscard]] static EllipsoidState ball(Eigen::Index dimension, double radius);
};

enum class CutType { kFeasible, kInfeasible };

struct TraceRow {
  int iteration;
  double center_norm;
  double volume_log;
  CutType cut;
  double best_value;
};

struct EllipsoidOptions {
  /// Oracle accuracy; 0 picks max(1e-6, min(1e-3, eps / (4 ||gamma||_2))).
  double oracle_tolerance = 0.0;
  int oracle_max_iterations = 5000;
  /// 0 uses the volume budget 2 (k + 1) k log(R ||gamma|| / (r eps)).
  long max_iterations = 0;
  bool record_trace = true;
  /// Run on the coordinates where gamma is nonzero instead of all l.
  bool restrict_to_support = true;
  std::size_t sector_cap = kDefaultSectorCap;
};

struct MinimizationResult {
  double value = 0.0;        ///< best feasible value found, an upper bound on the minimum
  double lower_bound = 0.0;  ///< certified lower bound on the minimum
  double eps = 0.0;
  ExpectationVector argmin;
  CMatrix witness;  ///< sector density attaining `value`
  long iterations = 0;
  long budget = 0;
  Eigen::Index dimension = 0;  ///< dimension the ellipsoid ran in
  bool converged = false;
  /// Largest per-iteration log(vol'/vol) seen; -1/(2(k+1)) or below for every cut.
  double worst_volume_step = 0.0;
  std::vector<TraceRow> trace;
};

/// eps <= 0 selects the default 1e-2 * ||gamma||_1.
[[nodiscard]] MinimizationResult minimize_over_K(const LinearObjective& objective, int particles, int modes,
                                                 double eps = 0.0, const EllipsoidOptions& options = {});

/// `iter,center_norm,volume_log,cut_type,best_value` rows under a header line.
[[nodiscard]] std::string format_trace_csv(const std::vector<TraceRow>& trace);

struct OracleEnergy {
  double energy = 0.0;  ///< best feasible value
  double lower_bound = 0.0;
  int modes = 0;
  int particles = 0;
  LinearObjective objective;
  MinimizationResult details;
};

/// Spin Hamiltonian -> fermionic image -> two-body form -> objective -> ellipsoid.
/// One-qubit inputs are padded with an idle qubit so the pair space has d >= 4.
[[nodiscard]] OracleEnergy ground_energy_via_oracle(const SpinHamiltonian& h, double eps = 0.0,
                                                    const EllipsoidOptions& options = {});

}  // namespace nrep
