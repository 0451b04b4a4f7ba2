// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file oracle.hpp
 * @brief Membership and projection oracle for the N-representable set K.
 *
 * K is the image of the N-particle density matrices under the linear map
 * A(sigma)_S = c_N tr(sigma S_N). Projection onto K runs a conditional-gradient
 * loop over densities. Each iteration solves the linear subproblem with the
 * lowest eigenvector of G = A^*(g), which also yields a certified lower bound
 * on the distance: for every y in K, g.y >= lambda_min(G).
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/linalg.hpp"
#include "nrep/rdm.hpp"

namespace nrep {

enum class Metric {
  kEuclidean,       ///< plain l2 on coordinates
  kHilbertSchmidt,  ///< Frobenius distance of the reconstructed pair matrices
};

struct ProjectionOptions {
  double tolerance = 1e-4;
  int max_iterations = 20000;
  EigenMethod eigen_method = EigenMethod::kDense;
  /// Stop as soon as the certified lower bound is positive.
  bool stop_on_separation = false;
  /// Stop once the distance drops to this value (0 disables).
  double accept_below = 0.0;
  /// Stop once the certified lower bound reaches this value (0 disables).
  double reject_above = 0.0;
  bool record_history = false;
};

struct ProjectionResult {
  RVector nearest;             ///< image of the witness, a point of K
  double distance = 0.0;       ///< metric distance from the target to `nearest`
  double lower_bound = 0.0;    ///< certified lower bound on the distance to K
  double gap = 0.0;            ///< last Frank-Wolfe gap
  CMatrix witness;             ///< sector density with image `nearest`
  int iterations = 0;
  bool converged = false;      ///< distance - lower_bound <= tolerance, or distance <= tolerance
  /// Halfspace {y : normal.y <= offset} containing K; the target violates it
  /// when lower_bound > 0. Normal has unit Euclidean length.
  RVector certificate_normal;
  double certificate_offset = 0.0;
  std::vector<double> gap_history;
  std::vector<double> distance_history;
};

/// The set {scale * Re tr(sigma F_k)}_k over densities sigma on one sector.
class DensityImage {
 public:
  /// `metric` empty means Euclidean; otherwise a symmetric positive-definite l x l matrix.
  DensityImage(BasisPtr basis, std::shared_ptr<const SectorObservables> ops, double scale, RMatrix metric = {});

  [[nodiscard]] const BasisPtr& basis() const noexcept { return basis_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(ops_->size()); }
  [[nodiscard]] Eigen::Index sector_dimension() const noexcept { return static_cast<Eigen::Index>(basis_->size()); }

  [[nodiscard]] RVector image(const CMatrix& sigma) const;
  /// image(v v^dag) without forming the outer product.
  [[nodiscard]] RVector image_of_vector(const CVector& v) const;
  /// scale * sum_k g_k F_k
  [[nodiscard]] CMatrix adjoint(const RVector& g) const;

  [[nodiscard]] double norm(const RVector& v) const;
  [[nodiscard]] RVector metric_apply(const RVector& v) const;
  /// max over the set of <n, y>, exact via the largest eigenvalue of A^*(n).
  [[nodiscard]] double support(const RVector& n) const;

  [[nodiscard]] ProjectionResult project(const RVector& target, const ProjectionOptions& options = {},
                                         const CMatrix* warm_start = nullptr) const;

 private:
  BasisPtr basis_;
  std::shared_ptr<const SectorObservables> ops_;
  double scale_;
  RMatrix metric_;
  double lipschitz_ = 1.0;
};

enum class Verdict { kYes, kNo, kBorderline };

[[nodiscard]] std::string verdict_name(Verdict v);

struct RepresentabilityInstance {
  TwoRDM rho;
  int particles = 0;
  int modes = 0;
  double beta = 0.0;
};

struct Decision {
  Verdict verdict = Verdict::kBorderline;
  double distance = 0.0;     ///< alpha-Euclidean distance upper bound
  double lower_bound = 0.0;  ///< certified alpha-Euclidean lower bound
  double beta = 0.0;
  int iterations = 0;
  bool coleman_failed = false;
  double yes_threshold = 0.0;
  double no_threshold = 0.0;
};

struct SeparatingHyperplane {
  RVector normal;  ///< unit length
  double offset = 0.0;
  double margin = 0.0;  ///< <normal, target> - offset
};

enum class PrecheckResult { kPass, kFail };

/// Oracle for one (d, N). Construction builds the sector observables.
class RepresentabilityOracle {
 public:
  RepresentabilityOracle(int modes, int particles, std::size_t sector_cap = kDefaultSectorCap);

  [[nodiscard]] int modes() const noexcept { return modes_; }
  [[nodiscard]] int particles() const noexcept { return particles_; }
  [[nodiscard]] std::size_t dimension() const noexcept { return basis_->size(); }
  [[nodiscard]] const ObservableBasis& observables() const noexcept { return *observables_; }
  [[nodiscard]] const DensityImage& image(Metric metric = Metric::kEuclidean) const;

  [[nodiscard]] ExpectationVector contraction_expectations(const CMatrix& sigma) const;

  [[nodiscard]] ProjectionResult project(const RVector& target, const ProjectionOptions& options = {},
                                         Metric metric = Metric::kEuclidean,
                                         const CMatrix* warm_start = nullptr) const;

  [[nodiscard]] Decision decide(const TwoRDM& rho, double beta, const ProjectionOptions& options = {}) const;

  [[nodiscard]] SeparatingHyperplane separating_hyperplane(const RVector& target, double tol,
                                                           const ProjectionOptions& options = {}) const;

 private:
  int modes_;
  int particles_;
  BasisPtr basis_;
  ObservableBasisPtr observables_;
  std::shared_ptr<const SectorObservables> ops_;
  std::unique_ptr<DensityImage> euclidean_;
  mutable std::unique_ptr<DensityImage> hilbert_schmidt_;
};

[[nodiscard]] ExpectationVector contraction_expectations(const NSectorDensity& sigma);

[[nodiscard]] ProjectionResult project_onto_K(const ExpectationVector& target, int particles, int modes,
                                              double tol = 1e-4, int max_iterations = 20000);

[[nodiscard]] Decision is_representable(const RepresentabilityInstance& instance);

[[nodiscard]] SeparatingHyperplane separating_hyperplane(const ExpectationVector& target, int particles, int modes,
                                                         double tol = 1e-4);

/// 1-RDM contracted from the 2-RDM: gamma = (N/2) * sum over one pair index, trace N.
[[nodiscard]] OneRDM contracted_one_rdm(const TwoRDM& rho, int particles);

/// FAIL certifies non-representability; PASS is inconclusive.
[[nodiscard]] PrecheckResult coleman_precheck(const TwoRDM& rho, int particles);

/// `verdict=YES distance=<float> beta=<float> iters=<int>`
[[nodiscard]] std::string format_verdict(const Decision& decision);

}  // namespace nrep
