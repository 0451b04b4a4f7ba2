// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file duality.hpp
 * @brief Particle-hole duality between 2-particle and (d-2)-particle coordinates.
 *
 * Hole observables mirror the particle ones with a_I and a_I^dag exchanged:
 * X'_IJ = a_I a_J^dag + a_J a_I^dag, Y'_IJ = -i a_I a_J^dag + i a_J a_I^dag,
 * Z'_I = a_I a_I^dag. On an N-particle state with h = d - N holes the hole
 * coordinates are alpha'_S = c'_h tr(tau S'), c'_h = 2 / (h (h - 1)).
 */

#pragma once

#include <memory>
#include <string>

#include "nrep/fock.hpp"
#include "nrep/linalg.hpp"
#include "nrep/rdm.hpp"

namespace nrep {

/// Hole counterpart of ObservableBasis::fermion_operator(k).
[[nodiscard]] FermionOperator hole_observable(const ObservableBasis& basis, std::size_t k);

/// Maps |I> to (-1)^{i1+i2} |complement of I> on the (d-2)-sector.
[[nodiscard]] NSectorDensity slater_complement(const NSectorDensity& sigma2);

/// Hole sector matrices S'_N, cached per (d, N).
[[nodiscard]] std::shared_ptr<const SectorObservables> hole_sector_observables(int modes, int particles);

/// alpha'_S = c'_h tr(tau S'_N); needs at least two holes.
[[nodiscard]] ExpectationVector hole_expectation_vector(const NSectorDensity& tau);

/// Affine map y = matrix * x + offset between coordinate systems.
struct CoordinateMap {
  RMatrix matrix;
  RVector offset;
  /// Largest residual seen on the random validation states.
  double validation_residual = 0.0;

  [[nodiscard]] RVector apply(const RVector& x) const { return matrix * x + offset; }
  [[nodiscard]] CoordinateMap inverse() const;
};

/// alpha(tau) = A alpha'(tau) + offset for every (d-2)-particle tau; d >= 5.
[[nodiscard]] CoordinateMap build_map_A(int modes);
/// alpha'(tau) = B alpha(tau) + offset for every (d-2)-particle tau; d >= 5.
[[nodiscard]] CoordinateMap build_map_B(int modes);

struct InnerBallCertificate {
  double radius;          ///< r2 * sigma_min(A)
  double pair_radius;     ///< r2: inner radius of the pair-density set around alpha(I/m)
  double sigma_min;       ///< smallest singular value of A
  double sigma_max;       ///< largest singular value of A
  double frobenius_b_sq;  ///< tr(B^T B)
  RVector center;         ///< alpha of the maximally mixed state
};

[[nodiscard]] InnerBallCertificate inner_ball_certificate(int modes);

/// `coordinate-map rows=<r> cols=<c>` header, one row per line, then `offset` and its entries.
[[nodiscard]] std::string format_coordinate_map(const CoordinateMap& map);

}  // namespace nrep
