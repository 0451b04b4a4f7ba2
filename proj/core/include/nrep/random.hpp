// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "nrep/linalg.hpp"

namespace nrep {

using Rng = std::mt19937_64;

/// Haar-random unit vector (normalized complex Gaussian).
[[nodiscard]] CVector random_unit_vector(Eigen::Index dim, Rng& rng);

/// Random density matrix of the given rank from a complex Ginibre matrix.
[[nodiscard]] CMatrix random_density_matrix(Eigen::Index dim, Rng& rng, Eigen::Index rank = -1);

/// Random Hermitian matrix with unit trace and Gaussian entries (not PSD in general).
[[nodiscard]] CMatrix random_hermitian_unit_trace(Eigen::Index dim, Rng& rng, double spread = 1.0);

/// splitmix64 step; used to derive independent per-run seeds from one master seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace nrep
