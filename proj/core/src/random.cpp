// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/random.hpp"

#include "nrep/error.hpp"

namespace nrep {

CVector random_unit_vector(Eigen::Index dim, Rng& rng) {
  if (dim <= 0) throw InvalidArgument("random_unit_vector: dimension must be positive");
  std::normal_distribution<double> gauss;
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v.normalized();
}

CMatrix random_density_matrix(Eigen::Index dim, Rng& rng, Eigen::Index rank) {
  if (dim <= 0) throw InvalidArgument("random_density_matrix: dimension must be positive");
  if (rank <= 0 || rank > dim) rank = dim;
  std::normal_distribution<double> gauss;
  CMatrix g(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CMatrix random_hermitian_unit_trace(Eigen::Index dim, Rng& rng, double spread) {
  std::normal_distribution<double> gauss(0.0, spread);
  CMatrix h(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = gauss(rng);
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      h(i, j) = Complex(gauss(rng), gauss(rng));
      h(j, i) = std::conj(h(i, j));
    }
  }
  const Complex shift = (h.trace() - Complex(1.0, 0.0)) / static_cast<double>(dim);
  h.diagonal().array() -= shift.real();
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace nrep
