// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "nrep/error.hpp"

namespace nrep {

double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("hermiticity_defect: matrix is not square");
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double trace_norm(const CMatrix& h) { return hermitian_eigenvalues(h).cwiseAbs().sum(); }

namespace {

Eigenpair dense_lowest(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  Eigenpair out;
  out.value = solver.eigenvalues()(0);
  out.vector = solver.eigenvectors().col(0);
  out.converged = true;
  return out;
}

double gershgorin_upper(const CMatrix& h) {
  double bound = -std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    double off = h.row(r).cwiseAbs().sum() - std::abs(h(r, r));
    bound = std::max(bound, h(r, r).real() + off);
  }
  return bound;
}

}  // namespace

Eigenpair shifted_power_lowest(const CMatrix& h, const PowerIterationOptions& options, const CVector* warm_start) {
  const Eigen::Index n = h.rows();
  if (n == 0) throw InvalidArgument("shifted_power_lowest: empty matrix");
  if (n == 1) {
    Eigenpair out;
    out.value = h(0, 0).real();
    out.vector = CVector::Ones(1);
    out.converged = true;
    return out;
  }
  const double shift = gershgorin_upper(h);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());

  CVector v;
  if (warm_start != nullptr && warm_start->size() == n && warm_start->norm() > 0) {
    v = *warm_start;
  } else {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  }
  v.normalize();

  double theta = (v.adjoint() * h * v)(0).real();
  for (int it = 1; it <= options.max_iterations; ++it) {
    CVector hv = h * v;
    CVector next = shift * v - hv;
    const double norm = next.norm();
    if (norm == 0.0) break;
    v = next / norm;
    hv = h * v;
    const double updated = v.dot(hv).real();
    const double residual = (hv - updated * v).norm();
    const bool settled = std::abs(updated - theta) <= options.tolerance * scale &&
                         residual <= std::sqrt(options.tolerance) * scale;
    theta = updated;
    if (settled) {
      Eigenpair out;
      out.value = theta;
      out.vector = v;
      out.iterations = it;
      out.converged = true;
      return out;
    }
  }
  if (options.dense_fallback) {
    Eigenpair out = dense_lowest(h);
    out.iterations = options.max_iterations;
    return out;
  }
  Eigenpair out;
  out.value = theta;
  out.vector = v;
  out.iterations = options.max_iterations;
  out.converged = false;
  return out;
}

Eigenpair lowest_eigenpair(const CMatrix& h, EigenMethod method, const CVector* warm_start) {
  if (method == EigenMethod::kShiftedPower) return shifted_power_lowest(h, {}, warm_start);
  return dense_lowest(h);
}

RVector project_to_simplex(const RVector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw InvalidArgument("project_to_simplex: empty vector");
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

CMatrix project_to_density(const CMatrix& h) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  const RVector weights = project_to_simplex(solver.eigenvalues());
  return solver.eigenvectors() * weights.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

RVector hermitian_to_real(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  RVector out(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) out(k++) = h(i, i).real();
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out(k++) = root2 * h(i, j).real();
      out(k++) = root2 * h(i, j).imag();
    }
  }
  return out;
}

CMatrix real_to_hermitian(const RVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw DimensionMismatch("real_to_hermitian: length is not dim^2");
  CMatrix h = CMatrix::Zero(dim, dim);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = v(k++);
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      const Complex z(v(k) * inv_root2, v(k + 1) * inv_root2);
      k += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

}  // namespace nrep
