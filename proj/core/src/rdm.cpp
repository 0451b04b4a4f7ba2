// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/rdm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include "nrep/error.hpp"

namespace nrep {

double pair_normalization(int particles) {
  if (particles < 2) throw InvalidArgument("two-body normalization needs N >= 2");
  return 2.0 / (static_cast<double>(particles) * static_cast<double>(particles - 1));
}

PairBasis::PairBasis(int modes) : slater_(modes, 2) {}

std::pair<int, int> PairBasis::pair(std::size_t k) const {
  const auto occ = occupied_modes(slater_.state(k), slater_.modes());
  return {occ[0], occ[1]};
}

std::size_t PairBasis::index(int i, int j) const {
  if (i == j) throw InvalidArgument("a pair needs two distinct modes");
  const int both[2] = {i, j};
  return slater_.index(occupation_from_modes(both));
}

std::string PairBasis::label(std::size_t k) const {
  const auto [i, j] = pair(k);
  return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

void TwoRDM::validate(double tol) const {
  const auto m = static_cast<Eigen::Index>(binomial(modes, 2));
  if (matrix.rows() != m || matrix.cols() != m) throw DimensionMismatch("2-RDM size does not match d(d-1)/2");
  if (particles < 2 || particles > modes) throw InvalidArgument("2-RDM particle count must lie in [2, d]");
  if (hermiticity_defect(matrix) > tol) throw InvalidArgument("2-RDM is not Hermitian");
  if (std::abs(matrix.trace().real() - 1.0) > tol) throw InvalidArgument("2-RDM trace differs from 1");
  if (hermitian_eigenvalues(matrix)(0) < -tol) throw InvalidArgument("2-RDM has a negative eigenvalue");
}

namespace {

// G[x][y] = sum_{s,t} sigma[s][t] sign_x(s) sign_y(t) over k-subsets x of s and y of t
// with s \ x = t \ y, where a_x = a_{xk} ... a_{x1} and sign_x(s) is its action sign.
CMatrix contract(const NSectorDensity& sigma, int k) {
  const SlaterBasis& basis = *sigma.basis;
  const SlaterBasis subsets(basis.modes(), k);
  struct Hit {
    Eigen::Index subset;
    Eigen::Index state;
    int sign;
  };
  const int reorder = ((k * (k - 1) / 2) % 2) ? -1 : 1;
  std::unordered_map<Occupation, std::vector<Hit>> groups;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const Occupation occ = basis.state(s);
    for (std::size_t x = 0; x < subsets.size(); ++x) {
      const Occupation sub = subsets.state(x);
      if ((occ & sub) != sub) continue;
      // a_x = a_{xk} ... a_{x1} is (-1)^{k(k-1)/2} times the ascending product.
      Monomial m;
      m.annihilators = occupied_modes(sub, basis.modes());
      const auto action = apply_monomial(m, occ);
      groups[action->result].push_back(
          {static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(s), action->sign * reorder});
    }
  }
  const auto n = static_cast<Eigen::Index>(subsets.size());
  CMatrix g = CMatrix::Zero(n, n);
  for (const auto& [rest, hits] : groups) {
    for (const Hit& a : hits)
      for (const Hit& b : hits) g(a.subset, b.subset) += sigma.matrix(a.state, b.state) * static_cast<double>(a.sign * b.sign);
  }
  return g;
}

}  // namespace

TwoRDM two_rdm(const NSectorDensity& sigma) {
  if (!sigma.basis) throw InvalidArgument("two_rdm: density has no basis");
  const int n = sigma.basis->particles();
  if (n < 2) throw InvalidArgument("two_rdm needs N >= 2");
  TwoRDM out;
  out.modes = sigma.basis->modes();
  out.particles = n;
  out.matrix = pair_normalization(n) * contract(sigma, 2);
  return out;
}

OneRDM one_rdm(const NSectorDensity& sigma) {
  if (!sigma.basis) throw InvalidArgument("one_rdm: density has no basis");
  const int n = sigma.basis->particles();
  if (n < 1) throw InvalidArgument("one_rdm needs N >= 1");
  OneRDM out;
  out.modes = sigma.basis->modes();
  out.particles = n;
  out.matrix = contract(sigma, 1).transpose();
  return out;
}

NSectorDensity remove_particle(const NSectorDensity& sigma) {
  if (!sigma.basis) throw InvalidArgument("remove_particle: density has no basis");
  const SlaterBasis& in = *sigma.basis;
  if (in.particles() < 1) throw InvalidArgument("remove_particle needs N >= 1");
  auto out_basis = make_basis(in.modes(), in.particles() - 1);
  CMatrix tau = CMatrix::Zero(static_cast<Eigen::Index>(out_basis->size()), static_cast<Eigen::Index>(out_basis->size()));
  for (int i = 0; i < in.modes(); ++i) {
    const CMatrix a = operator_matrix(FermionOperator::annihilation(in.modes(), i), in, *out_basis);
    tau += a * sigma.matrix * a.adjoint();
  }
  tau /= static_cast<double>(in.particles());
  return NSectorDensity{std::move(out_basis), tau};
}

bool coleman_check(const OneRDM& gamma) {
  if (gamma.matrix.rows() != gamma.modes || gamma.matrix.cols() != gamma.modes)
    throw DimensionMismatch("1-RDM is not d x d");
  if (hermiticity_defect(gamma.matrix) > 1e-8) return false;
  if (std::abs(gamma.matrix.trace().real() - gamma.particles) > 1e-8) return false;
  const RVector ev = hermitian_eigenvalues(gamma.matrix);
  return ev.minCoeff() >= -1e-10 && ev.maxCoeff() <= 1.0 + 1e-10;
}

ObservableBasis::ObservableBasis(int modes) : pairs_(modes) {
  if (modes < 3) throw InvalidArgument("observable basis needs d >= 3");
  const std::size_t m = pairs_.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) observables_.push_back({ObservableKind::kX, i, j});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) observables_.push_back({ObservableKind::kY, i, j});
  for (std::size_t i = 0; i + 1 < m; ++i) observables_.push_back({ObservableKind::kZ, i, i});

  const auto l = static_cast<Eigen::Index>(observables_.size());
  const auto dim = static_cast<Eigen::Index>(m);
  const Eigen::Index dim2 = dim * dim;
  analysis_.resize(l, dim2);
  for (Eigen::Index k = 0; k < l; ++k) analysis_.row(k) = hermitian_to_real(pair_matrix(static_cast<std::size_t>(k))).transpose();

  RMatrix full(dim2, dim2);
  full.topRows(l) = analysis_;
  full.row(l) = hermitian_to_real(CMatrix::Identity(dim, dim)).transpose();
  Eigen::FullPivLU<RMatrix> lu(full);
  if (lu.rank() != dim2) throw RankDeficiencyError("observable set plus identity does not span the pair space");
  const RMatrix inverse = lu.inverse();
  synthesis_ = inverse.leftCols(l);
  offset_ = inverse.col(l);
  hs_metric_ = synthesis_.transpose() * synthesis_;

  // Largest singular values through the l x l Gram matrices.
  const RMatrix gram = analysis_ * analysis_.transpose();
  alpha_per_trace_ = std::sqrt(Eigen::SelfAdjointEigenSolver<RMatrix>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
  const double sigma_d =
      std::sqrt(Eigen::SelfAdjointEigenSolver<RMatrix>(hs_metric_, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff());
  trace_per_alpha_ = std::sqrt(static_cast<double>(m)) * sigma_d;

  double op_sq = 0.0;
  for (Eigen::Index k = 0; k < l; ++k) {
    const RVector ev = hermitian_eigenvalues(dual(static_cast<std::size_t>(k)));
    const double op = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    op_sq += op * op;
  }
  const double slack = 1.0 / static_cast<double>(m);
  inner_radius_ = std::max(slack / std::sqrt(op_sq), slack / sigma_d);
}

std::string ObservableBasis::label(std::size_t k) const {
  const Observable& o = observables_.at(k);
  switch (o.kind) {
    case ObservableKind::kX: return "X(" + pairs_.label(o.first) + ";" + pairs_.label(o.second) + ")";
    case ObservableKind::kY: return "Y(" + pairs_.label(o.first) + ";" + pairs_.label(o.second) + ")";
    default: return "Z(" + pairs_.label(o.first) + ")";
  }
}

CMatrix ObservableBasis::pair_matrix(std::size_t k) const {
  const Observable& o = observables_.at(k);
  const auto m = static_cast<Eigen::Index>(pairs_.size());
  const auto i = static_cast<Eigen::Index>(o.first);
  const auto j = static_cast<Eigen::Index>(o.second);
  CMatrix s = CMatrix::Zero(m, m);
  switch (o.kind) {
    case ObservableKind::kX:
      s(i, j) = 1.0;
      s(j, i) = 1.0;
      break;
    case ObservableKind::kY:
      s(i, j) = -kI;
      s(j, i) = kI;
      break;
    case ObservableKind::kZ:
      s(i, i) = 1.0;
      break;
  }
  return s;
}

FermionOperator ObservableBasis::fermion_operator(std::size_t k) const {
  const Observable& o = observables_.at(k);
  const auto [i1, i2] = pairs_.pair(o.first);
  const auto [j1, j2] = pairs_.pair(o.second);
  FermionOperator op(modes());
  // a_I^dag a_J = a_{i1}^dag a_{i2}^dag a_{j2} a_{j1}
  switch (o.kind) {
    case ObservableKind::kX:
      op.add_term(1.0, {i1, i2}, {j2, j1});
      op.add_term(1.0, {j1, j2}, {i2, i1});
      break;
    case ObservableKind::kY:
      op.add_term(-kI, {i1, i2}, {j2, j1});
      op.add_term(kI, {j1, j2}, {i2, i1});
      break;
    case ObservableKind::kZ:
      op.add_term(1.0, {i1, i2}, {i2, i1});
      break;
  }
  return op;
}

RVector ObservableBasis::coordinates(const CMatrix& rho) const {
  const auto m = static_cast<Eigen::Index>(pairs_.size());
  if (rho.rows() != m || rho.cols() != m) throw DimensionMismatch("pair matrix has the wrong size");
  return analysis_ * hermitian_to_real(rho);
}

CMatrix ObservableBasis::density_from_coordinates(const RVector& alpha) const {
  if (alpha.size() != static_cast<Eigen::Index>(size())) throw DimensionMismatch("coordinate vector has the wrong length");
  return real_to_hermitian(synthesis_ * alpha + offset_, static_cast<Eigen::Index>(pairs_.size()));
}

CMatrix ObservableBasis::dual(std::size_t k) const {
  return real_to_hermitian(synthesis_.col(static_cast<Eigen::Index>(k)), static_cast<Eigen::Index>(pairs_.size()));
}

ObservableBasisPtr observable_basis(int modes) {
  static std::mutex mutex;
  static std::map<int, ObservableBasisPtr> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(modes);
  if (it == cache.end()) it = cache.emplace(modes, std::make_shared<const ObservableBasis>(modes)).first;
  return it->second;
}

ExpectationVector expectation_vector(const TwoRDM& rho) {
  const auto basis = observable_basis(rho.modes);
  return ExpectationVector{rho.modes, rho.particles, basis->coordinates(rho.matrix)};
}

std::shared_ptr<const SectorObservables> sector_observables(int modes, int particles) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SectorObservables>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    const auto it = cache.find({modes, particles});
    if (it != cache.end()) return it->second;
  }
  const auto basis = observable_basis(modes);
  const SlaterBasis sector(modes, particles);
  auto ops = std::make_shared<SectorObservables>();
  ops->reserve(basis->size());
  for (std::size_t k = 0; k < basis->size(); ++k)
    ops->push_back(sparse_operator_matrix(basis->fermion_operator(k), sector, sector));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(std::make_pair(modes, particles), std::move(ops)).first->second;
}

ExpectationVector sector_expectation_vector(const NSectorDensity& sigma) {
  if (!sigma.basis) throw InvalidArgument("sector_expectation_vector: density has no basis");
  const int d = sigma.basis->modes();
  const int n = sigma.basis->particles();
  const auto ops = sector_observables(d, n);
  const double c = pair_normalization(n);
  ExpectationVector out{d, n, RVector(static_cast<Eigen::Index>(ops->size()))};
  for (std::size_t k = 0; k < ops->size(); ++k)
    out.values(static_cast<Eigen::Index>(k)) = c * (*ops)[k].trace_product(sigma.matrix).real();
  return out;
}

TwoRDM rdm_from_alpha(const ExpectationVector& alpha) {
  const auto basis = observable_basis(alpha.modes);
  return TwoRDM{alpha.modes, alpha.particles, basis->density_from_coordinates(alpha.values)};
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("trace_distance: size mismatch");
  const CMatrix diff = a - b;
  return trace_norm(0.5 * (diff + diff.adjoint()));
}

RMatrix diagonal_elements(const TwoRDM& rho) {
  const PairBasis pairs(rho.modes);
  const double scale = 1.0 / pair_normalization(rho.particles);
  RMatrix out = RMatrix::Zero(rho.modes, rho.modes);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs.pair(k);
    const double v = rho.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real() * scale;
    out(i, j) = v;
    out(j, i) = v;
  }
  return out;
}

}  // namespace nrep
