// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nrep/error.hpp"
#include "nrep/io.hpp"

namespace nrep {

namespace {

constexpr double kDecompositionResidual = 1e-8;
constexpr double kEigenFloor = 1e-14;
constexpr int kShapeCheckPeriod = 100;

// Restores a symmetric positive-definite shape after round-off.
void repair_shape(RMatrix& shape) {
  shape = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<RMatrix> es(shape);
  if (es.eigenvalues().minCoeff() > kEigenFloor) return;
  const RVector floored = es.eigenvalues().cwiseMax(kEigenFloor);
  shape = es.eigenvectors() * floored.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

LinearObjective decompose_objective(const FermionOperator& h, const ObservableBasis& basis, int particles) {
  if (h.modes() != basis.modes()) throw DimensionMismatch("operator and observable basis have different d");
  if (particles < 2 || particles > h.modes()) throw InvalidArgument("decompose_objective needs 2 <= N <= d");
  if (!h.is_hermitian(1e-10)) throw NonHermitianError("objective operator is not Hermitian");
  for (const auto& [m, c] : h.terms()) {
    if (m.degree() != 0 && (m.creators.size() != 2 || m.annihilators.size() != 2))
      throw InvalidArgument("objective must be in two-body normal form");
  }
  const double constant = h.constant_term().real();
  const SlaterBasis& pairs = basis.pairs().slater();
  CMatrix pair = operator_matrix(h, pairs);
  pair -= constant * CMatrix::Identity(pair.rows(), pair.cols());
  const RVector vec = hermitian_to_real(pair);

  // {offset, D_S} is the dual basis of {I, S} in the isometric vectorization.
  const RVector coeff = basis.synthesis().transpose() * vec;
  const double identity_coeff = basis.offset().dot(vec);
  const RVector rebuilt = basis.analysis().transpose() * coeff +
                          identity_coeff * hermitian_to_real(CMatrix::Identity(pair.rows(), pair.cols()));
  const double residual = (rebuilt - vec).cwiseAbs().maxCoeff();
  if (residual > kDecompositionResidual)
    throw NumericalError("objective is outside the span of the observables (residual " + format_double(residual) + ")");

  // tr(sigma H) = sum h_KI <a_K^dag a_I> + constant and <a_K^dag a_I> = rho[I][K] / c_N.
  const double c = pair_normalization(particles);
  return LinearObjective{coeff / c, identity_coeff / c + constant};
}

EllipsoidState EllipsoidState::ball(Eigen::Index dimension, double radius) {
  EllipsoidState e;
  e.center = RVector::Zero(dimension);
  e.shape = radius * radius * RMatrix::Identity(dimension, dimension);
  e.log_volume = static_cast<double>(dimension) * std::log(radius);
  return e;
}

MinimizationResult minimize_over_K(const LinearObjective& objective, int particles, int modes, double eps,
                                   const EllipsoidOptions& options) {
  const RepresentabilityOracle oracle(modes, particles, options.sector_cap);
  const DensityImage& full = oracle.image();
  const auto l = full.dimension();
  if (objective.gamma.size() != l) throw DimensionMismatch("objective length differs from l");
  const double gamma_l1 = objective.gamma.lpNorm<1>();
  const double gamma_l2 = objective.gamma.norm();
  if (eps <= 0.0) eps = 1e-2 * gamma_l1;

  MinimizationResult result;
  result.eps = eps;
  result.argmin = ExpectationVector{modes, particles, RVector::Zero(l)};

  if (gamma_l2 == 0.0) {
    const auto dim = full.sector_dimension();
    const CMatrix mixed = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    result.value = objective.constant;
    result.lower_bound = objective.constant;
    result.witness = mixed;
    result.argmin.values = full.image(mixed);
    result.converged = true;
    return result;
  }

  // min over K of gamma.alpha equals the minimum over the projection of K onto
  // the coordinates where gamma is nonzero; that projection is again a density image.
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < l; ++k)
    if (!options.restrict_to_support || objective.gamma(k) != 0.0) support.push_back(k);
  const auto all_ops = sector_observables(modes, particles);
  auto ops = std::make_shared<SectorObservables>();
  RVector gamma(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    ops->push_back((*all_ops)[static_cast<std::size_t>(support[k])]);
    gamma(static_cast<Eigen::Index>(k)) = objective.gamma(support[k]);
  }
  const DensityImage image(full.basis(), ops, pair_normalization(particles));
  const auto k = image.dimension();
  result.dimension = k;

  const double tol = options.oracle_tolerance > 0.0 ? options.oracle_tolerance
                                                    : std::max(1e-6, std::min(1e-3, 0.25 * eps / gamma_l2));
  const double n = static_cast<double>(k);
  const double radius = std::sqrt(n);
  const double inner = std::max(oracle.observables().inner_radius(), 1e-12);
  result.budget = options.max_iterations > 0
                      ? options.max_iterations
                      : static_cast<long>(std::ceil(2.0 * (n + 1.0) * n *
                                                    std::log(std::max(radius * gamma_l2 / (inner * eps), 2.0))));

  ProjectionOptions popts;
  popts.tolerance = tol;
  popts.max_iterations = options.oracle_max_iterations;
  popts.stop_on_separation = true;

  EllipsoidState e = EllipsoidState::ball(k, radius);
  double best = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  CMatrix warm;
  double slack = tol;

  result.worst_volume_step = -std::numeric_limits<double>::infinity();
  for (long it = 0; it < result.budget; ++it) {
    const ProjectionResult proj = image.project(e.center, popts, warm.size() ? &warm : nullptr);
    warm = proj.witness;
    // The projection is always a point of the set, so its value is feasible.
    const double value = gamma.dot(proj.nearest) + objective.constant;
    if (value < best) {
      best = value;
      result.witness = proj.witness;
    }

    RVector a;
    double rhs = 0.0;
    CutType cut = CutType::kFeasible;
    if (proj.lower_bound > 0.0 && proj.distance > tol) {
      cut = CutType::kInfeasible;
      a = proj.certificate_normal;
      rhs = proj.certificate_offset;
    } else {
      slack = std::max(slack, proj.distance);
      a = gamma;
      rhs = std::min(gamma.dot(e.center), best - objective.constant);
    }

    RVector pa = e.shape * a;
    double apa = a.dot(pa);
    if (!(apa > 0.0)) {
      repair_shape(e.shape);
      pa = e.shape * a;
      apa = a.dot(pa);
      if (!(apa > 0.0)) throw NumericalError("ellipsoid shape lost positive definiteness");
    }
    const double width = std::sqrt(apa);

    // Lower envelope: the set intersected with {f <= best} stays inside E.
    const RVector pg = e.shape * gamma;
    const double ell_lb = gamma.dot(e.center) - std::sqrt(std::max(0.0, gamma.dot(pg))) + objective.constant;
    // An objective cut at a center at distance `slack` from the set can only
    // remove the minimizer when best is already within gamma_l2 * slack of it.
    lower = std::max(lower, std::min(ell_lb, best - gamma_l2 * slack));
    result.iterations = it + 1;
    if (options.record_trace)
      result.trace.push_back(TraceRow{static_cast<int>(it), e.center.norm(), e.log_volume, cut, best});
    if (best - lower <= eps) {
      result.converged = true;
      break;
    }

    double alpha = (a.dot(e.center) - rhs) / width;
    if (alpha >= 1.0) {
      // The halfspace misses E: nothing below `best` is left.
      lower = std::max(lower, best - gamma_l2 * slack);
      result.converged = best - lower <= eps;
      if (cut == CutType::kFeasible) break;
      alpha = 1.0 - 1e-9;
    }
    alpha = std::max(alpha, 0.0);

    const double tau = (1.0 + n * alpha) / (n + 1.0);
    double step = 0.0;
    if (k == 1) {
      // An interval: keep the part of it on the feasible side of the cut.
      const double shrink = 0.5 * (1.0 - alpha);
      e.center -= (tau / width) * pa;
      e.shape *= shrink * shrink;
      step = std::log(shrink);
    } else {
      const double sigma = 2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha));
      const double delta = n * n * (1.0 - alpha * alpha) / (n * n - 1.0);
      e.center -= (tau / width) * pa;
      e.shape = delta * (e.shape - (sigma / apa) * (pa * pa.transpose()));
      step = 0.5 * (n * std::log(delta) + std::log1p(-sigma));
    }
    e.log_volume += step;
    result.worst_volume_step = std::max(result.worst_volume_step, step);
    ++e.iteration;
    if (e.iteration % kShapeCheckPeriod == 0) repair_shape(e.shape);
  }

  if (std::isinf(result.worst_volume_step)) result.worst_volume_step = 0.0;
  result.argmin.values = full.image(result.witness);
  result.value = objective.evaluate(result.argmin.values);
  result.lower_bound = lower;
  return result;
}

std::string format_trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iter,center_norm,volume_log,cut_type,best_value\n";
  for (const TraceRow& r : trace) {
    out << r.iteration << ',' << format_double(r.center_norm) << ',' << format_double(r.volume_log) << ','
        << (r.cut == CutType::kFeasible ? "FEAS" : "INFEAS") << ',' << format_double(r.best_value) << '\n';
  }
  return out.str();
}

OracleEnergy ground_energy_via_oracle(const SpinHamiltonian& h, double eps, const EllipsoidOptions& options) {
  SpinHamiltonian padded(std::max(h.qubits(), 2));
  for (const SpinTerm& t : h.terms()) padded.add_term(t.coefficient, t.pauli);

  const FermionImage image = spin_to_fermion(padded);
  OracleEnergy out;
  out.modes = image.map.modes();
  out.particles = padded.qubits();
  const FermionOperator two_body = two_body_normal_form(image.op, out.particles);
  out.objective = decompose_objective(two_body, *observable_basis(out.modes), out.particles);
  out.details = minimize_over_K(out.objective, out.particles, out.modes, eps, options);
  out.energy = out.details.value;
  out.lower_bound = out.details.lower_bound;
  return out;
}

}  // namespace nrep
