// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nrep/error.hpp"
#include "nrep/io.hpp"
#include "nrep/random.hpp"

namespace nrep {

namespace {

constexpr int kLipschitzIterations = 60;
constexpr std::uint64_t kLipschitzSeed = 0x5eed5eedULL;

}  // namespace

DensityImage::DensityImage(BasisPtr basis, std::shared_ptr<const SectorObservables> ops, double scale, RMatrix metric)
    : basis_(std::move(basis)), ops_(std::move(ops)), scale_(scale), metric_(std::move(metric)) {
  if (!basis_ || !ops_) throw InvalidArgument("DensityImage needs a basis and observables");
  const Eigen::Index l = dimension();
  if (metric_.size() != 0 && (metric_.rows() != l || metric_.cols() != l))
    throw DimensionMismatch("metric does not match the number of observables");

  // Largest eigenvalue of sigma -> A^*(M A(sigma)) on Hermitian matrices.
  Rng rng(kLipschitzSeed);
  CMatrix h = random_hermitian_unit_trace(sector_dimension(), rng);
  h /= h.norm();
  double estimate = 0.0;
  for (int it = 0; it < kLipschitzIterations; ++it) {
    CMatrix next = adjoint(metric_apply(image(h)));
    next = 0.5 * (next + next.adjoint());
    const double n = next.norm();
    if (n == 0.0) break;
    estimate = n;
    h = next / n;
  }
  lipschitz_ = std::max(estimate * 1.05, 1e-12);
}

RVector DensityImage::image(const CMatrix& sigma) const {
  RVector out(dimension());
  for (Eigen::Index k = 0; k < out.size(); ++k)
    out(k) = scale_ * (*ops_)[static_cast<std::size_t>(k)].trace_product(sigma).real();
  return out;
}

RVector DensityImage::image_of_vector(const CVector& v) const {
  RVector out(dimension());
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    Complex acc{};
    for (const MatrixEntry& e : (*ops_)[static_cast<std::size_t>(k)].entries) acc += std::conj(v(e.row)) * e.value * v(e.col);
    out(k) = scale_ * acc.real();
  }
  return out;
}

CMatrix DensityImage::adjoint(const RVector& g) const {
  const Eigen::Index n = sector_dimension();
  CMatrix out = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (g(k) == 0.0) continue;
    (*ops_)[static_cast<std::size_t>(k)].add_to(out, scale_ * g(k));
  }
  return out;
}

RVector DensityImage::metric_apply(const RVector& v) const {
  if (metric_.size() == 0) return v;
  return metric_ * v;
}

double DensityImage::norm(const RVector& v) const { return std::sqrt(std::max(0.0, v.dot(metric_apply(v)))); }

double DensityImage::support(const RVector& n) const {
  const CMatrix g = adjoint(n);
  return hermitian_eigenvalues(0.5 * (g + g.adjoint())).maxCoeff();
}

ProjectionResult DensityImage::project(const RVector& target, const ProjectionOptions& options,
                                       const CMatrix* warm_start) const {
  if (target.size() != dimension()) throw DimensionMismatch("projection target has the wrong length");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("projection tolerance must be positive");
  const Eigen::Index n = sector_dimension();

  CMatrix sigma;
  if (warm_start != nullptr && warm_start->rows() == n && warm_start->cols() == n) {
    sigma = *warm_start;
  } else {
    sigma = CMatrix::Identity(n, n) / static_cast<double>(n);
  }
  RVector x = image(sigma);

  ProjectionResult result;
  result.lower_bound = -std::numeric_limits<double>::infinity();
  const double step = 1.0 / lipschitz_;
  CVector previous_vector;
  // Momentum state for the accelerated candidate; reset whenever another step is taken.
  CMatrix sigma_prev = sigma;
  RVector x_prev = x;
  double momentum = 1.0;

  auto finish = [&](int iterations) {
    result.iterations = iterations;
    result.nearest = x;
    result.witness = sigma;
    result.distance = norm(x - target);
    result.lower_bound = std::max(result.lower_bound, 0.0);
    result.converged = result.distance <= options.tolerance ||
                       result.distance - result.lower_bound <= options.tolerance;
    return result;
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    const RVector r = x - target;
    const RVector g = metric_apply(r);
    const double delta = std::sqrt(std::max(0.0, r.dot(g)));
    if (options.record_history) result.distance_history.push_back(delta);
    if (delta <= options.tolerance || (options.accept_below > 0.0 && delta <= options.accept_below)) return finish(it);

    CMatrix grad = adjoint(g);
    grad = 0.5 * (grad + grad.adjoint());
    const Eigenpair low = lowest_eigenpair(grad, options.eigen_method, previous_vector.size() == n ? &previous_vector : nullptr);
    previous_vector = low.vector;
    const double gx = g.dot(x);
    const double gap = std::max(0.0, gx - low.value);
    result.gap = gap;
    if (options.record_history) result.gap_history.push_back(gap);

    const double bound = delta - gap / delta;
    if (bound > result.lower_bound) {
      result.lower_bound = bound;
      const double gnorm = g.norm();
      if (gnorm > 0.0) {
        result.certificate_normal = -g / gnorm;
        result.certificate_offset = -low.value / gnorm;
      }
    }
    if (delta - result.lower_bound <= options.tolerance) return finish(it);
    if (options.stop_on_separation && result.lower_bound > 0.0) return finish(it);
    if (options.reject_above > 0.0 && result.lower_bound >= options.reject_above) return finish(it);

    // Frank-Wolfe candidate toward the extreme point v v^dag.
    const RVector s = image_of_vector(low.vector);
    const RVector d_fw = s - x;
    const double curv_fw = d_fw.dot(metric_apply(d_fw));
    const double t_fw = curv_fw > 0.0 ? std::clamp(gap / curv_fw, 0.0, 1.0) : 0.0;
    const double gain_fw = t_fw * gap - 0.5 * t_fw * t_fw * curv_fw;

    // Accelerated projected-gradient candidate from the extrapolated point.
    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double extrapolate = (momentum - 1.0) / momentum_next;
    const CMatrix y = sigma + extrapolate * (sigma - sigma_prev);
    const RVector x_y = x + extrapolate * (x - x_prev);
    CMatrix grad_y = adjoint(metric_apply(x_y - target));
    grad_y = 0.5 * (grad_y + grad_y.adjoint());
    const CMatrix sigma_acc = project_to_density(y - step * grad_y);
    const RVector x_acc = image(sigma_acc);
    const double dist_acc = norm(x_acc - target);
    const double gain_acc = 0.5 * (delta * delta - dist_acc * dist_acc);

    sigma_prev = sigma;
    x_prev = x;
    if (gain_acc > 0.0 && gain_acc >= gain_fw) {
      sigma = sigma_acc;
      x = x_acc;
      momentum = momentum_next;
      continue;
    }
    momentum = 1.0;

    // Projected-gradient candidate with exact line search.
    const CMatrix sigma_pg = project_to_density(sigma - step * grad);
    const RVector x_pg = image(sigma_pg);
    const RVector d_pg = x_pg - x;
    const double slope_pg = -g.dot(d_pg);
    const double curv_pg = d_pg.dot(metric_apply(d_pg));
    const double t_pg = curv_pg > 0.0 ? std::clamp(slope_pg / curv_pg, 0.0, 1.0) : 0.0;
    const double gain_pg = t_pg * slope_pg - 0.5 * t_pg * t_pg * curv_pg;

    if (gain_pg >= gain_fw && gain_pg > 0.0) {
      sigma = (1.0 - t_pg) * sigma + t_pg * sigma_pg;
      x += t_pg * d_pg;
    } else if (gain_fw > 0.0) {
      sigma = (1.0 - t_fw) * sigma;
      sigma.noalias() += t_fw * (low.vector * low.vector.adjoint());
      x += t_fw * d_fw;
    } else {
      return finish(it + 1);
    }
  }
  return finish(options.max_iterations);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kYes: return "YES";
    case Verdict::kNo: return "NO";
    default: return "BORDERLINE";
  }
}

RepresentabilityOracle::RepresentabilityOracle(int modes, int particles, std::size_t sector_cap)
    : modes_(modes), particles_(particles) {
  if (particles < 2 || particles > modes) throw InvalidArgument("oracle needs 2 <= N <= d");
  basis_ = make_basis(modes, particles, sector_cap);
  observables_ = observable_basis(modes);
  ops_ = sector_observables(modes, particles);
  euclidean_ = std::make_unique<DensityImage>(basis_, ops_, pair_normalization(particles));
}

const DensityImage& RepresentabilityOracle::image(Metric metric) const {
  if (metric == Metric::kEuclidean) return *euclidean_;
  if (!hilbert_schmidt_)
    hilbert_schmidt_ =
        std::make_unique<DensityImage>(basis_, ops_, pair_normalization(particles_), observables_->hs_metric());
  return *hilbert_schmidt_;
}

ExpectationVector RepresentabilityOracle::contraction_expectations(const CMatrix& sigma) const {
  return ExpectationVector{modes_, particles_, euclidean_->image(sigma)};
}

ProjectionResult RepresentabilityOracle::project(const RVector& target, const ProjectionOptions& options,
                                                 Metric metric, const CMatrix* warm_start) const {
  return image(metric).project(target, options, warm_start);
}

Decision RepresentabilityOracle::decide(const TwoRDM& rho, double beta, const ProjectionOptions& options) const {
  if (rho.modes != modes_) throw DimensionMismatch("2-RDM mode count does not match the oracle");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be a finite non-negative number");
  rho.validate();

  const double per_alpha = observables_->trace_per_alpha();
  Decision decision;
  decision.beta = beta;
  // ||rho_K - rho||_1 <= per_alpha * ||alpha_K - alpha||_2: a distance below yes_threshold
  // keeps the trace distance below beta / 4, and the NO case forces a distance of at
  // least beta / alpha_per_trace >= no_threshold.
  decision.yes_threshold = beta > 0.0 ? 0.25 * beta / per_alpha : options.tolerance;
  decision.no_threshold = beta > 0.0 ? 0.5 * beta / per_alpha : std::numeric_limits<double>::min();

  if (coleman_precheck(rho, particles_) == PrecheckResult::kFail) decision.coleman_failed = true;

  if (particles_ == 2) {
    // Every pair density is the 2-RDM of itself.
    decision.verdict = decision.coleman_failed ? Verdict::kNo : Verdict::kYes;
    return decision;
  }

  const RVector target = observables_->coordinates(rho.matrix);
  ProjectionOptions opts = options;
  opts.tolerance = std::min(options.tolerance, 0.5 * decision.yes_threshold);
  opts.accept_below = decision.yes_threshold;
  opts.reject_above = decision.no_threshold;
  const ProjectionResult proj = euclidean_->project(target, opts);
  decision.distance = proj.distance;
  decision.lower_bound = proj.lower_bound;
  decision.iterations = proj.iterations;

  if (decision.coleman_failed || proj.lower_bound >= decision.no_threshold) {
    decision.verdict = Verdict::kNo;
  } else if (proj.distance <= decision.yes_threshold) {
    decision.verdict = Verdict::kYes;
  } else {
    decision.verdict = Verdict::kBorderline;
  }
  return decision;
}

SeparatingHyperplane RepresentabilityOracle::separating_hyperplane(const RVector& target, double tol,
                                                                   const ProjectionOptions& options) const {
  ProjectionOptions opts = options;
  opts.tolerance = tol;
  const ProjectionResult proj = euclidean_->project(target, opts);
  if (proj.distance <= 2.0 * tol)
    throw PointInsideError("target lies within 2*tol of K (distance " + format_double(proj.distance) + ")");
  SeparatingHyperplane h;
  h.normal = (target - proj.nearest) / proj.distance;
  h.offset = std::max(h.normal.dot(proj.nearest) + tol, euclidean_->support(h.normal));
  h.margin = h.normal.dot(target) - h.offset;
  return h;
}

ExpectationVector contraction_expectations(const NSectorDensity& sigma) { return sector_expectation_vector(sigma); }

ProjectionResult project_onto_K(const ExpectationVector& target, int particles, int modes, double tol,
                                int max_iterations) {
  const RepresentabilityOracle oracle(modes, particles);
  ProjectionOptions options;
  options.tolerance = tol;
  options.max_iterations = max_iterations;
  return oracle.project(target.values, options);
}

Decision is_representable(const RepresentabilityInstance& instance) {
  if (instance.modes != instance.rho.modes) throw DimensionMismatch("instance d does not match the 2-RDM");
  const RepresentabilityOracle oracle(instance.modes, instance.particles);
  return oracle.decide(instance.rho, instance.beta);
}

SeparatingHyperplane separating_hyperplane(const ExpectationVector& target, int particles, int modes, double tol) {
  const RepresentabilityOracle oracle(modes, particles);
  return oracle.separating_hyperplane(target.values, tol);
}

OneRDM contracted_one_rdm(const TwoRDM& rho, int particles) {
  const int d = rho.modes;
  const PairBasis pairs(d);
  if (rho.matrix.rows() != static_cast<Eigen::Index>(pairs.size())) throw DimensionMismatch("2-RDM has the wrong size");
  // a_i^dag a_j^dag a_j a_k = s(i,j) s(k,j) a_{ij}^dag a_{kj} with s(p,q) = +1 if p < q, so
  // gamma[i][k] = (N/2) sum_j s(i,j) s(k,j) rho[{k,j}][{i,j}].
  auto sgn = [](int p, int q) { return p < q ? 1.0 : -1.0; };
  OneRDM out;
  out.modes = d;
  out.particles = particles;
  out.matrix = CMatrix::Zero(d, d);
  const double scale = 0.5 * particles;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      Complex acc{};
      for (int j = 0; j < d; ++j) {
        if (j == i || j == k) continue;
        const auto row = static_cast<Eigen::Index>(pairs.index(k, j));
        const auto col = static_cast<Eigen::Index>(pairs.index(i, j));
        acc += sgn(i, j) * sgn(k, j) * rho.matrix(row, col);
      }
      out.matrix(i, k) = scale * acc;
    }
  }
  return out;
}

PrecheckResult coleman_precheck(const TwoRDM& rho, int particles) {
  return coleman_check(contracted_one_rdm(rho, particles)) ? PrecheckResult::kPass : PrecheckResult::kFail;
}

std::string format_verdict(const Decision& decision) {
  std::ostringstream out;
  out << "verdict=" << verdict_name(decision.verdict) << " distance=" << format_double(decision.distance)
      << " beta=" << format_double(decision.beta) << " iters=" << decision.iterations;
  return out.str();
}

}  // namespace nrep
