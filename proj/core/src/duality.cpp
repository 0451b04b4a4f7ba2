// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/duality.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "nrep/error.hpp"
#include "nrep/io.hpp"
#include "nrep/random.hpp"

namespace nrep {

namespace {

constexpr double kMapResidualLimit = 1e-8;
constexpr int kValidationStates = 50;
constexpr std::uint64_t kValidationSeed = 20260417;

double hole_normalization(int modes, int particles) {
  const int h = modes - particles;
  if (h < 2) throw InvalidArgument("hole coordinates need at least two empty modes");
  return 2.0 / (static_cast<double>(h) * static_cast<double>(h - 1));
}

}  // namespace

FermionOperator hole_observable(const ObservableBasis& basis, std::size_t k) {
  const Observable& o = basis.observable(k);
  const int d = basis.modes();
  const auto [i1, i2] = basis.pairs().pair(o.first);
  const auto [j1, j2] = basis.pairs().pair(o.second);
  // a_I a_J^dag = a_{i2} a_{i1} a_{j1}^dag a_{j2}^dag
  const Ladder ij[4] = {{i2, false}, {i1, false}, {j1, true}, {j2, true}};
  const Ladder ji[4] = {{j2, false}, {j1, false}, {i1, true}, {i2, true}};
  switch (o.kind) {
    case ObservableKind::kX:
      return FermionOperator::from_word(d, ij) + FermionOperator::from_word(d, ji);
    case ObservableKind::kY:
      return FermionOperator::from_word(d, ij, -kI) + FermionOperator::from_word(d, ji, kI);
    default:
      return FermionOperator::from_word(d, ij);
  }
}

NSectorDensity slater_complement(const NSectorDensity& sigma2) {
  if (!sigma2.basis) throw InvalidArgument("slater_complement: density has no basis");
  const SlaterBasis& in = *sigma2.basis;
  if (in.particles() != 2) throw InvalidArgument("slater_complement expects a 2-particle density");
  const int d = in.modes();
  if (d < 4) throw InvalidArgument("slater_complement needs d >= 4");
  auto out_basis = make_basis(d, d - 2);
  const Occupation full = (Occupation{1} << d) - 1;
  const auto m = static_cast<Eigen::Index>(in.size());
  RMatrix u = RMatrix::Zero(m, m);
  for (std::size_t k = 0; k < in.size(); ++k) {
    const auto occ = occupied_modes(in.state(k), d);
    const double phase = ((occ[0] + occ[1]) % 2) ? -1.0 : 1.0;
    u(static_cast<Eigen::Index>(out_basis->index(full ^ in.state(k))), static_cast<Eigen::Index>(k)) = phase;
  }
  const CMatrix uc = u.cast<Complex>();
  return NSectorDensity{std::move(out_basis), uc * sigma2.matrix * uc.transpose()};
}

std::shared_ptr<const SectorObservables> hole_sector_observables(int modes, int particles) {
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
    ops->push_back(sparse_operator_matrix(hole_observable(*basis, k), sector, sector));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(std::make_pair(modes, particles), std::move(ops)).first->second;
}

ExpectationVector hole_expectation_vector(const NSectorDensity& tau) {
  if (!tau.basis) throw InvalidArgument("hole_expectation_vector: density has no basis");
  const int d = tau.basis->modes();
  const int n = tau.basis->particles();
  const double c = hole_normalization(d, n);
  const auto ops = hole_sector_observables(d, n);
  ExpectationVector out{d, n, RVector(static_cast<Eigen::Index>(ops->size()))};
  for (std::size_t k = 0; k < ops->size(); ++k)
    out.values(static_cast<Eigen::Index>(k)) = c * (*ops)[k].trace_product(tau.matrix).real();
  return out;
}

CoordinateMap CoordinateMap::inverse() const {
  Eigen::FullPivLU<RMatrix> lu(matrix);
  if (!lu.isInvertible()) throw RankDeficiencyError("coordinate map is singular");
  CoordinateMap out;
  out.matrix = lu.inverse();
  out.offset = -out.matrix * offset;
  return out;
}

namespace {

// Pure states |I>, (|I>+|J>)/sqrt2, (|I>+i|J>)/sqrt2 span the Hermitian matrices on the sector.
std::vector<NSectorDensity> spanning_densities(const BasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  std::vector<NSectorDensity> out;
  out.reserve(static_cast<std::size_t>(n * n));
  const double h = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    CVector v = CVector::Zero(n);
    v(i) = 1.0;
    out.push_back(NSectorDensity{basis, v * v.adjoint()});
    for (Eigen::Index j = i + 1; j < n; ++j) {
      CVector re = CVector::Zero(n);
      re(i) = h;
      re(j) = h;
      out.push_back(NSectorDensity{basis, re * re.adjoint()});
      CVector im = CVector::Zero(n);
      im(i) = h;
      im(j) = Complex(0.0, h);
      out.push_back(NSectorDensity{basis, im * im.adjoint()});
    }
  }
  return out;
}

enum class Direction { kHoleToParticle, kParticleToHole };

CoordinateMap build_map(int modes, Direction direction) {
  if (modes < 5) throw InvalidArgument("particle-hole maps need d >= 5");
  const auto basis = make_basis(modes, modes - 2);
  const std::size_t l = observable_count(modes);
  const auto le = static_cast<Eigen::Index>(l);

  auto coordinates = [&](const NSectorDensity& tau) {
    RVector particle = sector_expectation_vector(tau).values;
    RVector hole = hole_expectation_vector(tau).values;
    return direction == Direction::kHoleToParticle ? std::make_pair(hole, particle) : std::make_pair(particle, hole);
  };

  const std::vector<NSectorDensity> states = spanning_densities(basis);
  const auto rows = static_cast<Eigen::Index>(states.size());
  RMatrix design(rows, le + 1);
  RMatrix target(rows, le);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto [x, y] = coordinates(states[static_cast<std::size_t>(r)]);
    design.row(r).head(le) = x.transpose();
    design(r, le) = 1.0;
    target.row(r) = y.transpose();
  }
  Eigen::ColPivHouseholderQR<RMatrix> qr(design);
  if (qr.rank() != le + 1)
    throw RankDeficiencyError("spanning states do not determine the particle-hole map (rank " +
                              std::to_string(qr.rank()) + " < " + std::to_string(le + 1) + ")");
  const RMatrix solution = qr.solve(target);

  CoordinateMap map;
  map.matrix = solution.topRows(le).transpose();
  map.offset = solution.row(le).transpose();

  Rng rng(kValidationSeed + static_cast<std::uint64_t>(modes));
  double worst = 0.0;
  for (int t = 0; t < kValidationStates; ++t) {
    const NSectorDensity tau{basis, random_density_matrix(static_cast<Eigen::Index>(basis->size()), rng)};
    const auto [x, y] = coordinates(tau);
    worst = std::max(worst, (map.apply(x) - y).cwiseAbs().maxCoeff());
  }
  map.validation_residual = worst;
  if (worst > kMapResidualLimit)
    throw NumericalError("particle-hole map residual " + format_double(worst) + " exceeds 1e-8");
  return map;
}

}  // namespace

CoordinateMap build_map_A(int modes) { return build_map(modes, Direction::kHoleToParticle); }

CoordinateMap build_map_B(int modes) { return build_map(modes, Direction::kParticleToHole); }

InnerBallCertificate inner_ball_certificate(int modes) {
  const CoordinateMap a = build_map_A(modes);
  const CoordinateMap b = build_map_B(modes);
  Eigen::JacobiSVD<RMatrix> svd(a.matrix);
  const RVector& sv = svd.singularValues();
  const auto basis = observable_basis(modes);
  const auto m = static_cast<Eigen::Index>(basis->pair_count());

  InnerBallCertificate cert;
  cert.pair_radius = basis->inner_radius();
  cert.sigma_min = sv(sv.size() - 1);
  cert.sigma_max = sv(0);
  cert.radius = cert.pair_radius * cert.sigma_min;
  cert.frobenius_b_sq = b.matrix.squaredNorm();
  cert.center = basis->coordinates(CMatrix::Identity(m, m) / static_cast<double>(m));
  return cert;
}

std::string format_coordinate_map(const CoordinateMap& map) {
  std::ostringstream out;
  out << "coordinate-map rows=" << map.matrix.rows() << " cols=" << map.matrix.cols() << '\n';
  for (Eigen::Index r = 0; r < map.matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < map.matrix.cols(); ++c) out << (c ? " " : "") << format_double(map.matrix(r, c));
    out << '\n';
  }
  out << "offset\n";
  for (Eigen::Index r = 0; r < map.offset.size(); ++r) out << (r ? " " : "") << format_double(map.offset(r));
  out << '\n';
  return out.str();
}

}  // namespace nrep
