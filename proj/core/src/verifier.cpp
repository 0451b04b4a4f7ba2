// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "nrep/error.hpp"
#include "nrep/io.hpp"

namespace nrep {

namespace {

// Outcomes of one block: the number check failed, or it passed and the ancilla read 0 or 1.
enum Outcome { kFail = 0, kZero = 1, kOne = 2 };
constexpr int kOutcomes = 3;

CMatrix number_projector(int qubits, int weight) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  CMatrix p = CMatrix::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s)
    if (popcount(static_cast<Occupation>(s)) == weight) p(s, s) = 1.0;
  return p;
}

CMatrix kron(const CMatrix& high, const CMatrix& low) {
  CMatrix out(high.rows() * low.rows(), high.cols() * low.cols());
  for (Eigen::Index i = 0; i < high.rows(); ++i)
    for (Eigen::Index j = 0; j < high.cols(); ++j)
      out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
  return out;
}

// Applies m to the qubits [block * d, (block + 1) * d) of a vector over `total` qubits.
CVector apply_block(const CVector& v, const CMatrix& m, int block, int d) {
  const Eigen::Index local = Eigen::Index{1} << d;
  const Eigen::Index stride = Eigen::Index{1} << (block * d);
  const Eigen::Index span = stride * local;
  CVector out(v.size());
  CVector in_chunk(local);
  for (Eigen::Index high = 0; high < v.size(); high += span) {
    for (Eigen::Index low = 0; low < stride; ++low) {
      for (Eigen::Index k = 0; k < local; ++k) in_chunk(k) = v(high + k * stride + low);
      const CVector r = m * in_chunk;
      for (Eigen::Index k = 0; k < local; ++k) out(high + k * stride + low) = r(k);
    }
  }
  return out;
}

// Draws multinomial counts by sequential binomials.
std::vector<long> multinomial(long n, const std::vector<double>& probs, Rng& rng) {
  std::vector<long> counts(probs.size(), 0);
  double mass = 1.0;
  for (std::size_t k = 0; k < probs.size() && n > 0; ++k) {
    if (k + 1 == probs.size()) {
      counts[k] = n;
      break;
    }
    const double p = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<long> draw(n, p);
    counts[k] = draw(rng);
    n -= counts[k];
    mass -= probs[k];
  }
  return counts;
}

// Upper standard-normal quantile: z with P(Z > z) = tail.
double normal_upper_quantile(double tail) {
  double lo = 0.0;
  double hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Povm {
  std::vector<std::array<CMatrix, kOutcomes>> elements;  // per observable
  std::vector<MeasurementGadget> gadgets;
};

Povm build_povm(int modes, int particles) {
  const auto basis = observable_basis(modes);
  const CMatrix pass = number_projector(modes, particles);
  const CMatrix fail = CMatrix::Identity(pass.rows(), pass.cols()) - pass;
  Povm povm;
  povm.elements.reserve(basis->size());
  povm.gadgets.reserve(basis->size());
  for (std::size_t k = 0; k < basis->size(); ++k) {
    povm.gadgets.emplace_back(jordan_wigner(basis->fermion_operator(k)));
    const CMatrix one = pass * povm.gadgets.back().rescaled_matrix() * pass;
    povm.elements.push_back({fail, pass - one, one});
  }
  return povm;
}

// Exact joint outcome distribution of one unit whose blocks measure `observables`.
std::vector<double> unit_distribution(const WitnessBlocks& w, const Povm& povm, const std::vector<std::size_t>& observables) {
  const int g = w.group_size;
  std::size_t total = 1;
  for (int b = 0; b < g; ++b) total *= kOutcomes;
  std::vector<double> probs(total, 0.0);
  if (g == 1) {
    for (int o = 0; o < kOutcomes; ++o)
      probs[static_cast<std::size_t>(o)] =
          std::max(0.0, (povm.elements[observables[0]][static_cast<std::size_t>(o)] * w.block_density).trace().real());
  } else {
    // Depth-first over blocks; outcome index = sum_b o_b * 3^b.
    struct Frame {
      CVector v;
      int block;
      std::size_t index;
      std::size_t weight;
    };
    std::vector<Frame> stack;
    stack.push_back({w.unit_state, 0, 0, 1});
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.block == g) {
        probs[f.index] = std::max(0.0, w.unit_state.dot(f.v).real());
        continue;
      }
      const auto& e = povm.elements[observables[static_cast<std::size_t>(f.block)]];
      for (int o = 0; o < kOutcomes; ++o)
        stack.push_back({apply_block(f.v, e[static_cast<std::size_t>(o)], f.block, w.modes), f.block + 1,
                         f.index + static_cast<std::size_t>(o) * f.weight, f.weight * kOutcomes});
    }
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  if (sum <= 0.0) throw NumericalError("witness unit has zero norm");
  for (double& p : probs) p /= sum;
  return probs;
}

}  // namespace

CVector encode_state(const NSectorState& state) {
  state.validate(false);
  CVector v = CVector::Zero(Eigen::Index{1} << state.basis->modes());
  for (std::size_t k = 0; k < state.basis->size(); ++k)
    v(static_cast<Eigen::Index>(state.basis->state(k))) = state.amplitudes(static_cast<Eigen::Index>(k));
  return v;
}

CMatrix encode_density(const NSectorDensity& sigma) {
  if (!sigma.basis) throw InvalidArgument("density has no basis");
  const int d = sigma.basis->modes();
  if (d > kMaxFockModes) throw CapacityError("block of " + std::to_string(d) + " qubits exceeds the simulation cap");
  CMatrix m = CMatrix::Zero(Eigen::Index{1} << d, Eigen::Index{1} << d);
  const auto& states = sigma.basis->states();
  for (std::size_t r = 0; r < states.size(); ++r)
    for (std::size_t c = 0; c < states.size(); ++c)
      m(static_cast<Eigen::Index>(states[r]), static_cast<Eigen::Index>(states[c])) =
          sigma.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return m;
}

CMatrix WitnessBlocks::unit_density() const {
  if (group_size == 1) return block_density;
  return unit_state * unit_state.adjoint();
}

CMatrix WitnessBlocks::block_marginal() const {
  if (group_size == 1) return block_density;
  const Eigen::Index local = Eigen::Index{1} << modes;
  CMatrix out = CMatrix::Zero(local, local);
  for (int b = 0; b < group_size; ++b) {
    const Eigen::Index stride = Eigen::Index{1} << (b * modes);
    const Eigen::Index span = stride * local;
    for (Eigen::Index high = 0; high < unit_state.size(); high += span)
      for (Eigen::Index low = 0; low < stride; ++low)
        for (Eigen::Index i = 0; i < local; ++i)
          for (Eigen::Index j = 0; j < local; ++j)
            out(i, j) += unit_state(high + i * stride + low) * std::conj(unit_state(high + j * stride + low));
  }
  return out / static_cast<double>(group_size);
}

WitnessBlocks honest_witness(const NSectorDensity& sigma, long blocks) {
  sigma.validate();
  return product_witness(encode_density(sigma), sigma.basis->modes(), blocks);
}

WitnessBlocks product_witness(const CMatrix& block_density, int modes, long blocks) {
  if (blocks < 1) throw InvalidArgument("a witness needs at least one block");
  if (modes < 1 || modes > kMaxFockModes) throw CapacityError("block size exceeds the simulation cap");
  const Eigen::Index dim = Eigen::Index{1} << modes;
  if (block_density.rows() != dim || block_density.cols() != dim)
    throw DimensionMismatch("block density must be 2^d x 2^d");
  WitnessBlocks w;
  w.modes = modes;
  w.blocks = blocks;
  w.block_density = block_density;
  return w;
}

WitnessBlocks entangled_witness(const CVector& unit_state, int modes, int group_size, long blocks, int qubit_cap) {
  if (group_size < 1 || modes < 1) throw InvalidArgument("group size and modes must be positive");
  if (group_size * modes > qubit_cap)
    throw CapacityError("entangled unit of " + std::to_string(group_size * modes) + " qubits exceeds the cap of " +
                        std::to_string(qubit_cap));
  if (unit_state.size() != (Eigen::Index{1} << (group_size * modes)))
    throw DimensionMismatch("unit state length must be 2^(group_size * d)");
  if (blocks < group_size || blocks % group_size != 0)
    throw InvalidArgument("block count must be a positive multiple of the group size");
  const CVector v = unit_state.normalized();
  if (group_size == 1) return product_witness(v * v.adjoint(), modes, blocks);
  WitnessBlocks w;
  w.modes = modes;
  w.blocks = blocks;
  w.group_size = group_size;
  w.unit_state = v;
  return w;
}

CMatrix materialize(const WitnessBlocks& witness, int count, int qubit_cap) {
  if (count < 1 || count > witness.blocks) throw InvalidArgument("block count out of range");
  if (count * witness.modes > qubit_cap) throw CapacityError("materialized state exceeds the qubit cap");
  if (count % witness.group_size != 0) throw InvalidArgument("count must be a multiple of the group size");
  const CMatrix unit = witness.unit_density();
  CMatrix out = unit;
  for (int k = witness.group_size; k < count; k += witness.group_size) out = kron(unit, out);
  return out;
}

std::vector<double> particle_number_distribution(const CVector& state) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(state.size()))));
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  for (Eigen::Index s = 0; s < state.size(); ++s) p[static_cast<std::size_t>(popcount(static_cast<Occupation>(s)))] += std::norm(state(s));
  return p;
}

std::vector<double> particle_number_distribution(const CMatrix& density) {
  const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(density.rows()))));
  std::vector<double> p(static_cast<std::size_t>(n + 1), 0.0);
  for (Eigen::Index s = 0; s < density.rows(); ++s)
    p[static_cast<std::size_t>(popcount(static_cast<Occupation>(s)))] += density(s, s).real();
  return p;
}

NumberMeasurement measure_particle_number(const CVector& state, Rng& rng) {
  const std::vector<double> p = particle_number_distribution(state);
  std::discrete_distribution<int> draw(p.begin(), p.end());
  const int n = draw(rng);
  CVector post = CVector::Zero(state.size());
  for (Eigen::Index s = 0; s < state.size(); ++s)
    if (popcount(static_cast<Occupation>(s)) == n) post(s) = state(s);
  return {n, post.normalized()};
}

MeasurementGadget::MeasurementGadget(const QubitOperator& op) {
  if (!op.is_hermitian(1e-10)) throw NonHermitianError("gadget observable is not Hermitian");
  init(op.matrix());
}

MeasurementGadget::MeasurementGadget(const CMatrix& matrix) {
  if (hermiticity_defect(matrix) > 1e-10) throw NonHermitianError("gadget observable is not Hermitian");
  init(matrix);
}

void MeasurementGadget::init(const CMatrix& matrix) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (matrix + matrix.adjoint()));
  const RVector& ev = es.eigenvalues();
  low_ = ev(0);
  high_ = ev(ev.size() - 1);
  const double s = high_ - low_;
  rescaled_ = s > 0.0 ? RVector(((ev.array() - low_) / s).cwiseMax(0.0).cwiseMin(1.0)) : RVector::Zero(ev.size());
  vectors_ = es.eigenvectors();
}

CMatrix MeasurementGadget::rescaled_matrix() const {
  return vectors_ * rescaled_.cast<Complex>().asDiagonal() * vectors_.adjoint();
}

SampleEstimate sample_observable(const CVector& state, const MeasurementGadget& gadget, long shots, Rng& rng) {
  if (shots < 1) throw InvalidArgument("shots must be positive");
  if (state.size() != gadget.eigenvectors().rows()) throw DimensionMismatch("state and observable sizes differ");
  const CVector amplitudes = gadget.eigenvectors().adjoint() * state.normalized();
  std::vector<double> born(static_cast<std::size_t>(amplitudes.size()));
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) born[static_cast<std::size_t>(i)] = std::norm(amplitudes(i));
  std::discrete_distribution<Eigen::Index> eigen_index(born.begin(), born.end());
  std::uniform_real_distribution<double> ancilla(0.0, 1.0);
  long ones = 0;
  for (long s = 0; s < shots; ++s) {
    const Eigen::Index i = eigen_index(rng);
    if (ancilla(rng) < gadget.rescaled_eigenvalues()(i)) ++ones;
  }
  const double mean = static_cast<double>(ones) / static_cast<double>(shots);
  return {gadget.to_original(mean), gadget.spread() / (2.0 * std::sqrt(static_cast<double>(shots))), shots, ones};
}

SampleEstimate sample_observable(const CVector& state, const QubitOperator& op, long shots, Rng& rng) {
  return sample_observable(state, MeasurementGadget(op), shots, rng);
}

void VerifierConfig::validate() const {
  if (modes < 3) throw InvalidArgument("verifier needs d >= 3");
  if (particles < 2 || particles > modes) throw InvalidArgument("verifier needs 2 <= N <= d");
  if (rho.modes != modes) throw DimensionMismatch("2-RDM mode count differs from d");
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidArgument("threshold must lie in (0, 1)");
  rho.validate();
}

VerifierConfig calibrate(const TwoRDM& rho, int particles, double beta, double confidence, std::uint64_t seed) {
  if (!(beta > 0.0)) throw InvalidArgument("calibration needs beta > 0");
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must lie in (0, 1)");
  const auto basis = observable_basis(rho.modes);
  const double l = static_cast<double>(basis->size());
  VerifierConfig c;
  c.rho = rho;
  c.beta = beta;
  c.particles = particles;
  c.modes = rho.modes;
  c.seed = seed;
  c.confidence = confidence;
  c.threshold = (beta / basis->trace_per_alpha()) / (4.0 * std::sqrt(l));

  double spread = 0.0;
  for (std::size_t k = 0; k < basis->size(); ++k)
    spread = std::max(spread, MeasurementGadget(jordan_wigner(basis->fermion_operator(k))).spread());
  const double sigma_one_shot = 0.5 * pair_normalization(particles) * spread;
  const double z = normal_upper_quantile((1.0 - confidence) / (2.0 * l));
  c.shots = static_cast<long>(std::ceil(std::pow(z * sigma_one_shot / c.threshold, 2.0)));
  return c;
}

long required_blocks(const VerifierConfig& config) {
  return static_cast<long>(observable_count(config.modes)) * config.shots;
}

VerifierOutcome verify(const VerifierConfig& config, const WitnessBlocks& witness, int repetitions) {
  config.validate();
  if (witness.modes != config.modes) throw DimensionMismatch("witness block size differs from d");
  if (repetitions < 1) throw InvalidArgument("repetitions must be positive");
  const std::size_t l = observable_count(config.modes);
  const int g = witness.group_size;
  const long needed = required_blocks(config);
  const long units = (needed + g - 1) / g;
  if (witness.blocks < units * g)
    throw InvalidArgument("witness has " + std::to_string(witness.blocks) + " blocks but the schedule needs " +
                          std::to_string(units * g));

  const Povm povm = build_povm(config.modes, config.particles);
  const RVector target = expectation_vector(config.rho).values;
  const double c_n = pair_normalization(config.particles);

  // Unit u measures observables (u g + j) mod l; units sharing the start index are identical.
  std::vector<long> type_count(l, 0);
  for (long u = 0; u < units; ++u) ++type_count[static_cast<std::size_t>((u * g) % static_cast<long>(l))];
  std::vector<std::vector<std::size_t>> type_observables(l);
  std::vector<std::vector<double>> type_probs(l);
  for (std::size_t s = 0; s < l; ++s) {
    if (type_count[s] == 0) continue;
    for (int j = 0; j < g; ++j) type_observables[s].push_back((s + static_cast<std::size_t>(j)) % l);
    type_probs[s] = unit_distribution(witness, povm, type_observables[s]);
  }

  VerifierOutcome outcome;
  long accepted = 0;
  for (int r = 0; r < repetitions; ++r) {
    VerifierRun run;
    run.seed = derive_seed(config.seed, static_cast<std::uint64_t>(r));
    run.blocks = units * g;
    run.shots = config.shots;
    Rng rng(run.seed);
    std::vector<long> ones(l, 0);
    std::vector<long> valid(l, 0);
    long failures = 0;
    for (std::size_t s = 0; s < l; ++s) {
      if (type_count[s] == 0) continue;
      const std::vector<long> counts = multinomial(type_count[s], type_probs[s], rng);
      for (std::size_t idx = 0; idx < counts.size(); ++idx) {
        if (counts[idx] == 0) continue;
        std::size_t code = idx;
        for (int j = 0; j < g; ++j) {
          const auto o = static_cast<int>(code % kOutcomes);
          code /= kOutcomes;
          const std::size_t k = type_observables[s][static_cast<std::size_t>(j)];
          if (o == kFail) {
            failures += counts[idx];
          } else {
            valid[k] += counts[idx];
            if (o == kOne) ones[k] += counts[idx];
          }
        }
      }
    }
    run.number_check_failed = failures > 0;
    run.estimates = RVector::Zero(static_cast<Eigen::Index>(l));
    for (std::size_t k = 0; k < l; ++k) {
      const double mean = valid[k] > 0 ? static_cast<double>(ones[k]) / static_cast<double>(valid[k]) : 0.0;
      run.estimates(static_cast<Eigen::Index>(k)) = c_n * povm.gadgets[k].to_original(mean);
    }
    run.deviations = (run.estimates - target).cwiseAbs();
    run.max_deviation = run.deviations.maxCoeff();
    run.accepted = !run.number_check_failed && run.max_deviation <= config.threshold;
    if (run.accepted) ++accepted;
    outcome.runs.push_back(std::move(run));
  }
  outcome.acceptance_frequency = static_cast<double>(accepted) / static_cast<double>(repetitions);
  return outcome;
}

AdversaryReport entangled_adversary_test(const VerifierConfig& config, const WitnessBlocks& entangled,
                                         int repetitions) {
  AdversaryReport report;
  report.entangled = verify(config, entangled, repetitions);
  const WitnessBlocks product = product_witness(entangled.block_marginal(), entangled.modes, entangled.blocks);
  report.product_baseline = verify(config, product, repetitions);
  return report;
}

OverlapResult purity_overlap_test(const CMatrix& rho, const CMatrix& sigma, long shots, Rng& rng, double epsilon) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw DimensionMismatch("states differ in size");
  if (shots < 1) throw InvalidArgument("shots must be positive");
  OverlapResult out;
  out.exact = (rho * sigma).trace().real();
  const double p0 = std::clamp(0.5 * (1.0 + out.exact), 0.0, 1.0);
  std::binomial_distribution<long> zeros(shots, p0);
  out.estimate = 2.0 * static_cast<double>(zeros(rng)) / static_cast<double>(shots) - 1.0;
  out.pure_and_equal = out.estimate >= 1.0 - 0.5 * epsilon;
  return out;
}

bool overlap_bound_holds(const CMatrix& rho, const CMatrix& sigma, double tol) {
  const double overlap = (rho * sigma).trace().real();
  const double bound = std::sqrt((rho * rho).trace().real() * (sigma * sigma).trace().real());
  return overlap <= bound + tol;
}

std::string format_run_report(const VerifierRun& run) {
  std::ostringstream out;
  out << "seed=" << run.seed << " accepted=" << (run.accepted ? "true" : "false")
      << " max_dev=" << format_double(run.max_deviation) << " blocks=" << run.blocks << " shots=" << run.shots;
  return out.str();
}

}  // namespace nrep
