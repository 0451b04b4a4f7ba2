// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file verifier.hpp
 * @brief Monte-Carlo simulation of the witness-checking protocol.
 *
 * A witness is a sequence of d-qubit blocks. Each block is first measured with
 * the particle-number observable (any outcome other than N rejects), then with
 * the two-outcome gadget of one rescaled observable O~ in [0, 1]: the
 * eigenbasis of O~ is measured and an ancilla reports 1 with probability equal
 * to the eigenvalue. Observables are assigned to blocks round-robin, so each of
 * the l coordinates receives `shots` blocks. The run accepts when every
 * estimated coordinate is within the threshold of alpha(rho).
 *
 * Blocks come in independent identical units of `group_size` blocks. Within a
 * unit the blocks may be entangled; the joint outcome distribution of a unit
 * is computed exactly and the counts are drawn from the multinomial law, which
 * has the same distribution as measuring block by block.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/linalg.hpp"
#include "nrep/random.hpp"
#include "nrep/rdm.hpp"

namespace nrep {

inline constexpr int kDefaultQubitCap = 20;

/// Qubit vector of a sector state: amplitude of occupation s goes to index s.
[[nodiscard]] CVector encode_state(const NSectorState& state);
/// Same for a density; the result is 2^d x 2^d.
[[nodiscard]] CMatrix encode_density(const NSectorDensity& sigma);

struct WitnessBlocks {
  int modes = 0;
  long blocks = 0;     ///< total number of blocks B
  int group_size = 1;  ///< blocks per independent unit
  /// group_size == 1: the density of every block (2^d x 2^d).
  CMatrix block_density;
  /// group_size > 1: the pure joint state of one unit over group_size * d qubits.
  CVector unit_state;

  [[nodiscard]] int unit_qubits() const { return group_size * modes; }
  /// Density of one unit over unit_qubits() qubits.
  [[nodiscard]] CMatrix unit_density() const;
  /// Average single-block marginal of a unit.
  [[nodiscard]] CMatrix block_marginal() const;
};

/// B independent copies of the encoded sigma.
[[nodiscard]] WitnessBlocks honest_witness(const NSectorDensity& sigma, long blocks);
/// B copies of an arbitrary d-qubit block density.
[[nodiscard]] WitnessBlocks product_witness(const CMatrix& block_density, int modes, long blocks);
/// Units of `group_size` blocks in the joint pure state `unit_state`; group_size * d <= qubit_cap.
[[nodiscard]] WitnessBlocks entangled_witness(const CVector& unit_state, int modes, int group_size, long blocks,
                                              int qubit_cap = kDefaultQubitCap);

/// Joint density of the first `count` blocks, for count * d <= qubit_cap.
[[nodiscard]] CMatrix materialize(const WitnessBlocks& witness, int count, int qubit_cap = kDefaultQubitCap);

/// Probability of each Hamming weight 0..n of a qubit vector or density.
[[nodiscard]] std::vector<double> particle_number_distribution(const CVector& state);
[[nodiscard]] std::vector<double> particle_number_distribution(const CMatrix& density);

struct NumberMeasurement {
  int particles;
  CVector state;  ///< normalized projection onto the observed weight
};

[[nodiscard]] NumberMeasurement measure_particle_number(const CVector& state, Rng& rng);

/// O~ = (O - lo) / (hi - lo) with [lo, hi] the spectrum of O; eigendecomposition cached.
class MeasurementGadget {
 public:
  explicit MeasurementGadget(const QubitOperator& op);
  explicit MeasurementGadget(const CMatrix& matrix);

  [[nodiscard]] double low() const noexcept { return low_; }
  [[nodiscard]] double high() const noexcept { return high_; }
  [[nodiscard]] double spread() const noexcept { return high_ - low_; }
  /// Eigenvalues of O~, in [0, 1].
  [[nodiscard]] const RVector& rescaled_eigenvalues() const noexcept { return rescaled_; }
  [[nodiscard]] const CMatrix& eigenvectors() const noexcept { return vectors_; }
  /// The matrix of O~.
  [[nodiscard]] CMatrix rescaled_matrix() const;
  [[nodiscard]] double to_original(double rescaled) const { return low_ + spread() * rescaled; }

 private:
  void init(const CMatrix& matrix);

  double low_ = 0.0;
  double high_ = 0.0;
  RVector rescaled_;
  CMatrix vectors_;
};

struct SampleEstimate {
  double estimate;        ///< estimate of <O>, de-rescaled
  double standard_error;  ///< spread / (2 sqrt(shots)), the worst-case binomial error
  long shots;
  long ones;
};

/// Shot-by-shot gadget simulation: Born-sample an eigenvector, then a Bernoulli ancilla.
[[nodiscard]] SampleEstimate sample_observable(const CVector& state, const MeasurementGadget& gadget, long shots,
                                               Rng& rng);
[[nodiscard]] SampleEstimate sample_observable(const CVector& state, const QubitOperator& op, long shots, Rng& rng);

struct VerifierConfig {
  TwoRDM rho;
  double beta = 0.0;
  int particles = 0;
  int modes = 0;
  long shots = 0;          ///< per observable
  double threshold = 0.0;  ///< max allowed deviation per coordinate
  std::uint64_t seed = 0;
  /// Honest-acceptance target used by calibrate().
  double confidence = 0.95;

  void validate() const;
};

/// t = (beta / trace_per_alpha) / (4 sqrt(l)) and the smallest shot count for which a
/// union bound with Gaussian tails keeps every honest coordinate within t with
/// probability `confidence`.
[[nodiscard]] VerifierConfig calibrate(const TwoRDM& rho, int particles, double beta, double confidence = 0.95,
                                       std::uint64_t seed = 0);

struct VerifierRun {
  std::uint64_t seed = 0;
  bool accepted = false;
  bool number_check_failed = false;
  double max_deviation = 0.0;
  long blocks = 0;
  long shots = 0;
  RVector estimates;   ///< estimated alpha
  RVector deviations;  ///< |estimate - alpha(rho)|
};

struct VerifierOutcome {
  std::vector<VerifierRun> runs;
  double acceptance_frequency = 0.0;
};

/// Blocks the schedule needs: l * shots.
[[nodiscard]] long required_blocks(const VerifierConfig& config);

/// `repetitions` independent runs; run r uses derive_seed(config.seed, r).
[[nodiscard]] VerifierOutcome verify(const VerifierConfig& config, const WitnessBlocks& witness, int repetitions = 1);

struct AdversaryReport {
  VerifierOutcome entangled;
  /// The product witness built from the entangled witness's average block marginal.
  VerifierOutcome product_baseline;
};

[[nodiscard]] AdversaryReport entangled_adversary_test(const VerifierConfig& config, const WitnessBlocks& entangled,
                                                       int repetitions = 1);

struct OverlapResult {
  double estimate = 0.0;  ///< 2 * P(swap test outputs 0) - 1
  double exact = 0.0;     ///< tr(rho sigma)
  bool pure_and_equal = false;
};

inline constexpr double kDefaultPurityEpsilon = 0.1;

/// Swap test: P(0) = (1 + tr(rho sigma)) / 2; verdict when estimate >= 1 - epsilon / 2.
[[nodiscard]] OverlapResult purity_overlap_test(const CMatrix& rho, const CMatrix& sigma, long shots, Rng& rng,
                                                double epsilon = kDefaultPurityEpsilon);

/// tr(rho sigma) <= sqrt(tr(rho^2) tr(sigma^2)), evaluated directly.
[[nodiscard]] bool overlap_bound_holds(const CMatrix& rho, const CMatrix& sigma, double tol = 1e-12);

/// `seed=<u64> accepted=<bool> max_dev=<float> blocks=<int> shots=<int>`
[[nodiscard]] std::string format_run_report(const VerifierRun& run);

}  // namespace nrep
