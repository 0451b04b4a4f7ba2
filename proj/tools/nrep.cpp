// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

// nrep: command-line front end.
//
// Exit codes: 0 success, 1 verdict NO (check --script), 2 input error,
// 3 resource cap, 4 numerical failure.

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nrep/duality.hpp"
#include "nrep/ellipsoid.hpp"
#include "nrep/error.hpp"
#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/io.hpp"
#include "nrep/oracle.hpp"
#include "nrep/rdm.hpp"
#include "nrep/verifier.hpp"
#include "nrep/version.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitNo = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;
constexpr int kExitNumerical = 4;

struct Common {
  std::string output;
  bool json = false;
  long long sector_cap = -1;
};

/// Resolved configuration, written at the top of every output.
class RunConfig {
 public:
  explicit RunConfig(std::string command) { set("command", std::move(command)); }

  void set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) { set(key, nrep::format_double(value)); }
  void set(const std::string& key, long long value) { set(key, std::to_string(value)); }

  [[nodiscard]] std::string header() const {
    std::ostringstream out;
    out << "# nrep " << nrep::kVersion << '\n' << "# config";
    for (const auto& [k, v] : entries_) out << ' ' << k << '=' << v;
    out << '\n';
    return out.str();
  }

  [[nodiscard]] json to_json() const {
    json j = json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::size_t resolve_cap(const Common& common) {
  if (common.sector_cap > 0) return static_cast<std::size_t>(common.sector_cap);
  if (const char* env = std::getenv("NREP_SECTOR_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw nrep::InputError("NREP_SECTOR_CAP must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return nrep::kDefaultSectorCap;
}

// Writes `body` under the config header to the output path, or stdout when none is given.
void emit(const Common& common, const RunConfig& config, const std::string& body, const json& summary) {
  const std::string text = config.header() + body;
  if (!common.output.empty()) nrep::write_file(common.output, text);
  if (common.json) {
    json j;
    j["version"] = nrep::kVersion;
    j["config"] = config.to_json();
    j["result"] = summary;
    if (common.output.empty()) j["output"] = body;
    std::cout << j.dump(2) << '\n';
  } else if (common.output.empty()) {
    std::cout << text;
  }
}

void note(const Common& common, const std::string& line) {
  if (!common.json) std::cerr << line << '\n';
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("-o,--output", common.output, "Output file (default: stdout)");
  cmd->add_flag("--json", common.json, "Print a JSON summary on stdout");
  cmd->add_option("--sector-cap", common.sector_cap, "Largest sector dimension (overrides NREP_SECTOR_CAP)");
}

// --- map -------------------------------------------------------------------

struct MapArgs {
  std::string input;
  std::string encoding = "one-per-site";
  std::optional<double> penalty;
};

int cmd_map(const MapArgs& args, const Common& common) {
  const nrep::SpinHamiltonian h = nrep::parse_spin_hamiltonian(nrep::read_file(args.input));
  RunConfig config("map");
  config.set("input", args.input);
  config.set("encoding", args.encoding);
  nrep::FermionOperator op(2 * h.qubits());
  double weight = 0.0;
  if (args.encoding == "one-per-site") {
    weight = args.penalty.value_or(nrep::default_penalty_weight(h));
    op = nrep::spin_to_fermion(h, weight).op;
  } else {
    weight = args.penalty.value_or(nrep::kDefaultParityPenalty);
    op = nrep::spin_to_fermion_parity(h, weight);
  }
  config.set("penalty", weight);
  const int d = 2 * h.qubits();
  const int n = h.qubits();
  config.set("d", static_cast<long long>(d));
  config.set("N", static_cast<long long>(n));
  note(common, "sector: d=" + std::to_string(d) + " N=" + std::to_string(n) + " (d = 2N)");
  json summary;
  summary["d"] = d;
  summary["N"] = n;
  summary["terms"] = op.size();
  summary["penalty"] = weight;
  emit(common, config, nrep::format_fermion_operator(op), summary);
  return 0;
}

// --- rdm -------------------------------------------------------------------

struct RdmArgs {
  std::string input;
  std::string alpha_csv;
};

int cmd_rdm(const RdmArgs& args, const Common& common) {
  const nrep::NSectorDensity sigma = nrep::parse_state_or_density(nrep::read_file(args.input), resolve_cap(common));
  const int d = sigma.basis->modes();
  const int n = sigma.basis->particles();
  RunConfig config("rdm");
  config.set("input", args.input);
  config.set("d", static_cast<long long>(d));
  config.set("N", static_cast<long long>(n));
  const nrep::TwoRDM rho = nrep::two_rdm(sigma);
  json summary;
  summary["d"] = d;
  summary["N"] = n;
  summary["trace"] = rho.matrix.trace().real();
  if (d >= 3) {
    const nrep::ExpectationVector alpha = nrep::expectation_vector(rho);
    note(common, "alpha length = " + std::to_string(alpha.values.size()));
    summary["alpha_length"] = alpha.values.size();
    if (!args.alpha_csv.empty()) nrep::write_file(args.alpha_csv, config.header() + nrep::format_expectation_csv(alpha));
  }
  emit(common, config, nrep::format_two_rdm(rho), summary);
  return 0;
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string input;
  double beta = 0.0;
  int particles = 0;
  double tolerance = 1e-4;
  bool script = false;
};

int cmd_check(const CheckArgs& args, const Common& common) {
  nrep::TwoRDM rho = nrep::parse_two_rdm(nrep::read_file(args.input));
  if (args.particles > 0) rho.particles = args.particles;
  RunConfig config("check");
  config.set("input", args.input);
  config.set("d", static_cast<long long>(rho.modes));
  config.set("N", static_cast<long long>(rho.particles));
  config.set("beta", args.beta);
  config.set("tolerance", args.tolerance);
  const nrep::RepresentabilityOracle oracle(rho.modes, rho.particles, resolve_cap(common));
  nrep::ProjectionOptions options;
  options.tolerance = args.tolerance;
  const nrep::Decision decision = oracle.decide(rho, args.beta, options);
  json summary;
  summary["verdict"] = nrep::verdict_name(decision.verdict);
  summary["distance"] = decision.distance;
  summary["lower_bound"] = decision.lower_bound;
  summary["beta"] = decision.beta;
  summary["iters"] = decision.iterations;
  summary["coleman_failed"] = decision.coleman_failed;
  emit(common, config, nrep::format_verdict(decision) + '\n', summary);
  return args.script && decision.verdict == nrep::Verdict::kNo ? kExitNo : 0;
}

// --- energy ----------------------------------------------------------------

struct EnergyArgs {
  std::string input;
  std::string method = "exact";
  double eps = 0.0;
  std::string trace;
  long max_iterations = 0;
};

int cmd_energy(const EnergyArgs& args, const Common& common) {
  const nrep::SpinHamiltonian h = nrep::parse_spin_hamiltonian(nrep::read_file(args.input));
  const std::size_t cap = resolve_cap(common);
  RunConfig config("energy");
  config.set("input", args.input);
  config.set("method", args.method);
  config.set("sector_cap", static_cast<long long>(cap));
  std::ostringstream body;
  json summary;
  if (args.method == "exact") {
    const nrep::FermionImage image = nrep::spin_to_fermion(h);
    const auto basis = nrep::make_basis(image.map.modes(), h.qubits(), cap);
    const nrep::GroundState gs = nrep::ground_energy_exact(image.op, basis);
    config.set("d", static_cast<long long>(image.map.modes()));
    config.set("N", static_cast<long long>(h.qubits()));
    config.set("penalty", image.map.penalty_weight);
    body << "energy=" << nrep::format_double(gs.energy) << " method=exact\n";
    summary["energy"] = gs.energy;
  } else {
    nrep::EllipsoidOptions options;
    options.sector_cap = cap;
    options.max_iterations = args.max_iterations;
    options.record_trace = !args.trace.empty();
    const nrep::OracleEnergy r = nrep::ground_energy_via_oracle(h, args.eps, options);
    config.set("d", static_cast<long long>(r.modes));
    config.set("N", static_cast<long long>(r.particles));
    config.set("eps", r.details.eps);
    config.set("max_iterations", static_cast<long long>(r.details.budget));
    body << "energy=" << nrep::format_double(r.energy) << " lower_bound=" << nrep::format_double(r.lower_bound)
         << " eps=" << nrep::format_double(r.details.eps) << " iters=" << r.details.iterations
         << " converged=" << (r.details.converged ? "true" : "false") << " method=ellipsoid\n";
    summary["energy"] = r.energy;
    summary["lower_bound"] = r.lower_bound;
    summary["eps"] = r.details.eps;
    summary["iters"] = r.details.iterations;
    summary["converged"] = r.details.converged;
    if (!args.trace.empty()) nrep::write_file(args.trace, config.header() + nrep::format_trace_csv(r.details.trace));
  }
  emit(common, config, body.str(), summary);
  return 0;
}

// --- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string input;
  std::string witness;
  std::string honest_from;
  double beta = 0.4;
  long shots = 0;
  unsigned long long seed = 0;
  int runs = 1;
  double confidence = 0.95;
};

int cmd_verify(const VerifyArgs& args, const Common& common) {
  const nrep::TwoRDM rho = nrep::parse_two_rdm(nrep::read_file(args.input));
  nrep::VerifierConfig vc = nrep::calibrate(rho, rho.particles, args.beta, args.confidence, args.seed);
  if (args.shots > 0) vc.shots = args.shots;
  const long blocks = nrep::required_blocks(vc);

  RunConfig config("verify");
  config.set("input", args.input);
  nrep::WitnessBlocks witness;
  if (!args.honest_from.empty()) {
    const nrep::NSectorDensity sigma =
        nrep::parse_state_or_density(nrep::read_file(args.honest_from), resolve_cap(common));
    if (sigma.basis->modes() != rho.modes) throw nrep::DimensionMismatch("state and 2-RDM have different d");
    witness = nrep::honest_witness(sigma, blocks);
    config.set("honest_from", args.honest_from);
  } else {
    int qubits = 0;
    const nrep::CVector state = nrep::parse_qubit_state(nrep::read_file(args.witness), qubits);
    if (qubits % rho.modes != 0) throw nrep::InputError("witness qubit count is not a multiple of d");
    const int group = qubits / rho.modes;
    witness = nrep::entangled_witness(state, rho.modes, group, (blocks + group - 1) / group * group);
    config.set("witness", args.witness);
  }
  config.set("d", static_cast<long long>(rho.modes));
  config.set("N", static_cast<long long>(rho.particles));
  config.set("beta", args.beta);
  config.set("threshold", vc.threshold);
  config.set("shots", static_cast<long long>(vc.shots));
  config.set("seed", std::to_string(args.seed));
  config.set("runs", static_cast<long long>(args.runs));

  const nrep::VerifierOutcome outcome = nrep::verify(vc, witness, args.runs);
  std::ostringstream body;
  json runs = json::array();
  for (const nrep::VerifierRun& run : outcome.runs) {
    body << nrep::format_run_report(run) << '\n';
    runs.push_back({{"seed", run.seed},
                    {"accepted", run.accepted},
                    {"max_dev", run.max_deviation},
                    {"blocks", run.blocks},
                    {"shots", run.shots}});
  }
  body << "acceptance=" << nrep::format_double(outcome.acceptance_frequency) << '\n';
  json summary;
  summary["acceptance"] = outcome.acceptance_frequency;
  summary["runs"] = runs;
  emit(common, config, body.str(), summary);
  return 0;
}

// --- duality ---------------------------------------------------------------

struct DualityArgs {
  int modes = 5;
  std::string map_a;
  std::string map_b;
};

int cmd_duality(const DualityArgs& args, const Common& common) {
  const nrep::CoordinateMap a = nrep::build_map_A(args.modes);
  const nrep::CoordinateMap b = nrep::build_map_B(args.modes);
  const nrep::InnerBallCertificate cert = nrep::inner_ball_certificate(args.modes);
  const auto l = static_cast<Eigen::Index>(nrep::observable_count(args.modes));
  const double ab_defect = (a.matrix * b.matrix - nrep::RMatrix::Identity(l, l)).cwiseAbs().maxCoeff();

  RunConfig config("duality");
  config.set("d", static_cast<long long>(args.modes));
  if (!args.map_a.empty()) nrep::write_file(args.map_a, config.header() + nrep::format_coordinate_map(a));
  if (!args.map_b.empty()) nrep::write_file(args.map_b, config.header() + nrep::format_coordinate_map(b));

  std::ostringstream body;
  body << "d=" << args.modes << " l=" << l << '\n'
       << "residual_A=" << nrep::format_double(a.validation_residual) << '\n'
       << "residual_B=" << nrep::format_double(b.validation_residual) << '\n'
       << "max_abs(AB-I)=" << nrep::format_double(ab_defect) << '\n'
       << "sigma_min(A)=" << nrep::format_double(cert.sigma_min) << '\n'
       << "sigma_max(A)=" << nrep::format_double(cert.sigma_max) << '\n'
       << "pair_radius=" << nrep::format_double(cert.pair_radius) << '\n'
       << "inner_radius=" << nrep::format_double(cert.radius) << '\n'
       << "tr(B^T B)=" << nrep::format_double(cert.frobenius_b_sq) << '\n'
       << "outer_radius=" << nrep::format_double(std::sqrt(static_cast<double>(l))) << '\n';
  json summary;
  summary["d"] = args.modes;
  summary["l"] = l;
  summary["residual_A"] = a.validation_residual;
  summary["residual_B"] = b.validation_residual;
  summary["ab_defect"] = ab_defect;
  summary["sigma_min"] = cert.sigma_min;
  summary["sigma_max"] = cert.sigma_max;
  summary["pair_radius"] = cert.pair_radius;
  summary["inner_radius"] = cert.radius;
  summary["frobenius_b_sq"] = cert.frobenius_b_sq;
  emit(common, config, body.str(), summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nrep: N-representability toolkit"};
  app.set_version_flag("--version", std::string(nrep::kVersion));
  app.require_subcommand(1);
  Common common;

  MapArgs map_args;
  CLI::App* map = app.add_subcommand("map", "Spin Hamiltonian to fermionic operator");
  map->add_option("hamiltonian", map_args.input, "Spin Hamiltonian file")->required()->check(CLI::ExistingFile);
  map->add_option("--encoding", map_args.encoding, "one-per-site or parity")
      ->check(CLI::IsMember({"one-per-site", "parity"}));
  map->add_option("--penalty", map_args.penalty, "Penalty weight");
  add_common(map, common);

  RdmArgs rdm_args;
  CLI::App* rdm = app.add_subcommand("rdm", "2-RDM and alpha coordinates of a state or density");
  rdm->add_option("state", rdm_args.input, "nsector-state or nsector-density file")->required()->check(CLI::ExistingFile);
  rdm->add_option("--alpha", rdm_args.alpha_csv, "Write the alpha coordinates as CSV");
  add_common(rdm, common);

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand("check", "Decide N-representability of a 2-RDM");
  check->add_option("rdm", check_args.input, "two-rdm file")->required()->check(CLI::ExistingFile);
  check->add_option("--beta", check_args.beta, "Promise gap in trace norm")->required()->check(CLI::NonNegativeNumber);
  check->add_option("--particles", check_args.particles, "Override N from the file");
  check->add_option("--tol", check_args.tolerance, "Projection tolerance")->check(CLI::PositiveNumber);
  check->add_flag("--script", check_args.script, "Exit with status 1 on a NO verdict");
  add_common(check, common);

  EnergyArgs energy_args;
  CLI::App* energy = app.add_subcommand("energy", "Ground energy of a 2-local spin Hamiltonian");
  energy->add_option("hamiltonian", energy_args.input, "Spin Hamiltonian file")->required()->check(CLI::ExistingFile);
  energy->add_option("--method", energy_args.method, "exact or ellipsoid")->check(CLI::IsMember({"exact", "ellipsoid"}));
  energy->add_option("--eps", energy_args.eps, "Target accuracy (default 1e-2 * ||gamma||_1)");
  energy->add_option("--trace", energy_args.trace, "Write the ellipsoid trace as CSV");
  energy->add_option("--max-iterations", energy_args.max_iterations, "Ellipsoid iteration budget");
  add_common(energy, common);

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "Simulate the verifier on a witness");
  verify->add_option("rdm", verify_args.input, "two-rdm file")->required()->check(CLI::ExistingFile);
  auto* witness_opt = verify->add_option("--witness", verify_args.witness, "qubit-state file of one unit")
                          ->check(CLI::ExistingFile);
  auto* honest_opt = verify->add_option("--honest-from", verify_args.honest_from, "state or density file")
                         ->check(CLI::ExistingFile);
  witness_opt->excludes(honest_opt);
  verify->add_option("--beta", verify_args.beta, "Promise gap")->check(CLI::PositiveNumber);
  verify->add_option("--shots", verify_args.shots, "Shots per observable (default: calibrated)");
  verify->add_option("--seed", verify_args.seed, "Random seed");
  verify->add_option("--runs", verify_args.runs, "Independent repetitions")->check(CLI::PositiveNumber);
  verify->add_option("--confidence", verify_args.confidence, "Honest acceptance target for calibration");
  add_common(verify, common);

  DualityArgs duality_args;
  CLI::App* duality = app.add_subcommand("duality", "Particle-hole maps and the inner-ball certificate");
  duality->add_option("--d", duality_args.modes, "Mode count (>= 5)")->required();
  duality->add_option("--map-a", duality_args.map_a, "Write map A");
  duality->add_option("--map-b", duality_args.map_b, "Write map B");
  add_common(duality, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*map) return cmd_map(map_args, common);
    if (*rdm) return cmd_rdm(rdm_args, common);
    if (*check) return cmd_check(check_args, common);
    if (*energy) return cmd_energy(energy_args, common);
    if (*verify) {
      if (verify_args.witness.empty() && verify_args.honest_from.empty())
        throw nrep::InputError("verify needs --witness or --honest-from");
      return cmd_verify(verify_args, common);
    }
    if (*duality) return cmd_duality(duality_args, common);
  } catch (const nrep::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCap;
  } catch (const nrep::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
