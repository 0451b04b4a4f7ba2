// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute.hpp"
#include "nrep/duality.hpp"
#include "nrep/ellipsoid.hpp"
#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/io.hpp"
#include "nrep/oracle.hpp"
#include "nrep/random.hpp"
#include "nrep/rdm.hpp"
#include "nrep/verifier.hpp"

namespace {

using namespace nrep;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure and keeps a short summary.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && pass_) {
      pass_ = false;
      first_failure_ = what;
    }
  }
  void note(const std::string& text) { notes_ += (notes_.empty() ? "" : "; ") + text; }
  [[nodiscard]] Outcome outcome() const { return {pass_, pass_ ? notes_ : first_failure_ + "; " + notes_}; }

 private:
  bool pass_ = true;
  std::string first_failure_;
  std::string notes_;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<double> sorted_eigenvalues(const CMatrix& h) { return brute::spectrum(0.5 * (h + h.adjoint())); }

double spectrum_gap(const CMatrix& a, const CMatrix& b) {
  const auto ea = sorted_eigenvalues(a);
  const auto eb = sorted_eigenvalues(b);
  if (ea.size() != eb.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < ea.size(); ++k) worst = std::max(worst, std::abs(ea[k] - eb[k]));
  return worst;
}

NSectorDensity random_density(int d, int n, Rng& rng, Eigen::Index rank = -1) {
  const BasisPtr basis = make_basis(d, n);
  return NSectorDensity{basis, random_density_matrix(static_cast<Eigen::Index>(basis->size()), rng, rank)};
}

// 1. Anticommutation of the ladder matrices and of their qubit images.
Outcome algebra() {
  Check c;
  double worst = 0.0;
  auto check_family = [&](int d, const std::vector<CMatrix>& a, const std::string& tag) {
    const auto dim = a.front().rows();
    const CMatrix id = CMatrix::Identity(dim, dim);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const CMatrix ai = a[i], aj = a[j];
        const CMatrix ajd = aj.adjoint(), aid = ai.adjoint();
        const double e1 = max_abs(ai * aj + aj * ai);
        const double e2 = max_abs(aid * ajd + ajd * aid);
        const double e3 = max_abs(ai * ajd + ajd * ai - (i == j ? id : CMatrix::Zero(dim, dim)));
        worst = std::max({worst, e1, e2, e3});
        c.expect(e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12,
                 tag + " d=" + std::to_string(d) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
      }
  };
  for (int d = 3; d <= 6; ++d) {
    std::vector<CMatrix> a;
    for (int i = 0; i < d; ++i) a.push_back(fock_space_matrix(FermionOperator::annihilation(d, i)));
    check_family(d, a, "fock");
  }
  for (int d = 1; d <= 4; ++d) {
    std::vector<CMatrix> a;
    for (int i = 0; i < d; ++i) a.push_back(jordan_wigner(FermionOperator::annihilation(d, i)).matrix());
    if (d >= 2) check_family(d, a, "jw");
  }
  c.note("max residual " + fmt(worst));
  return c.outcome();
}

std::vector<Occupation> encoded(int n, bool parity) {
  std::vector<Occupation> out;
  for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z)
    out.push_back(parity ? encode_basis_state_parity(z, n) : encode_basis_state(z, n));
  return out;
}

// 2. Spectra of the encoded images and the penalized sector minimum.
Outcome encoding() {
  Check c;
  Rng rng(2002);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t % 3;
    const SpinHamiltonian h = brute::random_two_local(n, rng);
    const FermionImage image = spin_to_fermion(h);
    const CMatrix full = fock_space_matrix(image.op);
    const double e_spec = spectrum_gap(brute::restrict(full, encoded(n, false)), h.matrix());
    const double e_min =
        std::abs(ground_energy_exact(image.op, make_basis(2 * n, n)).energy - h.ground_energy());
    worst = std::max({worst, e_spec, e_min});
    c.expect(e_spec <= 1e-9, "one-per-site spectrum, trial " + std::to_string(t));
    c.expect(e_min <= 1e-9, "sector minimum, trial " + std::to_string(t));
  }
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 2;
    const SpinHamiltonian h = brute::random_two_local(n, rng);
    const CMatrix full = fock_space_matrix(spin_to_fermion_parity(h));
    const double e_spec = spectrum_gap(brute::restrict(full, encoded(n, true)), h.matrix());
    const double e_min = std::abs(sorted_eigenvalues(full).front() - h.ground_energy());
    worst = std::max({worst, e_spec, e_min});
    c.expect(e_spec <= 1e-9, "parity spectrum, trial " + std::to_string(t));
    c.expect(e_min <= 1e-9, "parity minimum, trial " + std::to_string(t));
  }
  c.note("50 one-per-site + 20 parity, max residual " + fmt(worst));
  return c.outcome();
}

// 3. Projection against the closed-form PSD projection at N=2, and soundness.
Outcome oracle_equivalence() {
  Check c;
  Rng rng(3003);
  const RepresentabilityOracle oracle(4, 2);
  ProjectionOptions options;
  options.tolerance = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CMatrix h = random_hermitian_unit_trace(6, rng);
    const double exact = (h - brute::nearest_density(h)).norm();
    const ProjectionResult p = oracle.project(oracle.observables().coordinates(h), options, Metric::kHilbertSchmidt);
    worst = std::max(worst, std::abs(p.distance - exact));
    c.expect(std::abs(p.distance - exact) <= 1e-3, "projection trial " + std::to_string(t));
  }
  c.note("100 projections, max |diff| " + fmt(worst));

  std::vector<std::pair<int, int>> sizes;
  for (int d = 3; d <= 8; ++d)
    for (int n = 2; n <= std::min(4, d); ++n) sizes.emplace_back(d, n);
  std::vector<std::unique_ptr<RepresentabilityOracle>> oracles;
  for (const auto& [d, n] : sizes) oracles.push_back(std::make_unique<RepresentabilityOracle>(d, n));
  const std::array<double, 3> betas{0.05, 0.1, 0.2};
  int no = 0, yes = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = static_cast<std::size_t>(t) % sizes.size();
    const auto [d, n] = sizes[k];
    const Eigen::Index rank = 1 + t % 3;
    const NSectorDensity sigma = random_density(d, n, rng, rank);
    const Decision v = oracles[k]->decide(two_rdm(sigma), betas[static_cast<std::size_t>(t) % betas.size()]);
    if (v.verdict == Verdict::kNo) ++no;
    if (v.verdict == Verdict::kYes) ++yes;
  }
  c.expect(no == 0, std::to_string(no) + " NO verdicts on representable inputs");
  c.note("soundness 1000 states, YES " + std::to_string(yes) + ", NO " + std::to_string(no));
  return c.outcome();
}

// 4. Oracle-driven ellipsoid energy against exact diagonalization.
Outcome end_to_end() {
  Check c;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(fs::path(NREP_TEST_DATA) / "hamiltonians"))
    files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  c.expect(files.size() == 10, "expected 10 bundled Hamiltonians, found " + std::to_string(files.size()));
  double worst_ratio = 0.0;
  bool saw_root2 = false;
  for (const fs::path& path : files) {
    const SpinHamiltonian h = parse_spin_hamiltonian(read_file(path.string()));
    const FermionImage image = spin_to_fermion(h);
    const double exact = ground_energy_exact(image.op, make_basis(image.map.modes(), h.qubits())).energy;
    const OracleEnergy e = ground_energy_via_oracle(h);
    const double err = std::abs(e.energy - exact);
    worst_ratio = std::max(worst_ratio, err / e.details.eps);
    c.expect(err <= e.details.eps, path.filename().string() + ": |" + fmt(e.energy, 10) + " - " + fmt(exact, 10) +
                                       "| > eps " + fmt(e.details.eps));
    if (std::abs(exact + std::sqrt(2.0)) < 1e-12) saw_root2 = true;
  }
  c.expect(saw_root2, "suite lacks the -sqrt(2) case");
  c.note(std::to_string(files.size()) + " Hamiltonians, max err/eps " + fmt(worst_ratio));
  return c.outcome();
}

// 5. Particle-hole duality.
Outcome duality() {
  Check c;
  Rng rng(5005);
  double worst_agree = 0.0, worst_ab = 0.0, worst_norm_ratio = 0.0, min_radius = INFINITY;
  for (int d : {5, 6}) {
    for (int t = 0; t < 50; ++t) {
      const NSectorDensity sigma2 = random_density(d, 2, rng, 1 + t % 3);
      const NSectorDensity tau = slater_complement(sigma2);
      const double diff =
          (sector_expectation_vector(sigma2).values - hole_expectation_vector(tau).values).cwiseAbs().maxCoeff();
      worst_agree = std::max(worst_agree, diff);
    }
    const CoordinateMap a = build_map_A(d);
    const CoordinateMap b = build_map_B(d);
    const auto l = a.matrix.rows();
    worst_ab = std::max(worst_ab, (a.matrix * b.matrix - RMatrix::Identity(l, l)).cwiseAbs().maxCoeff());
    min_radius = std::min(min_radius, inner_ball_certificate(d).radius);
    const double bound = std::sqrt(static_cast<double>(l));
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + t % (d - 2);
      const double norm = sector_expectation_vector(random_density(d, n, rng, 1 + t % 4)).values.norm();
      worst_norm_ratio = std::max(worst_norm_ratio, norm / bound);
    }
  }
  c.expect(worst_agree <= 1e-10, "hole/particle agreement " + fmt(worst_agree));
  c.expect(worst_ab <= 1e-8, "A B - I = " + fmt(worst_ab));
  c.expect(min_radius > 0.0, "inner ball radius " + fmt(min_radius));
  c.expect(worst_norm_ratio <= 1.0, "max ||alpha|| / sqrt(l) = " + fmt(worst_norm_ratio));
  c.note("agreement " + fmt(worst_agree) + ", AB-I " + fmt(worst_ab) + ", radius " + fmt(min_radius) +
         ", max ||alpha||/sqrt(l) " + fmt(worst_norm_ratio));
  return c.outcome();
}

// 6. Verifier completeness/soundness gap and the purity inequality.
Outcome verifier() {
  Check c;
  Rng rng(6006);
  const NSectorDensity sigma = random_density(4, 2, rng, 1);
  const TwoRDM rho = two_rdm(sigma);
  const VerifierConfig config = calibrate(rho, 2, 0.4, 0.95, 6006);
  const long blocks = required_blocks(config);

  const double p1 = verify(config, honest_witness(sigma, blocks), 100).acceptance_frequency;

  // The 2-RDM distance is linear along the segment to a random state, so the
  // mixture below sits on the 0.4 boundary.
  const NSectorDensity other = random_density(4, 2, rng);
  const double weight = std::min(1.0, 0.4 * (1.0 + 1e-9) / trace_distance(two_rdm(other).matrix, rho.matrix));
  const NSectorDensity far{sigma.basis, (1.0 - weight) * sigma.matrix + weight * other.matrix};
  const double far_distance = trace_distance(two_rdm(far).matrix, rho.matrix);
  VerifierConfig far_config = config;
  far_config.seed = derive_seed(config.seed, 1000);
  const double p0 = verify(far_config, honest_witness(far, blocks), 100).acceptance_frequency;

  CMatrix vacuum = CMatrix::Zero(16, 16);
  vacuum(0, 0) = 1.0;
  const double pz = verify(config, product_witness(vacuum, 4, blocks), 100).acceptance_frequency;

  c.expect(p1 >= 0.9, "honest acceptance " + fmt(p1));
  c.expect(p0 <= 0.5, "far acceptance " + fmt(p0));
  c.expect(far_distance >= 0.4, "far witness distance " + fmt(far_distance));
  c.expect(p1 - p0 >= 0.3, "gap " + fmt(p1 - p0));
  c.expect(pz == 0.0, "zero-particle acceptance " + fmt(pz));

  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index dim = 2 + t % 15;
    const CMatrix a = random_density_matrix(dim, rng, 1 + t % 3);
    const CMatrix b = random_density_matrix(dim, rng, 1 + (t / 3) % 4);
    if (!overlap_bound_holds(a, b)) ++violations;
  }
  c.expect(violations == 0, std::to_string(violations) + " purity-inequality violations");
  c.note("shots " + std::to_string(config.shots) + ", t " + fmt(config.threshold) + ", p1 " + fmt(p1) + ", p0 " +
         fmt(p0) + " (far distance " + fmt(far_distance) + "), zero-particle " + fmt(pz));
  return c.outcome();
}

// Occupation sets S with P(i in S) = n_i exactly: place the n_i as consecutive
// intervals on [0, N) and read off which intervals contain u + Z for u in [0, 1).
std::vector<std::pair<double, std::vector<int>>> occupation_mixture(const std::vector<double>& n) {
  std::vector<double> cuts{0.0, 1.0};
  double acc = 0.0;
  for (double x : n) {
    acc += x;
    cuts.push_back(acc - std::floor(acc));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, std::vector<int>>> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double w = cuts[k + 1] - cuts[k];
    if (w <= 1e-15) continue;
    const double u = 0.5 * (cuts[k] + cuts[k + 1]);
    std::vector<int> set;
    double lo = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double hi = lo + n[i];
      if (std::floor(hi - u) > std::floor(lo - u) + 0.5) set.push_back(static_cast<int>(i));
      lo = hi;
    }
    out.emplace_back(w, set);
  }
  return out;
}

// Constructs a Fock-space ensemble with the given 1-RDM from Slater determinants
// in the orbitals b_k = sum_i v_ik a_i, or refutes it with an orbital whose
// occupation lies outside the sector spectrum of b_k^dag b_k; nullopt if neither.
std::optional<bool> brute_representable(const CMatrix& gamma, int d, int n) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gamma);
  const auto states = brute::sector_states(d, n);
  for (Eigen::Index k = 0; k < d; ++k) {
    CMatrix b = CMatrix::Zero(1 << d, 1 << d);
    for (int i = 0; i < d; ++i) b += es.eigenvectors()(i, k) * brute::ladder(d, i, false);
    const auto bounds = brute::spectrum(brute::restrict(b.adjoint() * b, states));
    if (es.eigenvalues()(k) > bounds.back() + 1e-9 || es.eigenvalues()(k) < bounds.front() - 1e-9) return false;
  }
  std::vector<double> occ(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) occ[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  CVector vac = CVector::Zero(1 << d);
  vac(0) = 1.0;
  CMatrix fock = CMatrix::Zero(1 << d, 1 << d);
  for (const auto& [w, set] : occupation_mixture(occ)) {
    if (static_cast<int>(set.size()) != n) return std::nullopt;
    CVector psi = vac;
    for (auto it = set.rbegin(); it != set.rend(); ++it) {
      CMatrix bd = CMatrix::Zero(1 << d, 1 << d);
      for (int i = 0; i < d; ++i) bd += std::conj(es.eigenvectors()(i, *it)) * brute::ladder(d, i, true);
      psi = bd * psi;
    }
    fock += w * psi * psi.adjoint();
  }
  if (max_abs(brute::one_rdm(fock, d) - gamma) <= 1e-9) return true;
  return std::nullopt;
}

void occupation_grid(int d, int n, std::vector<double>& current, std::vector<std::vector<double>>& out) {
  static const std::array<double, 7> grid{-0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25};
  if (static_cast<int>(current.size()) == d) {
    double sum = 0.0;
    for (double x : current) sum += x;
    if (std::abs(sum - n) < 1e-12) out.push_back(current);
    return;
  }
  for (double g : grid) {
    if (!current.empty() && g < current.back()) continue;
    current.push_back(g);
    occupation_grid(d, n, current, out);
    current.pop_back();
  }
}

// 7. Coleman's criterion against construct-or-refute search.
Outcome coleman() {
  Check c;
  Rng rng(7007);
  int agree = 0, yes = 0, total = 0;
  for (int d : {4, 5}) {
    for (int n = 1; n < d; ++n) {
      std::vector<std::vector<double>> family;
      std::vector<double> current;
      occupation_grid(d, n, current, family);
      for (const auto& occ : family) {
        const CMatrix u = brute::random_unitary(d, rng);
        RVector diag(d);
        for (int i = 0; i < d; ++i) diag(i) = occ[static_cast<std::size_t>(i)];
        const CMatrix gamma = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
        const bool verdict = coleman_check(OneRDM{d, n, gamma});
        const std::optional<bool> truth = brute_representable(gamma, d, n);
        ++total;
        if (!truth) {
          c.expect(false, "search inconclusive at d=" + std::to_string(d) + " N=" + std::to_string(n));
          continue;
        }
        if (*truth) ++yes;
        if (verdict == *truth) ++agree;
        c.expect(verdict == *truth, "disagreement at d=" + std::to_string(d) + " N=" + std::to_string(n));
      }
    }
  }
  c.note(std::to_string(agree) + "/" + std::to_string(total) + " agree, " + std::to_string(yes) + " representable");
  return c.outcome();
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// 8. Byte-identical CLI output on repeated seeded runs.
Outcome determinism() {
  Check c;
#ifndef NREP_CLI_PATH
  c.expect(false, "command-line tool not built");
  return c.outcome();
#else
  const std::string cli = NREP_CLI_PATH;
  const fs::path dir = fs::temp_directory_path() / "nrep_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::string ham = (fs::path(NREP_TEST_DATA) / "hamiltonians" / "h01_zz_x.txt").string();
  write_file(p("state.txt"), "nsector-state d=4 N=2\n1100 0.6 0\n0011 0 0.8\n");
  write_file(p("far.txt"), "two-rdm d=6 N=3\n0 0 1 0\n");

  const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
      {"map " + ham + " -o " + p("map@.txt"), {"map@.txt"}},
      {"map " + ham + " --encoding parity --json", {}},
      {"rdm " + p("state.txt") + " -o " + p("rdm@.txt") + " --alpha " + p("alpha@.csv"), {"rdm@.txt", "alpha@.csv"}},
      {"check " + p("far.txt") + " --beta 0.5", {}},
      {"energy " + ham + " --method ellipsoid --trace " + p("trace@.csv"), {"trace@.csv"}},
      {"verify " + p("rdm0.txt") + " --honest-from " + p("state.txt") + " --seed 17 --runs 2", {}},
      {"duality --d 5 --map-a " + p("a@.txt"), {"a@.txt"}},
  };
  int compared = 0;
  for (const auto& [command, files] : commands) {
    std::array<std::string, 2> outputs;
    std::array<std::string, 2> contents;
    for (int rep = 0; rep < 2; ++rep) {
      std::string cmd = command;
      for (std::size_t pos; (pos = cmd.find('@')) != std::string::npos;) cmd.replace(pos, 1, std::to_string(rep));
      const CliResult r = run_cli(cli, cmd);
      c.expect(r.code == 0, "exit " + std::to_string(r.code) + " for: " + cmd);
      outputs[static_cast<std::size_t>(rep)] = r.out;
      for (const std::string& f : files) {
        std::string name = f;
        name.replace(name.find('@'), 1, std::to_string(rep));
        contents[static_cast<std::size_t>(rep)] += read_file(p(name));
      }
    }
    c.expect(outputs[0] == outputs[1], "stdout differs for: " + command);
    c.expect(contents[0] == contents[1], "artifacts differ for: " + command);
    ++compared;
  }
  fs::remove_all(dir);
  c.note(std::to_string(compared) + " commands run twice");
  return c.outcome();
#endif
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"algebra", algebra},         {"encoding", encoding}, {"oracle", oracle_equivalence},
      {"end-to-end", end_to_end},   {"duality", duality},   {"verifier", verifier},
      {"coleman", coleman},         {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::cout << "criterion " << k + 1 << " " << criteria[k].first << ": " << (o.pass ? "PASS" : "FAIL") << " ("
              << fmt(seconds, 3) << " s) " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
