// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nrep/error.hpp"

namespace nrep {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n-k+i) is divisible by i; split the division to stay exact without overflow.
    const auto top = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t factor = top / (static_cast<std::uint64_t>(i) / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) return std::numeric_limits<std::uint64_t>::max();
  }
  return result;
}

std::string occupation_to_string(Occupation s, int modes) {
  std::string out(static_cast<std::size_t>(modes), '0');
  for (int k = 0; k < modes; ++k)
    if ((s >> k) & 1U) out[static_cast<std::size_t>(k)] = '1';
  return out;
}

Occupation occupation_from_string(std::string_view text) {
  if (text.size() > static_cast<std::size_t>(kMaxModes)) throw InvalidArgument("bitstring longer than 62 modes");
  Occupation s = 0;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] == '1') {
      s |= Occupation{1} << k;
    } else if (text[k] != '0') {
      throw InvalidArgument("bitstring contains a character other than 0/1: " + std::string(text));
    }
  }
  return s;
}

Occupation occupation_from_modes(std::span<const int> modes) {
  Occupation s = 0;
  for (int m : modes) {
    if (m < 0 || m >= kMaxModes) throw InvalidArgument("mode index out of range");
    s |= Occupation{1} << m;
  }
  return s;
}

std::vector<int> occupied_modes(Occupation s, int modes) {
  std::vector<int> out;
  for (int k = 0; k < modes; ++k)
    if ((s >> k) & 1U) out.push_back(k);
  return out;
}

SlaterBasis::SlaterBasis(int modes, int particles, std::size_t cap) : modes_(modes), particles_(particles) {
  if (modes < 1 || modes > kMaxModes) throw InvalidArgument("mode count must lie in [1, 62]");
  if (particles < 0 || particles > modes) throw InvalidArgument("particle count must lie in [0, d]");
  const std::uint64_t count = binomial(modes, particles);
  if (count > cap) {
    throw CapacityError("sector d=" + std::to_string(modes) + " N=" + std::to_string(particles) + " has " +
                        std::to_string(count) + " states, above the cap of " + std::to_string(cap));
  }
  states_.reserve(count);
  // Walk k-combinations of {0..d-1} in lexicographic order of the index lists.
  std::vector<int> combo(static_cast<std::size_t>(particles));
  for (int i = 0; i < particles; ++i) combo[static_cast<std::size_t>(i)] = i;
  while (true) {
    states_.push_back(occupation_from_modes(combo));
    int i = particles - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == modes - particles + i) --i;
    if (i < 0) break;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < particles; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  index_.reserve(states_.size());
  for (std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::optional<std::size_t> SlaterBasis::find(Occupation s) const {
  const auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t SlaterBasis::index(Occupation s) const {
  const auto found = find(s);
  if (!found) throw InvalidArgument("bitstring " + occupation_to_string(s, modes_) + " is not in the basis");
  return *found;
}

SlaterBasis build_basis(int modes, int particles, std::size_t cap) { return SlaterBasis(modes, particles, cap); }

BasisPtr make_basis(int modes, int particles, std::size_t cap) {
  return std::make_shared<const SlaterBasis>(modes, particles, cap);
}

namespace {

bool act(Occupation& s, int& sign, int mode, bool dagger) {
  const Occupation bit = Occupation{1} << mode;
  const bool occupied = (s & bit) != 0;
  if (occupied == dagger) return false;
  sign *= parity_below(s, mode);
  s ^= bit;
  return true;
}

}  // namespace

std::optional<MonomialAction> apply_monomial(const Monomial& term, Occupation state) {
  int sign = 1;
  for (auto it = term.annihilators.rbegin(); it != term.annihilators.rend(); ++it)
    if (!act(state, sign, *it, false)) return std::nullopt;
  for (auto it = term.creators.rbegin(); it != term.creators.rend(); ++it)
    if (!act(state, sign, *it, true)) return std::nullopt;
  return MonomialAction{sign, state};
}

std::optional<MonomialAction> apply_word(std::span<const Ladder> word, Occupation state) {
  int sign = 1;
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    if (!act(state, sign, it->mode, it->dagger)) return std::nullopt;
  return MonomialAction{sign, state};
}

namespace {

struct PendingWord {
  Complex coefficient;
  std::vector<Ladder> word;
};

// Position of the first adjacent pair that violates canonical order, or -1.
int first_disorder(const std::vector<Ladder>& w) {
  for (std::size_t k = 0; k + 1 < w.size(); ++k) {
    const Ladder& a = w[k];
    const Ladder& b = w[k + 1];
    if (!a.dagger && b.dagger) return static_cast<int>(k);
    if (a.dagger == b.dagger && a.mode >= b.mode) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

FermionOperator::FermionOperator(int modes) : modes_(modes) {
  if (modes < 1 || modes > kMaxModes) throw InvalidArgument("mode count must lie in [1, 62]");
}

FermionOperator FermionOperator::constant(int modes, Complex value) {
  FermionOperator op(modes);
  op.accumulate(Monomial{}, value);
  return op;
}

FermionOperator FermionOperator::creation(int modes, int mode) {
  FermionOperator op(modes);
  op.add_term(1.0, {mode}, {});
  return op;
}

FermionOperator FermionOperator::annihilation(int modes, int mode) {
  FermionOperator op(modes);
  op.add_term(1.0, {}, {mode});
  return op;
}

FermionOperator FermionOperator::number(int modes, int mode) {
  FermionOperator op(modes);
  op.add_term(1.0, {mode}, {mode});
  return op;
}

FermionOperator FermionOperator::from_word(int modes, std::span<const Ladder> word, Complex coefficient) {
  FermionOperator op(modes);
  for (const Ladder& l : word)
    if (l.mode < 0 || l.mode >= modes) throw InvalidArgument("ladder operator mode out of range");

  std::vector<PendingWord> stack;
  stack.push_back({coefficient, std::vector<Ladder>(word.begin(), word.end())});
  while (!stack.empty()) {
    PendingWord item = std::move(stack.back());
    stack.pop_back();
    const int k = first_disorder(item.word);
    if (k < 0) {
      Monomial m;
      for (const Ladder& l : item.word) (l.dagger ? m.creators : m.annihilators).push_back(l.mode);
      op.accumulate(m, item.coefficient);
      continue;
    }
    const auto pos = static_cast<std::size_t>(k);
    const Ladder a = item.word[pos];
    const Ladder b = item.word[pos + 1];
    if (a.dagger == b.dagger) {
      if (a.mode == b.mode) continue;  // a_p a_p = 0
      std::swap(item.word[pos], item.word[pos + 1]);
      item.coefficient = -item.coefficient;
      stack.push_back(std::move(item));
      continue;
    }
    // a_p a_q^dag = delta_pq - a_q^dag a_p
    if (a.mode == b.mode) {
      PendingWord contracted{item.coefficient, {}};
      contracted.word.reserve(item.word.size() - 2);
      for (std::size_t j = 0; j < item.word.size(); ++j)
        if (j != pos && j != pos + 1) contracted.word.push_back(item.word[j]);
      stack.push_back(std::move(contracted));
    }
    std::swap(item.word[pos], item.word[pos + 1]);
    item.coefficient = -item.coefficient;
    stack.push_back(std::move(item));
  }
  op.prune(0.0);
  return op;
}

void FermionOperator::add_term(Complex coefficient, std::vector<int> creators, std::vector<int> annihilators) {
  for (int i : creators)
    if (i < 0 || i >= modes_) throw InvalidArgument("creator mode out of range");
  for (int j : annihilators)
    if (j < 0 || j >= modes_) throw InvalidArgument("annihilator mode out of range");
  // Sorting each list is a permutation of anticommuting factors of the same kind.
  auto sort_with_sign = [](std::vector<int>& v) {
    int sign = 1;
    for (std::size_t i = 1; i < v.size(); ++i) {
      for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
        std::swap(v[j - 1], v[j]);
        sign = -sign;
      }
    }
    return std::adjacent_find(v.begin(), v.end()) == v.end() ? sign : 0;
  };
  const int sign = sort_with_sign(creators) * sort_with_sign(annihilators);
  if (sign == 0) return;
  accumulate(Monomial{std::move(creators), std::move(annihilators)}, coefficient * static_cast<double>(sign));
}

void FermionOperator::accumulate(const Monomial& m, Complex c) {
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

Complex FermionOperator::coefficient(const Monomial& m) const {
  const auto it = terms_.find(m);
  return it == terms_.end() ? Complex{} : it->second;
}

FermionOperator& FermionOperator::operator+=(const FermionOperator& other) {
  if (other.modes_ != modes_) throw DimensionMismatch("fermion operators act on different mode counts");
  for (const auto& [m, c] : other.terms_) accumulate(m, c);
  return *this;
}

FermionOperator& FermionOperator::operator-=(const FermionOperator& other) {
  if (other.modes_ != modes_) throw DimensionMismatch("fermion operators act on different mode counts");
  for (const auto& [m, c] : other.terms_) accumulate(m, -c);
  return *this;
}

FermionOperator& FermionOperator::operator*=(Complex scalar) {
  for (auto& [m, c] : terms_) c *= scalar;
  return *this;
}

namespace {

std::vector<Ladder> word_of(const Monomial& m) {
  std::vector<Ladder> w;
  w.reserve(m.creators.size() + m.annihilators.size());
  for (int i : m.creators) w.push_back({i, true});
  for (int j : m.annihilators) w.push_back({j, false});
  return w;
}

}  // namespace

FermionOperator operator*(const FermionOperator& a, const FermionOperator& b) {
  if (a.modes() != b.modes()) throw DimensionMismatch("fermion operators act on different mode counts");
  FermionOperator out(a.modes());
  for (const auto& [ma, ca] : a.terms()) {
    const std::vector<Ladder> wa = word_of(ma);
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<Ladder> w = wa;
      const std::vector<Ladder> wb = word_of(mb);
      w.insert(w.end(), wb.begin(), wb.end());
      out += FermionOperator::from_word(a.modes(), w, ca * cb);
    }
  }
  out.prune(0.0);
  return out;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator out(modes_);
  for (const auto& [m, c] : terms_) {
    // (a^dag_I a_J)^dag = a^dag_{rev J} a_{rev I}
    std::vector<int> creators(m.annihilators.rbegin(), m.annihilators.rend());
    std::vector<int> annihilators(m.creators.rbegin(), m.creators.rend());
    out.add_term(std::conj(c), std::move(creators), std::move(annihilators));
  }
  return out;
}

bool FermionOperator::is_number_conserving() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.particle_change() == 0; });
}

bool FermionOperator::is_hermitian(double tol) const {
  const FermionOperator diff = *this - adjoint();
  return std::all_of(diff.terms_.begin(), diff.terms_.end(), [tol](const auto& t) { return std::abs(t.second) <= tol; });
}

int FermionOperator::max_degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) deg = std::max(deg, m.degree());
  return deg;
}

void FermionOperator::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& t) { return std::abs(t.second) <= tol; });
}

std::vector<MatrixEntry> operator_entries(const FermionOperator& op, const SlaterBasis& basis_in,
                                          const SlaterBasis& basis_out) {
  if (op.modes() != basis_in.modes() || op.modes() != basis_out.modes())
    throw DimensionMismatch("operator and bases disagree on the mode count");
  const int change = basis_out.particles() - basis_in.particles();
  std::vector<MatrixEntry> out;
  std::vector<MatrixEntry> column;
  for (std::size_t c = 0; c < basis_in.size(); ++c) {
    column.clear();
    for (const auto& [m, coeff] : op.terms()) {
      if (m.particle_change() != change) continue;
      const auto action = apply_monomial(m, basis_in.state(c));
      if (!action) continue;
      const auto r = basis_out.find(action->result);
      if (!r) continue;
      column.push_back({static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(c),
                        coeff * static_cast<double>(action->sign)});
    }
    std::sort(column.begin(), column.end(), [](const MatrixEntry& a, const MatrixEntry& b) { return a.row < b.row; });
    for (const MatrixEntry& e : column) {
      if (!out.empty() && out.back().col == e.col && out.back().row == e.row) {
        out.back().value += e.value;
      } else {
        out.push_back(e);
      }
    }
  }
  std::erase_if(out, [](const MatrixEntry& e) { return e.value == Complex{}; });
  return out;
}

CMatrix operator_matrix(const FermionOperator& op, const SlaterBasis& basis_in, const SlaterBasis& basis_out) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(basis_out.size()), static_cast<Eigen::Index>(basis_in.size()));
  for (const MatrixEntry& e : operator_entries(op, basis_in, basis_out)) m(e.row, e.col) = e.value;
  return m;
}

Complex SparseMatrix::trace_product(const CMatrix& sigma) const {
  Complex acc{};
  for (const MatrixEntry& e : entries) acc += e.value * sigma(e.col, e.row);
  return acc;
}

void SparseMatrix::add_to(CMatrix& out, Complex weight) const {
  for (const MatrixEntry& e : entries) out(e.row, e.col) += weight * e.value;
}

CMatrix SparseMatrix::dense() const {
  CMatrix m = CMatrix::Zero(rows, cols);
  add_to(m, 1.0);
  return m;
}

SparseMatrix sparse_operator_matrix(const FermionOperator& op, const SlaterBasis& basis_in,
                                    const SlaterBasis& basis_out) {
  return SparseMatrix{static_cast<Eigen::Index>(basis_out.size()), static_cast<Eigen::Index>(basis_in.size()),
                      operator_entries(op, basis_in, basis_out)};
}

CMatrix operator_matrix(const FermionOperator& op, const SlaterBasis& basis) { return operator_matrix(op, basis, basis); }

CMatrix fock_space_matrix(const FermionOperator& op) {
  const int d = op.modes();
  if (d > kMaxFockModes) throw CapacityError("full Fock space matrices are limited to 14 modes");
  const Eigen::Index dim = Eigen::Index{1} << d;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (const auto& [mono, coeff] : op.terms()) {
      const auto action = apply_monomial(mono, static_cast<Occupation>(c));
      if (action) m(static_cast<Eigen::Index>(action->result), c) += coeff * static_cast<double>(action->sign);
    }
  }
  return m;
}

void NSectorState::validate(bool normalized) const {
  if (!basis) throw InvalidArgument("state has no basis");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->size())
    throw DimensionMismatch("amplitude count does not match the sector dimension");
  if (normalized && std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12)
    throw InvalidArgument("state is not normalized to 1e-12");
}

void NSectorDensity::validate() const {
  if (!basis) throw InvalidArgument("density has no basis");
  const auto dim = static_cast<Eigen::Index>(basis->size());
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw DimensionMismatch("density dimension does not match the sector dimension");
  if (hermiticity_defect(matrix) > 1e-12) throw InvalidArgument("density is not Hermitian to 1e-12");
  if (std::abs(matrix.trace().real() - 1.0) > 1e-10) throw InvalidArgument("density trace differs from 1 by more than 1e-10");
  if (hermitian_eigenvalues(matrix)(0) < -1e-10) throw InvalidArgument("density has an eigenvalue below -1e-10");
}

NSectorDensity NSectorDensity::pure(const NSectorState& state) {
  state.validate(false);
  const CVector v = state.amplitudes.normalized();
  return NSectorDensity{state.basis, v * v.adjoint()};
}

NSectorDensity NSectorDensity::maximally_mixed(BasisPtr basis) {
  const auto dim = static_cast<Eigen::Index>(basis->size());
  return NSectorDensity{std::move(basis), CMatrix::Identity(dim, dim) / static_cast<double>(dim)};
}

NSectorDensity NSectorDensity::slater(BasisPtr basis, Occupation occupied) {
  const auto dim = static_cast<Eigen::Index>(basis->size());
  const auto k = static_cast<Eigen::Index>(basis->index(occupied));
  CMatrix m = CMatrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return NSectorDensity{std::move(basis), m};
}

GroundState ground_energy_exact(const FermionOperator& op, BasisPtr basis) {
  if (!basis) throw InvalidArgument("ground_energy_exact: null basis");
  if (!op.is_number_conserving()) throw InvalidArgument("ground_energy_exact: operator does not conserve particle number");
  const CMatrix h = operator_matrix(op, *basis);
  if (hermiticity_defect(h) > 1e-8) throw NonHermitianError("ground_energy_exact: sector matrix is not Hermitian");
  const Eigenpair pair = lowest_eigenpair(0.5 * (h + h.adjoint()));
  return GroundState{pair.value, NSectorState{std::move(basis), pair.vector}};
}

}  // namespace nrep
