// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/hamiltonians.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "nrep/error.hpp"

namespace nrep {

namespace {

// i^k for k mod 4.
Complex i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

char PauliString::letter(int qubit) const {
  const bool bx = (x >> qubit) & 1U;
  const bool bz = (z >> qubit) & 1U;
  if (bx && bz) return 'Y';
  if (bx) return 'X';
  if (bz) return 'Z';
  return 'I';
}

std::string PauliString::word(int qubits) const {
  std::string out;
  out.reserve(static_cast<std::size_t>(qubits));
  for (int q = 0; q < qubits; ++q) out.push_back(letter(q));
  return out;
}

PauliString PauliString::single(int qubit, char letter) {
  if (qubit < 0 || qubit >= 64) throw InvalidArgument("qubit index out of range");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'I': return {};
    case 'X': return {bit, 0};
    case 'Y': return {bit, bit};
    case 'Z': return {0, bit};
    default: throw InvalidArgument(std::string("unknown Pauli letter '") + letter + "'");
  }
}

PauliString PauliString::parse(std::string_view word) {
  if (word.size() > 62) throw InvalidArgument("Pauli word longer than 62 qubits");
  PauliString p;
  for (std::size_t q = 0; q < word.size(); ++q) {
    const PauliString s = single(static_cast<int>(q), word[q]);
    p.x |= s.x;
    p.z |= s.z;
  }
  return p;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  // P(x,z) = i^{|x&z|} X^x Z^z and Z^z X^x = (-1)^{|z&x|} X^x Z^z.
  PauliString c{a.x ^ b.x, a.z ^ b.z};
  const int k = a.y_count() + b.y_count() - c.y_count() + 2 * __builtin_popcountll(a.z & b.x);
  return {i_power(k), c};
}

QubitOperator::QubitOperator(int qubits) : qubits_(qubits) {
  if (qubits < 0 || qubits > 62) throw InvalidArgument("qubit count must lie in [0, 62]");
}

QubitOperator QubitOperator::identity(int qubits, Complex scale) {
  QubitOperator op(qubits);
  op.add(PauliString{}, scale);
  return op;
}

QubitOperator QubitOperator::term(int qubits, const PauliString& p, Complex coefficient) {
  QubitOperator op(qubits);
  op.add(p, coefficient);
  return op;
}

Complex QubitOperator::coefficient(const PauliString& p) const {
  const auto it = terms_.find(p);
  return it == terms_.end() ? Complex{} : it->second;
}

void QubitOperator::add(const PauliString& p, Complex coefficient) {
  const std::uint64_t mask = qubits_ >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << qubits_) - 1);
  if (((p.x | p.z) & ~mask) != 0) throw InvalidArgument("Pauli string acts outside the register");
  auto [it, inserted] = terms_.try_emplace(p, coefficient);
  if (!inserted) it->second += coefficient;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& other) {
  if (other.qubits_ != qubits_) throw DimensionMismatch("qubit operators act on different registers");
  for (const auto& [p, c] : other.terms_) add(p, c);
  return *this;
}

QubitOperator& QubitOperator::operator-=(const QubitOperator& other) {
  if (other.qubits_ != qubits_) throw DimensionMismatch("qubit operators act on different registers");
  for (const auto& [p, c] : other.terms_) add(p, -c);
  return *this;
}

QubitOperator& QubitOperator::operator*=(Complex s) {
  for (auto& [p, c] : terms_) c *= s;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  if (a.qubits() != b.qubits()) throw DimensionMismatch("qubit operators act on different registers");
  QubitOperator out(a.qubits());
  for (const auto& [pa, ca] : a.terms()) {
    for (const auto& [pb, cb] : b.terms()) {
      const PauliProduct prod = multiply(pa, pb);
      out.add(prod.string, prod.phase * ca * cb);
    }
  }
  out.prune(0.0);
  return out;
}

QubitOperator QubitOperator::adjoint() const {
  QubitOperator out(qubits_);
  for (const auto& [p, c] : terms_) out.add(p, std::conj(c));
  return out;
}

bool QubitOperator::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const auto& t) { return std::abs(t.second.imag()) <= tol; });
}

void QubitOperator::prune(double tol) {
  std::erase_if(terms_, [tol](const auto& t) { return std::abs(t.second) <= tol; });
}

CMatrix QubitOperator::matrix() const {
  if (qubits_ > kMaxFockModes) throw CapacityError("dense qubit matrices are limited to 14 qubits");
  const Eigen::Index dim = Eigen::Index{1} << qubits_;
  CMatrix m = CMatrix::Zero(dim, dim);
  for (const auto& [p, c] : terms_) {
    const Complex base = c * i_power(p.y_count());
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto bits = static_cast<std::uint64_t>(b);
      const double sign = (__builtin_popcountll(bits & p.z) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(bits ^ p.x), b) += base * sign;
    }
  }
  return m;
}

CVector QubitOperator::apply(const CVector& state) const {
  const Eigen::Index dim = Eigen::Index{1} << qubits_;
  if (state.size() != dim) throw DimensionMismatch("state length is not 2^qubits");
  CVector out = CVector::Zero(dim);
  for (const auto& [p, c] : terms_) {
    const Complex base = c * i_power(p.y_count());
    for (Eigen::Index b = 0; b < dim; ++b) {
      const auto bits = static_cast<std::uint64_t>(b);
      const double sign = (__builtin_popcountll(bits & p.z) & 1) ? -1.0 : 1.0;
      out(static_cast<Eigen::Index>(bits ^ p.x)) += base * sign * state(b);
    }
  }
  return out;
}

SpinHamiltonian::SpinHamiltonian(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > 31) throw InvalidArgument("spin Hamiltonians need 1 to 31 qubits");
}

void SpinHamiltonian::add_term(double coefficient, const PauliString& pauli) {
  if (!std::isfinite(coefficient)) throw InvalidArgument("non-finite coefficient");
  const std::uint64_t mask = (std::uint64_t{1} << qubits_) - 1;
  if (((pauli.x | pauli.z) & ~mask) != 0) throw InvalidArgument("Pauli term acts outside the register");
  if (pauli.weight() > 2)
    throw WeightViolation("term " + pauli.word(qubits_) + " has weight " + std::to_string(pauli.weight()) + " > 2");
  terms_.push_back({coefficient, pauli});
}

double SpinHamiltonian::coefficient_norm() const {
  double s = 0.0;
  for (const SpinTerm& t : terms_) s += std::abs(t.coefficient);
  return s;
}

QubitOperator SpinHamiltonian::to_qubit_operator() const {
  QubitOperator op(qubits_);
  for (const SpinTerm& t : terms_) op.add(t.pauli, t.coefficient);
  return op;
}

CMatrix SpinHamiltonian::matrix() const { return to_qubit_operator().matrix(); }

double SpinHamiltonian::ground_energy() const { return hermitian_eigenvalues(matrix())(0); }

SpinHamiltonian parse_spin_hamiltonian(std::string_view text) {
  struct Pending {
    int line;
    double coefficient;
    std::string word;
  };
  std::vector<Pending> pending;
  int declared = -1;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    std::string lower(line);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower.rfind("qubits", 0) == 0) {
      const auto eq = lower.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected qubits=<n>");
      const std::string_view value = trim(std::string_view(lower).substr(eq + 1));
      int n = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc{} || ptr != value.data() + value.size() || n < 1)
        throw ParseError(line_no, "invalid qubit count");
      if (declared >= 0 || !pending.empty()) throw ParseError(line_no, "qubits= header must come first, once");
      declared = n;
    } else {
      std::istringstream in{std::string(line)};
      std::string coef_text;
      std::string word;
      std::string extra;
      in >> coef_text >> word;
      if (word.empty() || (in >> extra)) throw ParseError(line_no, "expected '<coefficient> <pauli-word>'");
      double coef = 0.0;
      const auto [ptr, ec] = std::from_chars(coef_text.data(), coef_text.data() + coef_text.size(), coef);
      if (ec != std::errc{} || ptr != coef_text.data() + coef_text.size() || !std::isfinite(coef))
        throw ParseError(line_no, "invalid coefficient '" + coef_text + "'");
      for (char c : word) {
        if (std::string_view("IXYZixyz").find(c) == std::string_view::npos)
          throw ParseError(line_no, "invalid Pauli word '" + word + "'");
      }
      pending.push_back({line_no, coef, word});
    }
    if (end == text.size()) break;
  }
  int qubits = declared;
  if (qubits < 0) {
    if (pending.empty()) throw ParseError(line_no, "empty Hamiltonian needs a qubits=<n> header");
    qubits = static_cast<int>(pending.front().word.size());
  }
  SpinHamiltonian h(qubits);
  for (const Pending& p : pending) {
    if (static_cast<int>(p.word.size()) != qubits)
      throw ParseError(p.line, "word '" + p.word + "' does not have " + std::to_string(qubits) + " letters");
    const PauliString pauli = PauliString::parse(p.word);
    if (pauli.weight() > 2)
      throw WeightViolation("line " + std::to_string(p.line) + ": term " + p.word + " has weight " +
                            std::to_string(pauli.weight()) + " > 2");
    h.add_term(p.coefficient, pauli);
  }
  return h;
}

std::string format_spin_hamiltonian(const SpinHamiltonian& h) {
  std::ostringstream out;
  out.precision(17);
  out << "qubits=" << h.qubits() << '\n';
  for (const SpinTerm& t : h.terms()) out << t.coefficient << ' ' << t.pauli.word(h.qubits()) << '\n';
  return out.str();
}

double default_penalty_weight(const SpinHamiltonian& h) { return 2.0 * h.coefficient_norm() + 1.0; }

Occupation encode_basis_state(std::uint64_t z, int qubits) {
  Occupation s = 0;
  for (int q = 0; q < qubits; ++q) {
    const int mode = ((z >> q) & 1U) ? EncodingMap::mode_b(q) : EncodingMap::mode_a(q);
    s |= Occupation{1} << mode;
  }
  return s;
}

Occupation encode_basis_state_parity(std::uint64_t z, int qubits) {
  Occupation s = 0;
  for (int q = 0; q < qubits; ++q)
    if ((z >> q) & 1U) s |= (Occupation{1} << EncodingMap::mode_a(q)) | (Occupation{1} << EncodingMap::mode_b(q));
  return s;
}

FermionOperator site_parity(int qubits, int qubit) {
  const int d = 2 * qubits;
  const int a = EncodingMap::mode_a(qubit);
  const int b = EncodingMap::mode_b(qubit);
  const FermionOperator one = FermionOperator::constant(d, 1.0);
  const FermionOperator fa = 2.0 * FermionOperator::number(d, a) - one;
  const FermionOperator fb = 2.0 * FermionOperator::number(d, b) - one;
  return fa * fb;
}

FermionOperator pauli_image(int qubits, int qubit, char letter, Encoding encoding) {
  const int d = 2 * qubits;
  const int a = EncodingMap::mode_a(qubit);
  const int b = EncodingMap::mode_b(qubit);
  FermionOperator op(d);
  switch (std::toupper(static_cast<unsigned char>(letter))) {
    case 'I':
      op = FermionOperator::constant(d, 1.0);
      break;
    case 'Z':
      op = FermionOperator::constant(d, 1.0) - 2.0 * FermionOperator::number(d, b);
      break;
    case 'X':
      op.add_term(1.0, {a}, {b});
      op.add_term(1.0, {b}, {a});
      if (encoding == Encoding::kParity) {
        op.add_term(1.0, {}, {b, a});
        op.add_term(1.0, {a, b}, {});
      }
      break;
    case 'Y':
      op.add_term(kI, {b}, {a});
      op.add_term(-kI, {a}, {b});
      if (encoding == Encoding::kParity) {
        op.add_term(kI, {a, b}, {});
        op.add_term(-kI, {}, {b, a});
      }
      break;
    default:
      throw InvalidArgument(std::string("unknown Pauli letter '") + letter + "'");
  }
  return op;
}

namespace {

FermionOperator substitute(const SpinHamiltonian& h, Encoding encoding) {
  const int d = 2 * h.qubits();
  FermionOperator out(d);
  for (const SpinTerm& t : h.terms()) {
    FermionOperator term = FermionOperator::constant(d, t.coefficient);
    for (int q = 0; q < h.qubits(); ++q) {
      const char l = t.pauli.letter(q);
      if (l != 'I') term = term * pauli_image(h.qubits(), q, l, encoding);
    }
    out += term;
  }
  out.prune();
  return out;
}

}  // namespace

FermionImage spin_to_fermion(const SpinHamiltonian& h, double penalty_weight) {
  if (!(penalty_weight > 0.0) || !std::isfinite(penalty_weight))
    throw InvalidArgument("penalty weight must be positive");
  const int d = 2 * h.qubits();
  FermionOperator op = substitute(h, Encoding::kOnePerSite);
  const FermionOperator one = FermionOperator::constant(d, 1.0);
  for (int q = 0; q < h.qubits(); ++q) op += (0.5 * penalty_weight) * (one + site_parity(h.qubits(), q));
  op.prune();
  return {std::move(op), EncodingMap{h.qubits(), Encoding::kOnePerSite, penalty_weight}};
}

FermionImage spin_to_fermion(const SpinHamiltonian& h) { return spin_to_fermion(h, default_penalty_weight(h)); }

FermionOperator spin_to_fermion_parity(const SpinHamiltonian& h, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("parity penalty must be positive");
  const int d = 2 * h.qubits();
  FermionOperator op = substitute(h, Encoding::kParity);
  const FermionOperator one = FermionOperator::constant(d, 1.0);
  for (int q = 0; q < h.qubits(); ++q) op += (0.5 * epsilon) * (one - site_parity(h.qubits(), q));
  op.prune();
  return op;
}

FermionOperator two_body_normal_form(const FermionOperator& op, int particles) {
  if (particles < 2) throw InvalidArgument("two_body_normal_form needs N >= 2");
  if (!op.is_number_conserving()) throw InvalidArgument("two_body_normal_form needs a number-conserving operator");
  if (op.max_degree() > 4) throw InvalidArgument("two_body_normal_form accepts at most two-body terms");
  const int d = op.modes();
  const double scale = 1.0 / static_cast<double>(particles - 1);
  FermionOperator out(d);
  for (const auto& [m, c] : op.terms()) {
    if (m.degree() != 2) {
      out.add_term(c, m.creators, m.annihilators);
      continue;
    }
    const int i = m.creators.front();
    const int j = m.annihilators.front();
    for (int k = 0; k < d; ++k) {
      if (k == i || k == j) continue;  // a_i^dag a_i^dag = a_j a_j = 0
      out.add_term(c * scale, {i, k}, {k, j});
    }
  }
  out.prune();
  return out;
}

QubitOperator jordan_wigner_annihilation(int modes, int mode) {
  if (mode < 0 || mode >= modes) throw InvalidArgument("mode index out of range");
  PauliString string_z;
  for (int k = 0; k < mode; ++k) string_z.z |= std::uint64_t{1} << k;
  PauliString px = string_z;
  px.x |= std::uint64_t{1} << mode;
  PauliString py = px;
  py.z |= std::uint64_t{1} << mode;
  QubitOperator op(modes);
  op.add(px, -0.5);
  op.add(py, Complex(0.0, -0.5));
  return op;
}

QubitOperator jordan_wigner(const FermionOperator& op) {
  const int d = op.modes();
  std::vector<QubitOperator> lower;
  std::vector<QubitOperator> raise;
  lower.reserve(static_cast<std::size_t>(d));
  raise.reserve(static_cast<std::size_t>(d));
  for (int q = 0; q < d; ++q) {
    lower.push_back(jordan_wigner_annihilation(d, q));
    raise.push_back(lower.back().adjoint());
  }
  QubitOperator out(d);
  for (const auto& [m, c] : op.terms()) {
    QubitOperator term = QubitOperator::identity(d, c);
    for (int i : m.creators) term = term * raise[static_cast<std::size_t>(i)];
    for (int j : m.annihilators) term = term * lower[static_cast<std::size_t>(j)];
    out += term;
  }
  out.prune();
  return out;
}

}  // namespace nrep
