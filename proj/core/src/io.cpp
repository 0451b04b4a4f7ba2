// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include "nrep/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "nrep/error.hpp"

namespace nrep {

namespace {

constexpr double kHermitianReadTolerance = 1e-10;
constexpr double kStateNormTolerance = 1e-6;

struct Line {
  int number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Non-empty, comment-stripped lines with their 1-based numbers.
std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view raw = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (!raw.empty()) out.push_back({number, raw});
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    const auto end = s.find_first_of(" \t", start);
    out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    pos = end;
  }
  return out;
}

long parse_integer(std::string_view token, int line) {
  long value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

Header expect_header(const std::vector<Line>& lines, const std::string& kind) {
  if (lines.empty()) throw ParseError(1, "missing '" + kind + "' header");
  Header h = parse_header(lines.front().text, lines.front().number);
  if (h.kind != kind) throw ParseError(lines.front().number, "expected header '" + kind + "', got '" + h.kind + "'");
  return h;
}

std::pair<int, int> modes_and_particles(const Header& h, int line) {
  const int d = h.integer("d", line);
  const int n = h.integer("N", line);
  if (d < 1 || d > kMaxModes) throw ParseError(line, "d out of range");
  if (n < 0 || n > d) throw ParseError(line, "N out of range");
  return {d, n};
}

// Reads `row col re im` lines into a Hermitian matrix of the given size.
CMatrix read_hermitian_entries(const std::vector<Line>& lines, Eigen::Index dim) {
  CMatrix m = CMatrix::Zero(dim, dim);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(dim, dim, false);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const auto t = tokens(line.text);
    if (t.size() != 4) throw ParseError(line.number, "expected 'row col re im'");
    const long r = parse_integer(t[0], line.number);
    const long c = parse_integer(t[1], line.number);
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw ParseError(line.number, "matrix index out of range");
    if (seen(r, c)) throw ParseError(line.number, "duplicate entry");
    const Complex v(parse_double(t[2], line.number), parse_double(t[3], line.number));
    if (r == c && std::abs(v.imag()) > kHermitianReadTolerance)
      throw ParseError(line.number, "diagonal entry has an imaginary part");
    m(r, c) = v;
    seen(r, c) = true;
    if (r == c) continue;
    if (seen(c, r)) {
      if (std::abs(m(c, r) - std::conj(v)) > kHermitianReadTolerance)
        throw ParseError(line.number, "entry is not the conjugate of its transpose");
    } else {
      m(c, r) = std::conj(v);
    }
  }
  return m;
}

void write_upper_entries(std::ostringstream& out, const CMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = r; c < m.cols(); ++c)
      out << r << ' ' << c << ' ' << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag()) << '\n';
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw NumericalError("cannot format a double");
  return std::string(buffer, ptr);
}

double parse_double(std::string_view token, int line) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value))
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  return value;
}

int Header::integer(const std::string& key, int line) const {
  const auto it = fields.find(key);
  if (it == fields.end()) throw ParseError(line, "header is missing '" + key + "='");
  return static_cast<int>(parse_integer(it->second, line));
}

Header parse_header(std::string_view line, int line_number) {
  const auto t = tokens(trim(line));
  if (t.empty()) throw ParseError(line_number, "empty header");
  Header h;
  std::size_t first = 0;
  if (t[0].find('=') == std::string_view::npos) {
    h.kind = std::string(t[0]);
    first = 1;
  }
  for (std::size_t k = first; k < t.size(); ++k) {
    const auto eq = t[k].find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == t[k].size())
      throw ParseError(line_number, "malformed header field '" + std::string(t[k]) + "'");
    h.fields[std::string(t[k].substr(0, eq))] = std::string(t[k].substr(eq + 1));
  }
  return h;
}

std::string format_fermion_operator(const FermionOperator& op) {
  std::ostringstream out;
  out << "fermion-op d=" << op.modes() << '\n';
  for (const auto& [m, c] : op.terms()) {
    out << '(' << format_double(c.real()) << ',' << format_double(c.imag()) << ") +";
    for (int i : m.creators) out << ' ' << i + 1;
    out << " -";
    for (int j : m.annihilators) out << ' ' << j + 1;
    out << '\n';
  }
  return out.str();
}

FermionOperator parse_fermion_operator(std::string_view text) {
  const auto lines = content_lines(text);
  const Header h = expect_header(lines, "fermion-op");
  const int d = h.integer("d", lines.front().number);
  if (d < 1 || d > kMaxModes) throw ParseError(lines.front().number, "d out of range");
  FermionOperator op(d);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const auto close = line.text.find(')');
    if (line.text.front() != '(' || close == std::string_view::npos)
      throw ParseError(line.number, "expected '(<re>,<im>)' coefficient");
    const std::string_view coef = line.text.substr(1, close - 1);
    const auto comma = coef.find(',');
    if (comma == std::string_view::npos) throw ParseError(line.number, "coefficient needs a comma");
    const Complex c(parse_double(trim(coef.substr(0, comma)), line.number),
                    parse_double(trim(coef.substr(comma + 1)), line.number));
    const auto t = tokens(line.text.substr(close + 1));
    if (t.empty() || t[0] != "+") throw ParseError(line.number, "expected '+' before creators");
    std::vector<int> creators;
    std::vector<int> annihilators;
    bool after_minus = false;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (t[i] == "-") {
        if (after_minus) throw ParseError(line.number, "repeated '-'");
        after_minus = true;
        continue;
      }
      const long idx = parse_integer(t[i], line.number);
      if (idx < 1 || idx > d) throw ParseError(line.number, "mode index out of range");
      (after_minus ? annihilators : creators).push_back(static_cast<int>(idx - 1));
    }
    if (!after_minus) throw ParseError(line.number, "expected '-' before annihilators");
    op.add_term(c, std::move(creators), std::move(annihilators));
  }
  return op;
}

std::string format_two_rdm(const TwoRDM& rho) {
  std::ostringstream out;
  out << "two-rdm d=" << rho.modes << " N=" << rho.particles << '\n';
  write_upper_entries(out, rho.matrix);
  return out.str();
}

TwoRDM parse_two_rdm(std::string_view text) {
  const auto lines = content_lines(text);
  const Header h = expect_header(lines, "two-rdm");
  const auto [d, n] = modes_and_particles(h, lines.front().number);
  if (d < 2) throw ParseError(lines.front().number, "two-rdm needs d >= 2");
  const auto m = static_cast<Eigen::Index>(binomial(d, 2));
  return TwoRDM{d, n, read_hermitian_entries(lines, m)};
}

std::string format_state(const NSectorState& state) {
  std::ostringstream out;
  out << "nsector-state d=" << state.basis->modes() << " N=" << state.basis->particles() << '\n';
  for (std::size_t k = 0; k < state.basis->size(); ++k) {
    const Complex a = state.amplitudes(static_cast<Eigen::Index>(k));
    if (a == Complex{}) continue;
    out << state.basis->label(k) << ' ' << format_double(a.real()) << ' ' << format_double(a.imag()) << '\n';
  }
  return out.str();
}

NSectorState parse_state(std::string_view text, std::size_t sector_cap) {
  const auto lines = content_lines(text);
  const Header h = expect_header(lines, "nsector-state");
  const auto [d, n] = modes_and_particles(h, lines.front().number);
  NSectorState state{make_basis(d, n, sector_cap), {}};
  state.amplitudes = CVector::Zero(static_cast<Eigen::Index>(state.basis->size()));
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const auto t = tokens(line.text);
    if (t.size() != 3) throw ParseError(line.number, "expected '<bitstring> re im'");
    if (static_cast<int>(t[0].size()) != d) throw ParseError(line.number, "bitstring length differs from d");
    Occupation s = 0;
    try {
      s = occupation_from_string(t[0]);
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
    const auto idx = state.basis->find(s);
    if (!idx) throw ParseError(line.number, "bitstring does not have N ones");
    state.amplitudes(static_cast<Eigen::Index>(*idx)) +=
        Complex(parse_double(t[1], line.number), parse_double(t[2], line.number));
  }
  const double norm = state.amplitudes.norm();
  if (std::abs(norm - 1.0) > kStateNormTolerance)
    throw InvalidArgument("state norm " + format_double(norm) + " differs from 1 by more than 1e-6");
  state.amplitudes /= norm;
  return state;
}

std::string format_density(const NSectorDensity& sigma) {
  std::ostringstream out;
  out << "nsector-density d=" << sigma.basis->modes() << " N=" << sigma.basis->particles() << '\n';
  write_upper_entries(out, sigma.matrix);
  return out.str();
}

NSectorDensity parse_density(std::string_view text, std::size_t sector_cap) {
  const auto lines = content_lines(text);
  const Header h = expect_header(lines, "nsector-density");
  const auto [d, n] = modes_and_particles(h, lines.front().number);
  auto basis = make_basis(d, n, sector_cap);
  const auto dim = static_cast<Eigen::Index>(basis->size());
  NSectorDensity sigma{std::move(basis), read_hermitian_entries(lines, dim)};
  sigma.validate();
  return sigma;
}

NSectorDensity parse_state_or_density(std::string_view text, std::size_t sector_cap) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, "empty input");
  const Header h = parse_header(lines.front().text, lines.front().number);
  if (h.kind == "nsector-state") return NSectorDensity::pure(parse_state(text, sector_cap));
  if (h.kind == "nsector-density") return parse_density(text, sector_cap);
  throw ParseError(lines.front().number, "expected 'nsector-state' or 'nsector-density' header");
}

std::string format_qubit_state(const CVector& amplitudes, int qubits) {
  std::ostringstream out;
  out << "qubit-state qubits=" << qubits << '\n';
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    if (amplitudes(k) == Complex{}) continue;
    out << occupation_to_string(static_cast<Occupation>(k), qubits) << ' ' << format_double(amplitudes(k).real())
        << ' ' << format_double(amplitudes(k).imag()) << '\n';
  }
  return out.str();
}

CVector parse_qubit_state(std::string_view text, int& qubits) {
  const auto lines = content_lines(text);
  const Header h = expect_header(lines, "qubit-state");
  qubits = h.integer("qubits", lines.front().number);
  if (qubits < 1 || qubits > 30) throw ParseError(lines.front().number, "qubits out of range");
  CVector v = CVector::Zero(Eigen::Index{1} << qubits);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const auto t = tokens(line.text);
    if (t.size() != 3) throw ParseError(line.number, "expected '<bitstring> re im'");
    if (static_cast<int>(t[0].size()) != qubits) throw ParseError(line.number, "bitstring length differs from qubits");
    Occupation s = 0;
    try {
      s = occupation_from_string(t[0]);
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
    v(static_cast<Eigen::Index>(s)) += Complex(parse_double(t[1], line.number), parse_double(t[2], line.number));
  }
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kStateNormTolerance)
    throw InvalidArgument("qubit state norm " + format_double(norm) + " differs from 1 by more than 1e-6");
  return v / norm;
}

std::string format_expectation_csv(const ExpectationVector& alpha) {
  const auto basis = observable_basis(alpha.modes);
  std::ostringstream out;
  out << "index,observable,alpha\n";
  for (Eigen::Index k = 0; k < alpha.values.size(); ++k)
    out << k << ',' << basis->label(static_cast<std::size_t>(k)) << ',' << format_double(alpha.values(k)) << '\n';
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
  if (!out) throw InputError("write to '" + path + "' failed");
}

}  // namespace nrep
