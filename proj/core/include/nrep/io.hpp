// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief Plain-text formats for operators, densities and reports.
 *
 * Every format starts with a header line `<kind> key=value ...`. Blank lines
 * and `#` comments are ignored by the readers. Floats are written with 17
 * significant digits so a read-write cycle is bit-stable.
 */

#pragma once

#include <map>
#include <string>
#include <string_view>

#include "nrep/fock.hpp"
#include "nrep/linalg.hpp"
#include "nrep/rdm.hpp"

namespace nrep {

/// Shortest form is not used: always 17 significant digits, `%.17g` style.
[[nodiscard]] std::string format_double(double value);
[[nodiscard]] double parse_double(std::string_view token, int line);

struct Header {
  std::string kind;
  std::map<std::string, std::string> fields;

  [[nodiscard]] int integer(const std::string& key, int line = 1) const;
  [[nodiscard]] bool has(const std::string& key) const { return fields.count(key) != 0; }
};

/// `kind k1=v1 k2=v2` -> Header; throws ParseError on a malformed token.
[[nodiscard]] Header parse_header(std::string_view line, int line_number = 1);

/// `fermion-op d=<d>`, then `(<re>,<im>) + i1 i2 - j1 j2` per term, indices 1-based.
[[nodiscard]] std::string format_fermion_operator(const FermionOperator& op);
[[nodiscard]] FermionOperator parse_fermion_operator(std::string_view text);

/// `two-rdm d=<d> N=<N>`, then `row col re im` with 0-based row <= col.
[[nodiscard]] std::string format_two_rdm(const TwoRDM& rho);
/// Accepts the upper triangle, the full matrix, or any Hermitian-consistent mix.
[[nodiscard]] TwoRDM parse_two_rdm(std::string_view text);

/// `nsector-state d=<d> N=<N>`, then `<bitstring> re im` for each nonzero amplitude.
[[nodiscard]] std::string format_state(const NSectorState& state);
[[nodiscard]] NSectorState parse_state(std::string_view text, std::size_t sector_cap = kDefaultSectorCap);

/// `nsector-density d=<d> N=<N>`, then `row col re im` with 0-based row <= col.
[[nodiscard]] std::string format_density(const NSectorDensity& sigma);
[[nodiscard]] NSectorDensity parse_density(std::string_view text, std::size_t sector_cap = kDefaultSectorCap);

/// Either a state or a density file, decided by the header.
[[nodiscard]] NSectorDensity parse_state_or_density(std::string_view text, std::size_t sector_cap = kDefaultSectorCap);

/// `qubit-state qubits=<n>`, then `<bitstring> re im` (qubit 1 first).
[[nodiscard]] std::string format_qubit_state(const CVector& amplitudes, int qubits);
[[nodiscard]] CVector parse_qubit_state(std::string_view text, int& qubits);

/// `index,label,value` rows under a header line.
[[nodiscard]] std::string format_expectation_csv(const ExpectationVector& alpha);

[[nodiscard]] std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace nrep
