// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nrep/ellipsoid.hpp"
#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"
#include "nrep/oracle.hpp"
#include "nrep/random.hpp"
#include "nrep/rdm.hpp"
#include "nrep/verifier.hpp"

namespace {

using namespace nrep;

void BM_SectorMatrix(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SlaterBasis basis(d, d / 2);
  FermionOperator op(d);
  for (int i = 0; i + 1 < d; ++i) {
    op.add_term(1.0, {i}, {i + 1});
    op.add_term(1.0, {i + 1}, {i});
    op.add_term(0.5, {i, i + 1}, {i, i + 1});
  }
  for (auto _ : state) benchmark::DoNotOptimize(operator_matrix(op, basis));
}
BENCHMARK(BM_SectorMatrix)->Arg(6)->Arg(8)->Arg(10);

void BM_TwoRdm(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(1);
  const BasisPtr basis = make_basis(d, d / 2);
  const NSectorDensity sigma{basis, random_density_matrix(static_cast<Eigen::Index>(basis->size()), rng)};
  for (auto _ : state) benchmark::DoNotOptimize(two_rdm(sigma));
}
BENCHMARK(BM_TwoRdm)->Arg(6)->Arg(8);

void BM_SectorExpectation(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Rng rng(2);
  const BasisPtr basis = make_basis(d, d / 2);
  const NSectorDensity sigma{basis, random_density_matrix(static_cast<Eigen::Index>(basis->size()), rng)};
  (void)sector_observables(d, d / 2);  // build the per-sector cache outside the timing
  for (auto _ : state) benchmark::DoNotOptimize(sector_expectation_vector(sigma));
}
BENCHMARK(BM_SectorExpectation)->Arg(6)->Arg(8);

void BM_Projection(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const RepresentabilityOracle oracle(d, n);
  Rng rng(3);
  const auto& obs = oracle.observables();
  const RVector target = obs.coordinates(random_density_matrix(static_cast<Eigen::Index>(obs.pair_count()), rng));
  ProjectionOptions opts;
  opts.tolerance = 1e-3;
  for (auto _ : state) benchmark::DoNotOptimize(oracle.project(target, opts));
}
BENCHMARK(BM_Projection)->Args({5, 3})->Args({6, 3})->Unit(benchmark::kMillisecond);

void BM_GroundEnergyViaOracle(benchmark::State& state) {
  SpinHamiltonian h(2);
  h.add_term(-1.0, "ZZ");
  h.add_term(-1.0, "XI");
  for (auto _ : state) benchmark::DoNotOptimize(ground_energy_via_oracle(h));
}
BENCHMARK(BM_GroundEnergyViaOracle)->Unit(benchmark::kMillisecond);

void BM_SampleObservable(benchmark::State& state) {
  Rng rng(4);
  const CVector psi = random_unit_vector(16, rng);
  const MeasurementGadget gadget(QubitOperator::term(4, PauliString::parse("XZIY")));
  for (auto _ : state) benchmark::DoNotOptimize(sample_observable(psi, gadget, state.range(0), rng));
}
BENCHMARK(BM_SampleObservable)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
