// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "brute.hpp"
#include "nrep/error.hpp"
#include "nrep/rdm.hpp"

namespace nrep {
namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Occupation occ(std::initializer_list<int> modes_one_based) {
  Occupation s = 0;
  for (int m : modes_one_based) s |= Occupation{1} << (m - 1);
  return s;
}

NSectorDensity random_density(int d, int n, Rng& rng, Eigen::Index rank = -1) {
  auto b = make_basis(d, n);
  return NSectorDensity{b, random_density_matrix(static_cast<Eigen::Index>(b->size()), rng, rank)};
}

TEST(TwoRdm, PairStateIsItsOwnRdm) {
  const auto sigma = NSectorDensity::slater(make_basis(4, 2), occ({1, 2}));
  const TwoRDM rho = two_rdm(sigma);
  CMatrix expected = CMatrix::Zero(6, 6);
  expected(0, 0) = 1.0;
  EXPECT_LT(max_abs(rho.matrix - expected), 1e-15);
}

TEST(TwoRdm, ThreeParticleSlater) {
  const TwoRDM rho = two_rdm(NSectorDensity::slater(make_basis(4, 3), occ({1, 2, 3})));
  // Pairs 12, 13, 14, 23, 24, 34.
  RVector diag = RVector::Zero(6);
  diag(0) = diag(1) = diag(3) = 1.0 / 3.0;
  EXPECT_LT(max_abs(rho.matrix - diag.cast<Complex>().asDiagonal().toDenseMatrix()), 1e-15);
}

TEST(TwoRdm, MatchesFockSpaceExpectations) {
  Rng rng(1);
  for (const auto& [d, n] : {std::pair{4, 2}, {5, 3}, {6, 4}, {6, 3}}) {
    const NSectorDensity sigma = random_density(d, n, rng);
    const CMatrix fock = brute::embed(sigma.matrix, sigma.basis->states(), d);
    const TwoRDM rho = two_rdm(sigma);
    EXPECT_LT(max_abs(rho.matrix - brute::two_rdm(fock, d, n)), 1e-12) << d << ' ' << n;
    EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-12);
    EXPECT_NO_THROW(rho.validate());
    if (n == 2) {
      EXPECT_LT(max_abs(rho.matrix - sigma.matrix), 1e-15);
    }
  }
}

TEST(TwoRdm, RejectsSingleParticle) {
  EXPECT_THROW((void)two_rdm(NSectorDensity::maximally_mixed(make_basis(4, 1))), InvalidArgument);
}

TEST(TwoRdm, RemovingAParticleKeepsTheRdm) {
  Rng rng(4);
  for (const auto& [d, n] : {std::pair{5, 3}, {6, 3}, {6, 4}}) {
    const NSectorDensity sigma = random_density(d, n, rng);
    const NSectorDensity tau = remove_particle(sigma);
    EXPECT_EQ(tau.basis->particles(), n - 1);
    EXPECT_LT(max_abs(two_rdm(tau).matrix - two_rdm(sigma).matrix), 1e-12);
  }
}

TEST(OneRdm, Examples) {
  const auto b = make_basis(4, 2);
  const OneRDM g = one_rdm(NSectorDensity::slater(b, occ({1, 2})));
  EXPECT_LT(max_abs(g.matrix - RVector((RVector(4) << 1, 1, 0, 0).finished()).cast<Complex>().asDiagonal().toDenseMatrix()),
            1e-15);

  NSectorState psi{b, CVector::Zero(6)};
  psi.amplitudes(static_cast<Eigen::Index>(b->index(occ({1, 2})))) = std::sqrt(0.5);
  psi.amplitudes(static_cast<Eigen::Index>(b->index(occ({3, 4})))) = std::sqrt(0.5);
  const OneRDM half = one_rdm(NSectorDensity::pure(psi));
  EXPECT_LT(max_abs(half.matrix - 0.5 * CMatrix::Identity(4, 4)), 1e-15);
  EXPECT_TRUE(coleman_check(half));
}

TEST(OneRdm, MatchesFockSpaceExpectations) {
  Rng rng(2);
  const NSectorDensity sigma = random_density(5, 2, rng);
  const CMatrix fock = brute::embed(sigma.matrix, sigma.basis->states(), 5);
  const OneRDM g = one_rdm(sigma);
  EXPECT_LT(max_abs(g.matrix - brute::one_rdm(fock, 5)), 1e-12);
  EXPECT_NEAR(g.matrix.trace().real(), 2.0, 1e-12);
}

TEST(Coleman, Examples) {
  const auto diag = [](std::initializer_list<double> v) {
    OneRDM g;
    g.modes = static_cast<int>(v.size());
    g.particles = 2;
    RVector r(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) r(k++) = x;
    g.matrix = r.cast<Complex>().asDiagonal();
    return g;
  };
  EXPECT_TRUE(coleman_check(diag({1, 1, 0, 0})));
  EXPECT_FALSE(coleman_check(diag({1.5, 0.5, 0, 0})));
  EXPECT_TRUE(coleman_check(diag({0.5, 0.5, 0.5, 0.5})));
  EXPECT_FALSE(coleman_check(diag({0.5, 0.5, 0.5, 0.4})));
}

TEST(ObservableBasis, CountsAndOrder) {
  const ObservableBasis s(4);
  EXPECT_EQ(s.pair_count(), 6u);
  EXPECT_EQ(s.size(), 35u);
  EXPECT_EQ(observable_count(4), 35u);
  EXPECT_EQ(s.observable(0).kind, ObservableKind::kX);
  EXPECT_EQ(s.observable(15).kind, ObservableKind::kY);
  EXPECT_EQ(s.observable(30).kind, ObservableKind::kZ);
  EXPECT_EQ(s.label(0), "X(1_2;1_3)");
  EXPECT_EQ(s.label(30), "Z(1_2)");
  EXPECT_THROW(ObservableBasis(2), InvalidArgument);
}

TEST(ObservableBasis, SpansHermitianSpace) {
  for (int d = 3; d <= 5; ++d) {
    const ObservableBasis s(d);
    const auto m = static_cast<Eigen::Index>(s.pair_count());
    RMatrix vectors(m * m, static_cast<Eigen::Index>(s.size()) + 1);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const CMatrix p = s.pair_matrix(k);
      const auto ev = brute::spectrum(p);
      EXPECT_GE(ev.front(), -1.0 - 1e-12);
      EXPECT_LE(ev.back(), 1.0 + 1e-12);
      vectors.col(static_cast<Eigen::Index>(k)) = hermitian_to_real(p);
    }
    vectors.col(vectors.cols() - 1) = hermitian_to_real(CMatrix::Identity(m, m));
    EXPECT_EQ(Eigen::FullPivLU<RMatrix>(vectors).rank(), m * m) << "d=" << d;
  }
}

TEST(ObservableBasis, FermionOperatorsMatchPairMatrices) {
  const ObservableBasis s(4);
  const SlaterBasis pairs(4, 2);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const CMatrix m = operator_matrix(s.fermion_operator(k), pairs);
    EXPECT_LT(max_abs(m - s.pair_matrix(k)), 1e-15) << s.label(k);
  }
}

TEST(ExpectationVector, PairProjector) {
  const TwoRDM rho = two_rdm(NSectorDensity::slater(make_basis(4, 2), occ({1, 2})));
  const ExpectationVector a = expectation_vector(rho);
  ASSERT_EQ(a.values.size(), 35);
  EXPECT_DOUBLE_EQ(a.values(30), 1.0);
  for (Eigen::Index k = 0; k < 35; ++k)
    if (k != 30) {
      EXPECT_DOUBLE_EQ(a.values(k), 0.0);
    }
}

TEST(ExpectationVector, MaximallyMixed) {
  TwoRDM rho{4, 2, CMatrix::Identity(6, 6) / 6.0};
  const ExpectationVector a = expectation_vector(rho);
  for (Eigen::Index k = 0; k < 30; ++k) EXPECT_NEAR(a.values(k), 0.0, 1e-15);
  for (Eigen::Index k = 30; k < 35; ++k) EXPECT_NEAR(a.values(k), 1.0 / 6.0, 1e-15);
}

TEST(ExpectationVector, RoundTrips) {
  Rng rng(9);
  for (int d = 3; d <= 6; ++d) {
    const auto m = static_cast<Eigen::Index>(d * (d - 1) / 2);
    const CMatrix h = random_hermitian_unit_trace(m, rng);
    const TwoRDM rho{d, 2, h};
    const ExpectationVector a = expectation_vector(rho);
    EXPECT_LT(max_abs(rdm_from_alpha(a).matrix - h), 1e-12);
    ExpectationVector random{d, 2, RVector::Random(a.values.size())};
    EXPECT_LT((expectation_vector(rdm_from_alpha(random)).values - random.values).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ExpectationVector, FromAlphaExamples) {
  ExpectationVector zero{4, 2, RVector::Zero(35)};
  // Every listed coordinate zero leaves all weight on the last pair.
  CMatrix last = CMatrix::Zero(6, 6);
  last(5, 5) = 1.0;
  EXPECT_LT(max_abs(rdm_from_alpha(zero).matrix - last), 1e-15);
  ExpectationVector z12 = zero;
  z12.values(30) = 1.0;
  const TwoRDM rho = rdm_from_alpha(z12);
  EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-14);
  EXPECT_LT((expectation_vector(rho).values - z12.values).cwiseAbs().maxCoeff(), 1e-14);
  // Remaining weight on the omitted last pair: the diagonal is (1, 0, 0, 0, 0, 0).
  EXPECT_NEAR(rho.matrix(0, 0).real(), 1.0, 1e-14);
  EXPECT_NEAR(rho.matrix(5, 5).real(), 0.0, 1e-14);
}

TEST(ExpectationVector, SectorPathAgrees) {
  Rng rng(12);
  for (const auto& [d, n] : {std::pair{4, 2}, {5, 3}, {6, 4}}) {
    const NSectorDensity sigma = random_density(d, n, rng);
    const RVector a = sector_expectation_vector(sigma).values;
    const RVector b = expectation_vector(two_rdm(sigma)).values;
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(a.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
  }
}

TEST(TraceDistance, Examples) {
  Rng rng(3);
  const CMatrix r = random_density_matrix(6, rng);
  EXPECT_NEAR(trace_distance(r, r), 0.0, 1e-15);
  CMatrix p = CMatrix::Zero(6, 6);
  p(0, 0) = 1.0;
  CMatrix q = CMatrix::Zero(6, 6);
  q(1, 1) = 1.0;
  EXPECT_NEAR(trace_distance(p, q), 2.0, 1e-15);
  EXPECT_NEAR(trace_distance(p, CMatrix::Identity(6, 6) / 6.0), 5.0 / 3.0, 1e-14);
  EXPECT_THROW((void)trace_distance(p, CMatrix::Identity(5, 5)), DimensionMismatch);
}

TEST(DiagonalElements, Examples) {
  const RMatrix d2 = diagonal_elements(two_rdm(NSectorDensity::slater(make_basis(4, 2), occ({1, 2}))));
  RMatrix expected = RMatrix::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = 1.0;
  EXPECT_LT((d2 - expected).cwiseAbs().maxCoeff(), 1e-15);

  const RMatrix d3 = diagonal_elements(two_rdm(NSectorDensity::slater(make_basis(4, 3), occ({1, 2, 3}))));
  expected.setZero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) expected(i, j) = 1.0;
  EXPECT_LT((d3 - expected).cwiseAbs().maxCoeff(), 1e-14);

  Rng rng(6);
  const RMatrix dr = diagonal_elements(two_rdm(random_density(6, 4, rng)));
  EXPECT_NEAR(dr.sum() / 2.0, 6.0, 1e-12);
}

}  // namespace
}  // namespace nrep
