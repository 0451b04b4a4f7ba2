// Copyright 2026 The nrep Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "brute.hpp"
#include "nrep/error.hpp"
#include "nrep/fock.hpp"
#include "nrep/hamiltonians.hpp"

namespace nrep {
namespace {

TEST(SlaterBasis, SmallSectorOrder) {
  const SlaterBasis b(2, 1);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b.label(0), "10");
  EXPECT_EQ(b.label(1), "01");
}

TEST(SlaterBasis, SizesMatchBinomial) {
  EXPECT_EQ(SlaterBasis(4, 2).size(), 6u);
  EXPECT_EQ(SlaterBasis(8, 4).size(), 70u);
  EXPECT_EQ(SlaterBasis(5, 0).size(), 1u);
  EXPECT_EQ(binomial(10, 3), 120u);
}

TEST(SlaterBasis, MatchesEnumeratedOrderAndIndex) {
  for (int d = 2; d <= 7; ++d)
    for (int n = 0; n <= d; ++n) {
      const SlaterBasis b(d, n);
      const auto expected = brute::sector_states(d, n);
      ASSERT_EQ(b.states(), expected) << "d=" << d << " N=" << n;
      for (std::size_t k = 0; k < b.size(); ++k) {
        EXPECT_EQ(popcount(b.state(k)), n);
        EXPECT_EQ(b.index(b.state(k)), k);
      }
    }
}

TEST(SlaterBasis, RejectsBadArguments) {
  EXPECT_THROW(SlaterBasis(3, 4), InvalidArgument);
  EXPECT_THROW(SlaterBasis(20, 10, 1000), CapacityError);
}

TEST(ApplyMonomial, VacuumCreation) {
  const auto r = apply_monomial(Monomial{{0}, {}}, occupation_from_string("00"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->sign, 1);
  EXPECT_EQ(occupation_to_string(r->result, 2), "10");
}

TEST(ApplyMonomial, AnnihilatingEmptyModeIsNull) {
  EXPECT_FALSE(apply_monomial(Monomial{{}, {0}}, occupation_from_string("01")));
}

TEST(ApplyWord, CreationOrderFlipsSign) {
  const std::vector<Ladder> w12{{0, true}, {1, true}};
  const std::vector<Ladder> w21{{1, true}, {0, true}};
  const auto a = apply_word(w12, 0);
  const auto b = apply_word(w21, 0);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->result, b->result);
  EXPECT_EQ(a->sign, -b->sign);
}

TEST(OperatorMatrix, NumberOperator) {
  const SlaterBasis b(2, 1);
  const CMatrix m = operator_matrix(FermionOperator::number(2, 0), b);
  EXPECT_EQ(m, (CMatrix(2, 2) << 1, 0, 0, 0).finished());
}

TEST(OperatorMatrix, HoppingIsPauliX) {
  const SlaterBasis b(2, 1);
  FermionOperator hop(2);
  hop.add_term(1.0, {0}, {1});
  hop.add_term(1.0, {1}, {0});
  EXPECT_EQ(operator_matrix(hop, b), (CMatrix(2, 2) << 0, 1, 1, 0).finished());
}

TEST(OperatorMatrix, TotalNumberOnPairSector) {
  FermionOperator total(4);
  for (int k = 0; k < 4; ++k) total += FermionOperator::number(4, k);
  const SlaterBasis b(4, 2);
  EXPECT_TRUE(operator_matrix(total, b).isApprox(2.0 * CMatrix::Identity(6, 6), 0.0));
}

TEST(OperatorMatrix, DimensionMismatch) {
  EXPECT_THROW((void)operator_matrix(FermionOperator::number(3, 0), SlaterBasis(4, 2)), DimensionMismatch);
}

// Sector matrices agree with the Kronecker-built ladder operators on 2^d.
TEST(OperatorMatrix, AgreesWithKroneckerLadders) {
  Rng rng(11);
  std::normal_distribution<double> g;
  for (int d = 2; d <= 5; ++d) {
    FermionOperator op(d);
    std::uniform_int_distribution<int> mode(0, d - 1);
    for (int t = 0; t < 12; ++t) {
      const std::vector<Ladder> word{{mode(rng), true}, {mode(rng), true}, {mode(rng), false}, {mode(rng), false}};
      op += FermionOperator::from_word(d, word, Complex(g(rng), g(rng)));
    }
    const CMatrix full = brute::fock_matrix(op);
    EXPECT_LT((fock_space_matrix(op) - full).cwiseAbs().maxCoeff(), 1e-12) << "d=" << d;
    for (int n = 0; n <= d; ++n) {
      const SlaterBasis b(d, n);
      const CMatrix expected = brute::restrict(full, b.states());
      EXPECT_LT((operator_matrix(op, b) - expected).cwiseAbs().maxCoeff(), 1e-12) << "d=" << d << " N=" << n;
    }
  }
}

TEST(FermionOperator, AnticommutationOnSectors) {
  for (int d = 2; d <= 6; ++d)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const auto a_i = FermionOperator::annihilation(d, i);
        const auto a_j = FermionOperator::annihilation(d, j);
        const auto c_j = FermionOperator::creation(d, j);
        for (int n = 1; n <= d; ++n) {
          const SlaterBasis in(d, n);
          const SlaterBasis out_minus2(d, std::max(n - 2, 0));
          const CMatrix aa = operator_matrix(a_i * a_j + a_j * a_i, in, out_minus2);
          if (n >= 2) {
            EXPECT_LT(aa.cwiseAbs().maxCoeff(), 1e-12);
          }
          const CMatrix ac = operator_matrix(a_i * c_j + c_j * a_i, in, in);
          const CMatrix expected = (i == j ? 1.0 : 0.0) * CMatrix::Identity(ac.rows(), ac.cols());
          EXPECT_LT((ac - expected).cwiseAbs().maxCoeff(), 1e-12) << d << ' ' << i << ' ' << j;
        }
      }
}

TEST(FermionOperator, DoubleAnnihilationVanishes) {
  const auto a = FermionOperator::annihilation(4, 2);
  EXPECT_TRUE((a * a).empty());
}

TEST(FermionOperator, LinearityAndAdjoint) {
  Rng rng(5);
  std::normal_distribution<double> g;
  const int d = 4;
  std::uniform_int_distribution<int> mode(0, d - 1);
  std::bernoulli_distribution coin;
  const auto random_op = [&] {
    FermionOperator op(d);
    for (int t = 0; t < 6; ++t) {
      std::vector<Ladder> w;
      const int len = 1 + t % 4;
      for (int k = 0; k < len; ++k) w.push_back({mode(rng), coin(rng)});
      op += FermionOperator::from_word(d, w, Complex(g(rng), g(rng)));
    }
    return op;
  };
  const FermionOperator a = random_op();
  const FermionOperator b = random_op();
  const Complex x(0.5, -1.5);
  const Complex y(2.0, 0.25);
  const CMatrix lhs = fock_space_matrix(x * a + y * b);
  const CMatrix rhs = x * fock_space_matrix(a) + y * fock_space_matrix(b);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((fock_space_matrix(a.adjoint()) - fock_space_matrix(a).adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FermionOperator, WordIsNormalOrdered) {
  // a_1 a_1^dag = 1 - a_1^dag a_1
  const std::vector<Ladder> w{{0, false}, {0, true}};
  const auto op = FermionOperator::from_word(2, w);
  EXPECT_EQ(op.constant_term(), Complex(1.0));
  EXPECT_EQ(op.coefficient(Monomial{{0}, {0}}), Complex(-1.0));
}

TEST(GroundEnergy, NumberOperator) {
  const auto b = make_basis(2, 1);
  const GroundState gs = ground_energy_exact(FermionOperator::number(2, 0), b);
  EXPECT_NEAR(gs.energy, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(gs.state.amplitudes(1)), 1.0, 1e-12);
}

TEST(GroundEnergy, Hopping) {
  FermionOperator hop(2);
  hop.add_term(-1.0, {0}, {1});
  hop.add_term(-1.0, {1}, {0});
  EXPECT_NEAR(ground_energy_exact(hop, make_basis(2, 1)).energy, -1.0, 1e-12);
}

TEST(GroundEnergy, PenalizedIsingImage) {
  SpinHamiltonian h(2);
  h.add_term(-1.0, "ZZ");
  const FermionImage image = spin_to_fermion(h, 10.0);
  EXPECT_NEAR(ground_energy_exact(image.op, make_basis(4, 2)).energy, -1.0, 1e-10);
}

TEST(GroundEnergy, RejectsNonHermitian) {
  FermionOperator op(2);
  op.add_term(1.0, {0}, {1});
  EXPECT_THROW((void)ground_energy_exact(op, make_basis(2, 1)), NonHermitianError);
}

TEST(Densities, Validate) {
  const auto b = make_basis(4, 2);
  EXPECT_NO_THROW(NSectorDensity::maximally_mixed(b).validate());
  NSectorDensity bad = NSectorDensity::maximally_mixed(b);
  bad.matrix(0, 0) += 0.5;
  EXPECT_THROW(bad.validate(), InputError);
}

}  // namespace
}  // namespace nrep
