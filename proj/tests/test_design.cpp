#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "d1u/constructions.hpp"
#include "d1u/design.hpp"
#include "d1u/search.hpp"
#include "oracles.hpp"

using namespace d1u;

namespace {

// Z, X and Y eigenbases of a qubit.
BasisSet qubit_mubs() {
  const double s = 1 / std::sqrt(2.0);
  const std::complex<double> i(0, 1);
  BasisSet bs;
  bs.d = 2;
  bs.bases.push_back(ComplexMatrix::Identity(2, 2));
  ComplexMatrix x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << s, s, i * s, -i * s;
  bs.bases.push_back(x);
  bs.bases.push_back(y);
  return bs;
}

BasisSet standard_only(int d) {
  BasisSet bs;
  bs.d = d;
  bs.bases.push_back(ComplexMatrix::Identity(d, d));
  return bs;
}

} // namespace

TEST(Design, SymmetricProjectorOracle) {
  for (int d : {2, 3, 4}) {
    const auto p = oracle::symmetric_projector(d);
    EXPECT_LT((p * p - p).norm(), 1e-14);
    EXPECT_NEAR(p.trace().real(), d * (d + 1) / 2.0, 1e-14);
  }
}

TEST(Design, ClosedFormHaarIntegralByMonteCarlo) {
  // E |<a,psi>|^2 |<b,psi>|^2 = (1 + |<a,b>|^2) / (d(d+1)) over Haar-random psi.
  std::mt19937_64 rng(2024);
  for (int d : {2, 3}) {
    const auto a = random_unit_vector(d, rng);
    const auto b = random_unit_vector(d, rng);
    const int samples = 400000;
    double sum = 0, sumsq = 0;
    for (int k = 0; k < samples; ++k) {
      const auto psi = random_unit_vector(d, rng);
      const double v = std::norm(a.dot(psi)) * std::norm(b.dot(psi));
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / samples;
    const double sigma = std::sqrt((sumsq / samples - mean * mean) / samples);
    const double exact = (1 + std::norm(a.dot(b))) / (d * (d + 1.0));
    EXPECT_LT(std::abs(mean - exact), 5 * sigma) << "d = " << d;
  }
}

TEST(Design, CharacterBasesCounts) {
  const auto b3 = character_bases(square_map(3));
  EXPECT_EQ(b3.d, 3);
  EXPECT_EQ(b3.bases.size(), 4u);

  const auto b5 = character_bases(square_map(5));
  EXPECT_EQ(b5.bases.size(), 6u);
  EXPECT_LT(unbiasedness_report(b5), 1e-12);

  const auto b6 = character_bases(evens_construction(6, square_map(5)));
  EXPECT_EQ(b6.bases.size(), 16u);

  const auto not_d1u = GroupFunction(AbelianGroup({4}), {GroupElement{{0}}, GroupElement{{1}}, GroupElement{{2}},
                                                        GroupElement{{3}}});
  EXPECT_THROW(character_bases(not_d1u), InvalidInput);
}

TEST(DesignProperty, CharacterBasesOrthonormalAndUnbiasedToStandard) {
  std::vector<GroupFunction> fs;
  for (std::int64_t d = 2; d <= 8; ++d)
    fs.push_back(build(d));
  SearchConfig cfg;
  for (std::int64_t d = 3; d <= 8; ++d) {
    auto r = search_min_order(d, cfg);
    ASSERT_TRUE(r.min_order);
    fs.push_back(*r.entries.back().function);
  }
  for (const auto &f : fs) {
    const auto bs = character_bases(f);
    EXPECT_LT(bs.max_gram_deviation(), tol::gram);
    for (std::size_t j = 1; j < bs.bases.size(); ++j) {
      const Eigen::MatrixXd mod = bs.bases[j].cwiseAbs();
      EXPECT_LT((mod.array() - 1 / std::sqrt(static_cast<double>(bs.d))).abs().maxCoeff(), 1e-12);
      for (Eigen::Index c = 0; c < bs.bases[j].cols(); ++c)
        EXPECT_NEAR(bs.bases[j].col(c).norm(), 1.0, tol::unit_norm);
    }
  }
}

TEST(Design, SolveWeightsMubD3) {
  const auto wd = solve_weights(character_bases(square_map(3)));
  EXPECT_TRUE(wd.certified);
  EXPECT_LT(wd.residual, 1e-10);
  for (double w : wd.basis_weights)
    EXPECT_NEAR(w, 1.0 / 12, 1e-12);
  EXPECT_NEAR(wd.total_weight(), 1.0, tol::normalization);

  // independent route: explicit Kronecker mixture against the symmetrized projector
  const auto mix = oracle::weighted_tensor_mixture(wd.basis_set.bases, wd.basis_weights);
  const Eigen::MatrixXcd target = oracle::symmetric_projector(3) / 6.0;
  EXPECT_LT((mix - target).norm(), 1e-12);
}

TEST(Design, SolveWeightsQubitMubs) {
  const auto wd = solve_weights(qubit_mubs());
  EXPECT_TRUE(wd.certified);
  EXPECT_LT(wd.residual, 1e-12);
  for (double w : wd.basis_weights)
    EXPECT_NEAR(w, 1.0 / 6, 1e-12);
  EXPECT_LT(haar_point_check(wd, 100), 1e-10);
}

TEST(Design, SingleBasisIsNotCertified) {
  for (int d : {2, 3, 5}) {
    const auto wd = solve_weights(standard_only(d));
    EXPECT_FALSE(wd.certified);
    EXPECT_NEAR(wd.basis_weights[0], 1.0 / d, 1e-14);
    const double expected_gap = (d - 1.0) / (d * (d + 1.0));
    EXPECT_NEAR(wd.potential_gap, expected_gap, 1e-14);
    EXPECT_NEAR(frame_potential_gap(wd), expected_gap, 1e-14);
    EXPECT_NEAR(wd.residual, std::sqrt(expected_gap), 1e-12);
  }
}

TEST(Design, PointDeviationStandardBasis) {
  // alpha = beta = e_1: 1/d against 2/(d(d+1))
  for (int d : {2, 3, 4}) {
    const auto wd = solve_weights(standard_only(d));
    const ComplexVector e1 = ComplexVector::Unit(d, 0);
    EXPECT_NEAR(point_deviation(wd, e1, e1), (d - 1.0) / (d * (d + 1.0)), 1e-15);
    EXPECT_GT(haar_point_check(wd, 200), 1e-3);
  }
  const auto wd = solve_weights(standard_only(3));
  EXPECT_THROW(point_deviation(wd, ComplexVector::Unit(2, 0), ComplexVector::Unit(3, 0)), ShapeError);
  EXPECT_THROW(haar_point_check(wd, 0), DomainError);
}

TEST(Design, RepeatedBasisHandledByMinimumNorm) {
  auto bs = qubit_mubs();
  bs.bases.push_back(bs.bases[1]); // X twice: Gram matrix is singular
  const auto wd = solve_weights(bs);
  EXPECT_TRUE(wd.certified);
  EXPECT_NEAR(wd.basis_weights[0], 1.0 / 6, 1e-10);
  EXPECT_NEAR(wd.basis_weights[2], 1.0 / 6, 1e-10);
  EXPECT_NEAR(wd.basis_weights[1] + wd.basis_weights[3], 1.0 / 6, 1e-10);
  EXPECT_GE(wd.basis_weights[1], 0.0);
  EXPECT_GE(wd.basis_weights[3], 0.0);
}

TEST(Design, ActiveSetClampsNegativeWeights) {
  // Z, X and a basis rotated slightly off X: the unconstrained optimum leans on
  // negative weights; the solver must keep them nonnegative and not certify.
  auto bs = qubit_mubs();
  const double t = 0.05;
  ComplexMatrix r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  bs.bases[2] = r * bs.bases[1];
  const auto wd = solve_weights(bs);
  for (double w : wd.basis_weights)
    EXPECT_GE(w, 0.0);
  EXPECT_NEAR(wd.total_weight(), 1.0, 1e-12);
  EXPECT_FALSE(wd.certified);
  EXPECT_GT(wd.residual, 1e-3);
}

TEST(Design, UnbiasednessReport) {
  EXPECT_LT(unbiasedness_report(character_bases(square_map(5))), 1e-10);
  EXPECT_GT(unbiasedness_report(character_bases(evens_construction(6, square_map(5)))), 1e-3);
  BasisSet twice = standard_only(4);
  twice.bases.push_back(twice.bases[0]);
  EXPECT_NEAR(unbiasedness_report(twice), 1 - 1.0 / 4, 1e-15);
  EXPECT_THROW(unbiasedness_report(standard_only(3)), DomainError);
}

TEST(DesignProperty, PrimeDimensionMubRecovery) {
  for (int d : {3, 5, 7, 11}) {
    const auto wd = solve_weights(character_bases(square_map(d)));
    EXPECT_TRUE(wd.certified);
    EXPECT_LT(wd.residual, 1e-9);
    for (double w : wd.basis_weights)
      EXPECT_NEAR(w, wd.basis_weights[0], 1e-10);
    EXPECT_LT(unbiasedness_report(wd.basis_set), 1e-9);
  }
}

TEST(DesignProperty, CertificationConsistency) {
  std::vector<BasisSet> instances;
  for (std::int64_t d : {2, 3, 4, 6, 8, 9})
    instances.push_back(character_bases(build(d)));
  instances.push_back(qubit_mubs());
  instances.push_back(standard_only(3));
  auto partial = character_bases(square_map(5));
  partial.bases.resize(3);
  instances.push_back(partial);
  for (auto &bs : instances) {
    const auto wd = solve_weights(bs);
    const bool by_residual = wd.residual <= 1e-9;
    EXPECT_EQ(by_residual, wd.potential_gap <= 1e-8);
    EXPECT_EQ(by_residual, haar_point_check(wd, 100) <= 1e-8);
    EXPECT_GE(wd.potential_gap, -1e-9);
    if (wd.certified) {
      EXPECT_NEAR(wd.total_weight(), 1.0, 1e-12);
    }
  }
}
