#include <random>

#include <gtest/gtest.h>

#include "d1u/constructions.hpp"
#include "d1u/diffcalc.hpp"
#include "oracles.hpp"

using namespace d1u;

namespace {

GroupFunction cyclic(int n, const std::vector<int> &vals) {
  std::vector<GroupElement> v;
  for (int x : vals)
    v.push_back(GroupElement{{x}});
  return GroupFunction(AbelianGroup({n}), v);
}

std::vector<GroupElement> cyc(const std::vector<int> &vals) {
  std::vector<GroupElement> v;
  for (int x : vals)
    v.push_back(GroupElement{{x}});
  return v;
}

GroupFunction square5() { return cyclic(5, {0, 1, 4, 4, 1}); }
GroupFunction identity4() { return cyclic(4, {0, 1, 2, 3}); }

// A mix of random functions and (possibly perturbed) d1u functions.
GroupFunction sample(std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> dd(2, 24);
  const int d = dd(rng);
  const int kind = static_cast<int>(rng() % 3);
  if (kind > 0 && d <= 10) {
    auto f = build(d);
    if (f.codomain().order() <= 30) {
      if (kind == 2) {
        auto vals = f.values();
        const auto x = rng() % vals.size();
        vals[x] = f.codomain().at(rng() % static_cast<std::size_t>(f.codomain().order()));
        return GroupFunction(f.codomain(), vals);
      }
      return f;
    }
  }
  std::uniform_int_distribution<int> on(std::max(2, d - 3), 30);
  const auto groups = enumerate_abelian_groups(on(rng));
  const auto &g = groups[rng() % groups.size()];
  return oracle::random_function(d, g, rng);
}

} // namespace

TEST(Diffcalc, DifferentialExamples) {
  EXPECT_EQ(differential(square5(), 1), cyc({1, 3, 0, 2, 4}));
  EXPECT_EQ(differential(square5(), 0), cyc({0, 0, 0, 0, 0}));
  EXPECT_EQ(differential(identity4(), 1), cyc({1, 1, 1, 1}));
  EXPECT_THROW(differential(square5(), 5), DomainError);
  EXPECT_THROW(differential(square5(), -1), DomainError);
}

TEST(Diffcalc, SecondDifferentialExamples) {
  EXPECT_EQ(second_differential(square5(), 1, 1), cyc({2, 2, 2, 2, 2}));
  EXPECT_EQ(second_differential(square5(), 0, 3), cyc({0, 0, 0, 0, 0}));
  // x -> 2x into Z/8 is a homomorphism from Z/4
  const auto h = cyclic(8, {0, 2, 4, 6});
  for (int a1 = 1; a1 < 4; ++a1)
    for (int a2 = 1; a2 < 4; ++a2)
      EXPECT_EQ(second_differential(h, a1, a2), cyc({0, 0, 0, 0}));
}

TEST(Diffcalc, CheckerExamples) {
  EXPECT_EQ(is_d1u(square5()), (D1uVerdict{true, std::nullopt}));
  EXPECT_EQ(is_d1u(identity4()), (D1uVerdict{false, D1uWitness{1, 0, 1}}));
  EXPECT_EQ(is_d1u(cyclic(5, {1, 2, 4, 3})), (D1uVerdict{true, std::nullopt}));
  for (const auto &f : {square5(), identity4(), cyclic(5, {1, 2, 4, 3})})
    EXPECT_EQ(is_d1u(f), is_d1u_bruteforce(f));
  EXPECT_THROW(is_d1u(cyclic(3, {1})), DomainError);
  EXPECT_THROW(is_d1u_bruteforce(cyclic(3, {1})), DomainError);
}

TEST(Diffcalc, WitnessIsLexicographicallyFirst) {
  // D_1 of [0,1,3,4] in Z/7 is [1,2,1,3]
  const auto f = cyclic(7, {0, 1, 3, 4});
  const auto v = is_d1u(f);
  ASSERT_FALSE(v.is_d1u);
  EXPECT_EQ(*v.witness, (D1uWitness{1, 0, 2}));
  EXPECT_EQ(v, is_d1u_bruteforce(f));
  const auto diffs = differential(f, v.witness->a);
  EXPECT_EQ(diffs[static_cast<std::size_t>(v.witness->x)], diffs[static_cast<std::size_t>(v.witness->x2)]);
}

TEST(Diffcalc, IterationIdentityExamples) {
  EXPECT_TRUE(iterate_identity_check(square5(), 1, 3));
  std::mt19937_64 rng(7);
  const auto f = oracle::random_function(12, AbelianGroup({4, 5}), rng);
  EXPECT_TRUE(iterate_identity_check(f, 5, 2));
  EXPECT_TRUE(iterate_identity_check(f, 7, 1));
  EXPECT_TRUE(iterate_identity_check(f, 7, -3));
  EXPECT_TRUE(iterate_identity_check(f, 7, 0));
  EXPECT_THROW(iterate_identity_check(f, 0, 2), DomainError);
}

TEST(DiffcalcProperty, OracleEquivalence) {
  std::mt19937_64 rng(20240611);
  int positives = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const auto f = sample(rng);
    const auto fast = is_d1u(f);
    ASSERT_EQ(fast, is_d1u_bruteforce(f)) << "trial " << trial;
    ASSERT_EQ(fast.is_d1u, oracle::is_d1u_by_counting(f.codomain(), [&] {
                std::vector<int> idx;
                for (const auto &v : f.values())
                  idx.push_back(static_cast<int>(f.codomain().index_of(v)));
                return idx;
              }()));
    if (fast.is_d1u)
      ++positives;
    else {
      const auto diffs = differential(f, fast.witness->a);
      ASSERT_LT(fast.witness->x, fast.witness->x2);
      ASSERT_EQ(diffs[static_cast<std::size_t>(fast.witness->x)], diffs[static_cast<std::size_t>(fast.witness->x2)]);
    }
  }
  EXPECT_GT(positives, 50);
}

TEST(DiffcalcProperty, WrapAroundSymmetry) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = sample(rng);
    const auto d = f.domain_order();
    const auto &g = f.codomain();
    for (std::int64_t a = 1; a < d; ++a) {
      const auto da = differential(f, a);
      const auto dma = differential(f, d - a);
      for (std::int64_t x = 0; x < d; ++x)
        ASSERT_EQ(da[static_cast<std::size_t>(x)], g.neg(dma[static_cast<std::size_t>((a + x) % d)]));
    }
  }
}

TEST(DiffcalcProperty, SecondDifferentialCharacterization) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    auto f = sample(rng);
    if (f.domain_order() > 12)
      continue;
    const auto d = f.domain_order();
    bool nowhere_zero = true;
    for (std::int64_t a1 = 1; a1 < d && nowhere_zero; ++a1)
      for (std::int64_t a2 = 1; a2 < d && nowhere_zero; ++a2)
        for (const auto &v : second_differential(f, a1, a2))
          if (v == f.codomain().zero())
            nowhere_zero = false;
    ASSERT_EQ(nowhere_zero, is_d1u(f).is_d1u);
  }
}

TEST(DiffcalcProperty, PigeonholeAndTranslationInvariance) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = sample(rng);
    const auto &g = f.codomain();
    const auto d = f.domain_order();
    const bool base = is_d1u(f).is_d1u;
    if (base) {
      ASSERT_GE(g.order(), d);
    }

    const auto c = g.at(rng() % static_cast<std::size_t>(g.order()));
    // homomorphism Z/d -> g: x -> x * h1 with d * h1 = 0
    std::vector<GroupElement> torsion;
    for (const auto &e : g.elements())
      if (g.scale(e, d) == g.zero())
        torsion.push_back(e);
    const auto &h1 = torsion[rng() % torsion.size()];

    std::vector<GroupElement> shifted, twisted;
    for (std::int64_t x = 0; x < d; ++x) {
      shifted.push_back(g.add(f(x), c));
      twisted.push_back(g.add(f(x), g.scale(h1, x)));
    }
    ASSERT_EQ(is_d1u(GroupFunction(g, shifted)).is_d1u, base);
    ASSERT_EQ(is_d1u(GroupFunction(g, twisted)).is_d1u, base);
  }
}

TEST(DiffcalcProperty, IterationIdentityRandom) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto f = sample(rng);
    const auto d = f.domain_order();
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(d - 1));
    const std::int64_t r = static_cast<std::int64_t>(rng() % 41) - 20;
    ASSERT_TRUE(iterate_identity_check(f, a, r));
  }
}
