#include <gtest/gtest.h>

#include "d1u/constructions.hpp"
#include "d1u/diffcalc.hpp"
#include "d1u/fields.hpp"
#include "oracles.hpp"

using namespace d1u;

TEST(Fields, PrimeFieldGenerator) {
  const auto f7 = make_field(7, 1);
  EXPECT_EQ(f7.generator(), (FieldElement{{3}}));
  // 3 is the smallest residue of full order mod 7
  EXPECT_EQ(oracle::multiplicative_order_mod(2, 7), 3);
  EXPECT_EQ(oracle::multiplicative_order_mod(3, 7), 6);

  EXPECT_EQ(make_field(5, 1).generator(), (FieldElement{{2}}));
}

TEST(Fields, GF4Modulus) {
  const auto f4 = make_field(2, 2);
  EXPECT_EQ(f4.modulus(), (std::vector<int>{1, 1, 1}));
}

TEST(Fields, GF9GeneratorOrder) {
  const auto f9 = make_field(3, 2);
  EXPECT_EQ(f9.modulus(), (std::vector<int>{1, 0, 1})); // x^2 + 1
  // order by stepping through powers
  auto x = f9.generator();
  std::int64_t k = 1;
  while (!(x == f9.one())) {
    x = f9.mul(x, f9.generator());
    ++k;
  }
  EXPECT_EQ(k, 8);
}

TEST(Fields, Errors) {
  EXPECT_THROW(make_field(4, 1), DomainError);
  EXPECT_THROW(make_field(1, 3), DomainError);
  EXPECT_THROW(make_field(2, 21), CapacityError);
  EXPECT_NO_THROW(make_field(2, 20));
  EXPECT_THROW(exp_map(make_field(5, 1), 4), DomainError);
  EXPECT_THROW(exp_map(make_field(5, 1), -1), DomainError);
}

TEST(Fields, ExpMapExamples) {
  const auto f7 = make_field(7, 1);
  const std::vector<int> expected7{1, 3, 2, 6, 4, 5};
  for (int x = 0; x < 6; ++x)
    EXPECT_EQ(exp_map(f7, x), GroupElement{{expected7[static_cast<std::size_t>(x)]}});

  const auto f5 = make_field(5, 1);
  const std::vector<int> expected5{1, 2, 4, 3};
  for (int x = 0; x < 4; ++x)
    EXPECT_EQ(exp_map(f5, x), GroupElement{{expected5[static_cast<std::size_t>(x)]}});

  for (auto [p, k] : {std::pair{2, 3}, {3, 2}, {5, 2}})
    EXPECT_EQ(exp_map(make_field(p, k), 0).residues, make_field(p, k).one().coeffs);
}

TEST(Fields, AxiomsExhaustiveUpTo64) {
  for (std::int64_t q = 2; q <= 64; ++q) {
    const auto pp = nt::prime_power(q);
    if (!pp)
      continue;
    const FiniteField f(static_cast<int>(pp->first), pp->second);
    std::vector<FieldElement> el;
    for (std::int64_t i = 0; i < q; ++i)
      el.push_back(f.from_index(i));
    for (const auto &a : el) {
      ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
      ASSERT_EQ(f.mul(a, f.one()), a);
      if (!(a == f.zero())) {
        ASSERT_EQ(f.mul(a, f.inverse(a)), f.one()) << "q = " << q;
      }
      for (const auto &b : el) {
        ASSERT_EQ(f.mul(a, b), f.mul(b, a));
        for (std::size_t k = 0; k < el.size(); k += 3) {
          const auto &c = el[k];
          ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c))) << "q = " << q;
          ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        }
      }
    }
    // generator has full order and its powers cover the nonzero elements
    EXPECT_EQ(f.element_order(f.generator()), q - 1);
    std::vector<bool> seen(static_cast<std::size_t>(q), false);
    for (std::int64_t x = 0; x < q - 1; ++x)
      seen[static_cast<std::size_t>(f.index_of(f.pow(f.generator(), x)))] = true;
    EXPECT_FALSE(seen[0]);
    EXPECT_EQ(std::count(seen.begin(), seen.end(), true), q - 1);
  }
}

TEST(Fields, ModulusIsIrreducibleByRootAndFactorScan) {
  // For k <= 3 irreducible <=> no root; checked by plugging every element of GF(p).
  for (auto [p, k] : {std::pair{2, 2}, {2, 3}, {3, 2}, {3, 3}, {5, 2}, {7, 3}}) {
    const auto f = make_field(p, k);
    const auto &m = f.modulus();
    for (int r = 0; r < p; ++r) {
      std::int64_t val = 0;
      for (std::size_t i = m.size(); i-- > 0;)
        val = (val * r + m[i]) % p;
      EXPECT_NE(val, 0) << "root " << r << " of modulus for GF(" << p << "^" << k << ")";
    }
  }
}

TEST(Fields, ExpFunctionIsD1uUpTo512) {
  for (std::int64_t q1 = 3; q1 <= 512; ++q1) {
    if (!nt::prime_power(q1))
      continue;
    const auto phi = exp_construction(q1 - 1);
    if (phi.domain_order() < 2)
      continue;
    ASSERT_TRUE(is_d1u(phi).is_d1u) << "p^k = " << q1;
    EXPECT_EQ(phi.codomain().order(), q1);
  }
}
