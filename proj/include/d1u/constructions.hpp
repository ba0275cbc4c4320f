#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "diffcalc.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "groups.hpp"
#include "numtheory.hpp"

namespace d1u {

/// x -> x^2 on Z/qZ for an odd prime q.
inline GroupFunction square_map(std::int64_t q) {
  if (q % 2 == 0 || !nt::is_prime(q))
    throw DomainError("square map needs an odd prime, got " + std::to_string(q));
  const AbelianGroup zq({static_cast<int>(q)});
  std::vector<GroupElement> values;
  values.reserve(static_cast<std::size_t>(q));
  for (std::int64_t x = 0; x < q; ++x)
    values.push_back(GroupElement{{static_cast<int>(x * x % q)}});
  return GroupFunction(zq, std::move(values));
}

/// x -> g^x from Z/qZ into the additive group of GF(q + 1), q + 1 a prime power.
inline GroupFunction exp_construction(std::int64_t q) {
  const auto pp = nt::prime_power(q + 1);
  if (q < 1 || !pp)
    throw DomainError("exponential construction needs q + 1 to be a prime power, got q = " + std::to_string(q));
  const FiniteField field(static_cast<int>(pp->first), pp->second);
  std::vector<GroupElement> values;
  values.reserve(static_cast<std::size_t>(q));
  // Walk the powers incrementally instead of calling exp_map per x.
  auto power = field.one();
  for (std::int64_t x = 0; x < q; ++x) {
    values.push_back(GroupElement{power.coeffs});
    power = field.mul(power, field.generator());
  }
  return GroupFunction(field.additive_group(), std::move(values));
}

/// phi_d(x) = phi(x) for 0 <= x <= d-1, with phi_d(d-1) = phi(0) when q = d-1.
inline GroupFunction restrict(const GroupFunction &phi, std::int64_t d) {
  const std::int64_t q = phi.domain_order();
  if (d < 1)
    throw DomainError("restriction target must be positive, got " + std::to_string(d));
  if (q < d - 1)
    throw DomainError("cannot restrict Z/" + std::to_string(q) + "Z to Z/" + std::to_string(d) + "Z: need q >= d - 1");
  std::vector<GroupElement> values;
  values.reserve(static_cast<std::size_t>(d));
  for (std::int64_t x = 0; x < d; ++x)
    values.push_back(phi(x)); // phi(q) wraps to phi(0)
  return GroupFunction(phi.codomain(), std::move(values));
}

/// Smallest prime not dividing d.
inline std::int64_t least_coprime_prime(std::int64_t d) {
  if (d < 2)
    throw DomainError("least coprime prime needs d >= 2, got " + std::to_string(d));
  std::int64_t p = 2;
  while (d % p == 0)
    p = nt::next_prime_at_least(p + 1);
  return p;
}

/// 0 on the lower half of Z/dZ, 1 on the upper half (values in Z/3Z).
inline int flag(std::int64_t d, std::int64_t x) {
  if (d < 2 || d % 2 != 0)
    throw DomainError("flag function needs an even d, got " + std::to_string(d));
  if (x < 0 || x >= d)
    throw DomainError("flag argument " + std::to_string(x) + " outside [0, " + std::to_string(d) + ")");
  return x >= d / 2 ? 1 : 0;
}

namespace detail {

inline void require_base(const GroupFunction &phi, std::int64_t d) {
  if (d < 2)
    throw DomainError("construction needs d >= 2, got " + std::to_string(d));
  if (phi.domain_order() < d - 1)
    throw DomainError("base domain Z/" + std::to_string(phi.domain_order()) + "Z too small for d = " +
                      std::to_string(d) + " (need q >= d - 1)");
  // Z/1Z has no nonzero shift, so it is vacuously d1u.
  if (phi.domain_order() >= 2 && !is_d1u(phi).is_d1u)
    throw InvalidInput("base function is not differentially 1-uniform");
}

// i -> (tag(i), phi_d(i)) into Z/tag_modulus x G.
template <class Tag>
GroupFunction tagged_product(std::int64_t d, const GroupFunction &phi, int tag_modulus, Tag tag) {
  const auto phi_d = restrict(phi, d);
  const AbelianGroup tag_group({tag_modulus});
  const DirectProduct prod(tag_group, phi.codomain());
  std::vector<GroupElement> values;
  values.reserve(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < d; ++i)
    values.push_back(prod.pair(tag_group.element({tag(i)}), phi_d(i)));
  return GroupFunction(prod.group(), std::move(values));
}

} // namespace detail

/// f(i) = (i mod p, phi_d(i)) into Z/pZ x G, p the least prime coprime to d.
inline GroupFunction dlogd_construction(std::int64_t d, const GroupFunction &phi) {
  detail::require_base(phi, d);
  const auto p = least_coprime_prime(d);
  return detail::tagged_product(d, phi, static_cast<int>(p), [](std::int64_t i) { return i; });
}

/// f(i) = (flag(i), phi_d(i)) into Z/3Z x G, d even.
inline GroupFunction evens_construction(std::int64_t d, const GroupFunction &phi) {
  if (d % 2 != 0)
    throw DomainError("even construction needs an even d, got " + std::to_string(d));
  detail::require_base(phi, d);
  return detail::tagged_product(d, phi, 3, [d](std::int64_t i) { return std::int64_t{flag(d, i)}; });
}

enum class Branch { Direct, Odd, Even };
enum class BaseFamily { OddPrimeSquare, PrimePowerExponential, UserSupplied };

inline std::string_view to_string(Branch b) {
  switch (b) {
  case Branch::Direct:
    return "direct";
  case Branch::Odd:
    return "odd";
  case Branch::Even:
    return "even";
  }
  return "?";
}

inline std::string_view to_string(BaseFamily f) {
  switch (f) {
  case BaseFamily::OddPrimeSquare:
    return "odd-prime-square";
  case BaseFamily::PrimePowerExponential:
    return "prime-power-exponential";
  case BaseFamily::UserSupplied:
    return "user-supplied";
  }
  return "?";
}

struct ComparisonBounds {
  double prime_gap = 0;          // 2(d + d^0.525) odd, 3(d + d^0.525) even
  std::int64_t chebyshev = 0;     // 4d
  std::int64_t prior = 0;         // ceil(3/4 (d-1)^2)
  std::int64_t dlogd_only = 0;    // p * C_base: the i -> (i mod p, phi_d(i)) product alone
  std::int64_t dlogd_p = 0;       // least prime coprime to d
};

struct ConstructionPlan {
  std::int64_t d = 0;
  Branch branch = Branch::Odd;
  std::optional<std::int64_t> p; // tag modulus of the odd branch
  std::int64_t q = 0;
  BaseFamily base_family = BaseFamily::OddPrimeSquare;
  std::int64_t base_order = 0; // codomain order of the base function
  AbelianGroup codomain;
  std::int64_t bound = 0;
  std::int64_t bases_count = 0;
  ComparisonBounds comparison;
};

struct BaseCandidate {
  std::int64_t q = 0;
  BaseFamily family = BaseFamily::OddPrimeSquare;
  std::int64_t order = 0;
};

/// Base functions available for domain sizes q in [max(2, d-1), 2d]: odd
/// primes (square map, order q) and q with q+1 a prime power (exponential,
/// order q+1). Ordered by (order, family, q).
inline std::optional<BaseCandidate> best_base(std::int64_t d) {
  std::optional<BaseCandidate> best;
  auto consider = [&](BaseCandidate c) {
    auto key = [](const BaseCandidate &b) { return std::tuple(b.order, static_cast<int>(b.family), b.q); };
    if (!best || key(c) < key(*best))
      best = c;
  };
  for (std::int64_t q = std::max<std::int64_t>(2, d - 1); q <= 2 * d; ++q) {
    if (q % 2 == 1 && nt::is_prime(q))
      consider({q, BaseFamily::OddPrimeSquare, q});
    if (nt::prime_power(q + 1))
      consider({q, BaseFamily::PrimePowerExponential, q + 1});
  }
  return best;
}

namespace detail {
inline AbelianGroup base_codomain(const BaseCandidate &c) {
  if (c.family == BaseFamily::OddPrimeSquare)
    return AbelianGroup({static_cast<int>(c.q)});
  const auto pp = *nt::prime_power(c.q + 1);
  return AbelianGroup(std::vector<int>(static_cast<std::size_t>(pp.second), static_cast<int>(pp.first)));
}
} // namespace detail

/// Chooses the construction with the smallest codomain for Z/dZ.
///
/// Odd primes d map to x^2 directly. Other odd d use the (i mod p, phi_d(i))
/// product (bound 2 C_base, since p = 2); even d use the flag product (bound
/// 3 C_base). The base is minimized over the window [d-1, 2d]; on equal
/// bounds the square family wins, then the smaller q.
inline ConstructionPlan plan(std::int64_t d) {
  if (d < 2)
    throw DomainError("plan needs d >= 2, got " + std::to_string(d));
  const auto base = best_base(d);
  if (!base)
    throw DomainError("no base function in window for d = " + std::to_string(d)); // Bertrand: unreachable

  ConstructionPlan pl;
  pl.d = d;
  const bool even = d % 2 == 0;
  const auto p = least_coprime_prime(d);

  pl.comparison.prime_gap = (even ? 3.0 : 2.0) * (static_cast<double>(d) + std::pow(static_cast<double>(d), 0.525));
  pl.comparison.chebyshev = 4 * d;
  pl.comparison.prior = ((d - 1) * (d - 1) * 3 + 3) / 4;
  pl.comparison.dlogd_p = p;
  pl.comparison.dlogd_only = p * base->order;

  if (!even && nt::is_prime(d)) {
    pl.branch = Branch::Direct;
    pl.q = d;
    pl.base_family = BaseFamily::OddPrimeSquare;
    pl.base_order = d;
    pl.codomain = AbelianGroup({static_cast<int>(d)});
  } else {
    pl.branch = even ? Branch::Even : Branch::Odd;
    if (!even)
      pl.p = p;
    pl.q = base->q;
    pl.base_family = base->family;
    pl.base_order = base->order;
    const AbelianGroup tag({even ? 3 : static_cast<int>(p)});
    pl.codomain = DirectProduct(tag, detail::base_codomain(*base)).group();
  }
  pl.bound = pl.codomain.order();
  pl.bases_count = pl.bound + 1;
  return pl;
}

/// Product construction for Z/dZ from a caller-supplied d1u base phi.
inline GroupFunction build_with_base(std::int64_t d, const GroupFunction &phi) {
  return d % 2 == 0 ? evens_construction(d, phi) : dlogd_construction(d, phi);
}

/// Executes plan(d). The result is re-checked before it is returned.
inline GroupFunction build(std::int64_t d) {
  const auto pl = plan(d);
  auto base = [&] {
    return pl.base_family == BaseFamily::OddPrimeSquare ? square_map(pl.q) : exp_construction(pl.q);
  };
  GroupFunction f = pl.branch == Branch::Direct ? square_map(d) : build_with_base(d, base());
  if (!is_d1u(f).is_d1u)
    throw std::logic_error("constructed function for d = " + std::to_string(d) + " failed the d1u check");
  return f;
}

} // namespace d1u
