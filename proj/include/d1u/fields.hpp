#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "groups.hpp"
#include "numtheory.hpp"

namespace d1u {

/// Polynomial coefficients c_0..c_{k-1} over GF(p), reduced modulo the field modulus.
struct FieldElement {
  std::vector<int> coeffs;

  friend bool operator==(const FieldElement &, const FieldElement &) = default;
};

/// GF(p^k) as GF(p)[x] / (modulus).
///
/// The modulus is the monic irreducible of degree k whose lower coefficients,
/// read as the base-p integer c_0 + c_1 p + ..., is smallest. The generator is
/// the primitive element with the smallest such encoding. Both choices are
/// therefore reproducible across runs and platforms.
class FiniteField {
public:
  static constexpr std::int64_t max_order = std::int64_t{1} << 20;

  FiniteField(int p, int k) : p_(p), k_(k) {
    if (!nt::is_prime(p))
      throw DomainError("field characteristic must be prime, got " + std::to_string(p));
    if (k < 1)
      throw DomainError("extension degree must be >= 1, got " + std::to_string(k));
    order_ = 1;
    for (int i = 0; i < k; ++i) {
      order_ *= p;
      if (order_ > max_order)
        throw CapacityError("field order " + std::to_string(p) + "^" + std::to_string(k) + " exceeds 2^20");
    }
    find_modulus();
    find_generator();
  }

  int characteristic() const { return p_; }
  int degree() const { return k_; }
  std::int64_t order() const { return order_; }
  std::int64_t multiplicative_order() const { return order_ - 1; }

  /// Monic modulus, coefficients c_0..c_k (c_k = 1).
  const std::vector<int> &modulus() const { return modulus_; }
  const FieldElement &generator() const { return generator_; }

  FieldElement zero() const { return FieldElement{std::vector<int>(static_cast<std::size_t>(k_), 0)}; }
  FieldElement one() const {
    auto e = zero();
    e.coeffs[0] = 1;
    return e;
  }

  /// Element with base-p encoding `code` (c_0 least significant).
  FieldElement from_index(std::int64_t code) const {
    if (code < 0 || code >= order_)
      throw DomainError("field element index out of range: " + std::to_string(code));
    auto e = zero();
    for (int i = 0; i < k_; ++i) {
      e.coeffs[static_cast<std::size_t>(i)] = static_cast<int>(code % p_);
      code /= p_;
    }
    return e;
  }

  std::int64_t index_of(const FieldElement &e) const {
    check(e);
    std::int64_t code = 0;
    for (int i = k_; i-- > 0;)
      code = code * p_ + e.coeffs[static_cast<std::size_t>(i)];
    return code;
  }

  FieldElement add(const FieldElement &a, const FieldElement &b) const {
    check(a);
    check(b);
    auto r = zero();
    for (std::size_t i = 0; i < r.coeffs.size(); ++i)
      r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % p_;
    return r;
  }

  FieldElement neg(const FieldElement &a) const {
    check(a);
    auto r = zero();
    for (std::size_t i = 0; i < r.coeffs.size(); ++i)
      r.coeffs[i] = (p_ - a.coeffs[i]) % p_;
    return r;
  }

  FieldElement sub(const FieldElement &a, const FieldElement &b) const { return add(a, neg(b)); }

  FieldElement mul(const FieldElement &a, const FieldElement &b) const {
    check(a);
    check(b);
    return mul_unchecked(a.coeffs, b.coeffs);
  }

  FieldElement pow(FieldElement base, std::int64_t e) const {
    check(base);
    if (e < 0) {
      base = inverse(base);
      e = -e;
    }
    auto result = one();
    while (e > 0) {
      if (e & 1)
        result = mul_unchecked(result.coeffs, base.coeffs);
      base = mul_unchecked(base.coeffs, base.coeffs);
      e >>= 1;
    }
    return result;
  }

  FieldElement inverse(const FieldElement &a) const {
    if (a == zero())
      throw DomainError("zero has no multiplicative inverse");
    return pow(a, order_ - 2);
  }

  /// Multiplicative order of a nonzero element.
  std::int64_t element_order(const FieldElement &a) const {
    if (a == zero())
      throw DomainError("zero has no multiplicative order");
    std::int64_t ord = multiplicative_order();
    for (auto [r, e] : nt::factorize(multiplicative_order())) {
      for (int i = 0; i < e; ++i) {
        if (pow(a, ord / r) == one())
          ord /= r;
        else
          break;
      }
    }
    return ord;
  }

  void check(const FieldElement &e) const {
    if (e.coeffs.size() != static_cast<std::size_t>(k_))
      throw ShapeError("field element has " + std::to_string(e.coeffs.size()) + " coefficients, expected " +
                       std::to_string(k_));
    for (int c : e.coeffs)
      if (c < 0 || c >= p_)
        throw ShapeError("field coefficient " + std::to_string(c) + " not reduced modulo " + std::to_string(p_));
  }

  /// Additive group (Z/pZ)^k the field is a vector space over.
  AbelianGroup additive_group() const { return AbelianGroup(std::vector<int>(static_cast<std::size_t>(k_), p_)); }

private:
  FieldElement mul_unchecked(const std::vector<int> &a, const std::vector<int> &b) const {
    const auto k = static_cast<std::size_t>(k_);
    std::vector<std::int64_t> prod(2 * k - 1, 0);
    for (std::size_t i = 0; i < k; ++i) {
      if (a[i] == 0)
        continue;
      for (std::size_t j = 0; j < k; ++j)
        prod[i + j] = (prod[i + j] + static_cast<std::int64_t>(a[i]) * b[j]) % p_;
    }
    // Reduce with the monic modulus: x^k = -(c_0 + ... + c_{k-1} x^{k-1}).
    for (std::size_t deg = prod.size(); deg-- > k;) {
      const std::int64_t lead = prod[deg];
      if (lead == 0)
        continue;
      prod[deg] = 0;
      for (std::size_t i = 0; i < k; ++i)
        prod[deg - k + i] = nt::mod(prod[deg - k + i] - lead * modulus_[i], p_);
    }
    FieldElement r{std::vector<int>(k)};
    for (std::size_t i = 0; i < k; ++i)
      r.coeffs[i] = static_cast<int>(prod[i]);
    return r;
  }

  // Remainder of monic-or-not `num` divided by monic `den`, both low-order first.
  std::vector<int> poly_rem(std::vector<int> num, const std::vector<int> &den) const {
    const std::size_t dd = den.size() - 1;
    for (std::size_t deg = num.size(); deg-- > dd;) {
      const int lead = num[deg];
      if (lead == 0)
        continue;
      for (std::size_t i = 0; i <= dd; ++i)
        num[deg - dd + i] = static_cast<int>(nt::mod(num[deg - dd + i] - static_cast<std::int64_t>(lead) * den[i], p_));
    }
    num.resize(dd);
    return num;
  }

  // Monic polynomial of degree `deg` whose lower coefficients encode `code`.
  std::vector<int> monic(int deg, std::int64_t code) const {
    std::vector<int> poly(static_cast<std::size_t>(deg) + 1, 0);
    for (int i = 0; i < deg; ++i) {
      poly[static_cast<std::size_t>(i)] = static_cast<int>(code % p_);
      code /= p_;
    }
    poly[static_cast<std::size_t>(deg)] = 1;
    return poly;
  }

  bool irreducible(const std::vector<int> &poly) const {
    const int deg = static_cast<int>(poly.size()) - 1;
    for (int dd = 1; 2 * dd <= deg; ++dd) {
      std::int64_t count = 1;
      for (int i = 0; i < dd; ++i)
        count *= p_;
      for (std::int64_t code = 0; code < count; ++code) {
        const auto rem = poly_rem(poly, monic(dd, code));
        if (std::all_of(rem.begin(), rem.end(), [](int c) { return c == 0; }))
          return false;
      }
    }
    return true;
  }

  void find_modulus() {
    const std::int64_t count = order_; // p^k choices for c_0..c_{k-1}
    for (std::int64_t code = 0; code < count; ++code) {
      auto poly = monic(k_, code);
      if (irreducible(poly)) {
        modulus_ = std::move(poly);
        return;
      }
    }
    throw DomainError("no irreducible polynomial found"); // unreachable for prime p
  }

  void find_generator() {
    for (std::int64_t code = 1; code < order_; ++code) {
      auto g = from_index(code);
      if (element_order(g) == multiplicative_order()) {
        generator_ = std::move(g);
        return;
      }
    }
    throw DomainError("no primitive element found"); // unreachable: GF(q)* is cyclic
  }

  int p_;
  int k_;
  std::int64_t order_ = 1;
  std::vector<int> modulus_;
  FieldElement generator_;
};

inline FiniteField make_field(int p, int k) { return FiniteField(p, k); }

/// generator^x as a vector in the additive group (Z/pZ)^k.
inline GroupElement exp_map(const FiniteField &field, std::int64_t x) {
  if (x < 0 || x >= field.multiplicative_order())
    throw DomainError("exponent " + std::to_string(x) + " outside [0, " +
                      std::to_string(field.multiplicative_order()) + ")");
  return GroupElement{field.pow(field.generator(), x).coeffs};
}

} // namespace d1u
