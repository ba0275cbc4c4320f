#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "groups.hpp"
#include "numtheory.hpp"

namespace d1u {

/// Total function Z/dZ -> codomain, stored as its value table f(0..d-1).
class GroupFunction {
public:
  GroupFunction(AbelianGroup codomain, std::vector<GroupElement> values)
      : codomain_(std::move(codomain)), values_(std::move(values)) {
    if (values_.empty())
      throw DomainError("function needs a nonempty domain");
    for (const auto &v : values_)
      codomain_.check(v);
  }

  std::int64_t domain_order() const { return static_cast<std::int64_t>(values_.size()); }
  const AbelianGroup &codomain() const { return codomain_; }
  const std::vector<GroupElement> &values() const { return values_; }

  /// f(x mod d).
  const GroupElement &operator()(std::int64_t x) const {
    return values_[static_cast<std::size_t>(nt::mod(x, domain_order()))];
  }

  friend bool operator==(const GroupFunction &, const GroupFunction &) = default;

private:
  AbelianGroup codomain_;
  std::vector<GroupElement> values_;
};

/// Shift a and two inputs x < x2 whose a-differentials coincide.
struct D1uWitness {
  std::int64_t a = 0;
  std::int64_t x = 0;
  std::int64_t x2 = 0;

  friend bool operator==(const D1uWitness &, const D1uWitness &) = default;
};

struct D1uVerdict {
  bool is_d1u = true;
  std::optional<D1uWitness> witness;

  friend bool operator==(const D1uVerdict &, const D1uVerdict &) = default;
};

namespace detail {
inline void check_shift(const GroupFunction &f, std::int64_t a, const char *what) {
  if (a < 0 || a >= f.domain_order())
    throw DomainError(std::string(what) + " " + std::to_string(a) + " outside [0, " +
                      std::to_string(f.domain_order()) + ")");
}
} // namespace detail

/// D_a f: x -> f(a + x) - f(x).
inline std::vector<GroupElement> differential(const GroupFunction &f, std::int64_t a) {
  detail::check_shift(f, a, "shift");
  const auto &g = f.codomain();
  std::vector<GroupElement> out;
  out.reserve(f.values().size());
  for (std::int64_t x = 0; x < f.domain_order(); ++x)
    out.push_back(g.sub(f(a + x), f(x)));
  return out;
}

/// D_{a1} D_{a2} f.
inline std::vector<GroupElement> second_differential(const GroupFunction &f, std::int64_t a1, std::int64_t a2) {
  detail::check_shift(f, a1, "shift");
  detail::check_shift(f, a2, "shift");
  const GroupFunction inner(f.codomain(), differential(f, a2));
  return differential(inner, a1);
}

/// Exhaustive d1u decision over shifts 1..ceil((d-1)/2).
///
/// Shifts a and d-a carry the same information (D_a f(x) = -D_{-a} f(a+x)),
/// so only the lower half is scanned. Values are compared through their
/// mixed-radix codes with a generation-stamped occupancy table, O(d) per shift.
/// On failure the witness is the lexicographically first (a, x, x2).
inline D1uVerdict is_d1u(const GroupFunction &f) {
  const std::int64_t d = f.domain_order();
  if (d < 2)
    throw DomainError("d1u check needs domain order >= 2, got " + std::to_string(d));
  const auto &g = f.codomain();
  const auto &factors = g.factors();
  const std::size_t rank = g.rank();
  const auto n = static_cast<std::size_t>(d);

  // residues laid out x-major for the inner loop
  std::vector<int> res(n * rank);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < rank; ++j)
      res[x * rank + j] = f.values()[x].residues[j];

  auto diff_code = [&](std::size_t x, std::size_t y) {
    std::size_t code = 0;
    for (std::size_t j = rank; j-- > 0;) {
      int r = res[y * rank + j] - res[x * rank + j];
      if (r < 0)
        r += factors[j];
      code = code * static_cast<std::size_t>(factors[j]) + static_cast<std::size_t>(r);
    }
    return code;
  };

  std::vector<std::int64_t> stamp(static_cast<std::size_t>(g.order()), -1);
  const std::int64_t half = d / 2; // == ceil((d-1)/2)
  for (std::int64_t a = 1; a <= half; ++a) {
    bool clash = false;
    for (std::size_t x = 0; x < n; ++x) {
      const auto code = diff_code(x, (x + static_cast<std::size_t>(a)) % n);
      if (stamp[code] == a) {
        clash = true;
        break;
      }
      stamp[code] = a;
    }
    if (!clash)
      continue;

    // Slow path: pick the smallest x that has a later duplicate, paired with
    // the first such duplicate.
    std::vector<std::int64_t> first(static_cast<std::size_t>(g.order()), -1);
    D1uWitness best{a, d, d};
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      const auto code = diff_code(x2, (x2 + static_cast<std::size_t>(a)) % n);
      if (first[code] < 0) {
        first[code] = static_cast<std::int64_t>(x2);
      } else if (first[code] < best.x) {
        best.x = first[code];
        best.x2 = static_cast<std::int64_t>(x2);
      }
    }
    return D1uVerdict{false, best};
  }
  return D1uVerdict{true, std::nullopt};
}

/// Definition-level oracle: for every a != 0 and every b in the codomain,
/// count the solutions of f(x + a) - f(x) = b. Same verdict and witness
/// convention as is_d1u, but shares none of its machinery.
inline D1uVerdict is_d1u_bruteforce(const GroupFunction &f) {
  const std::int64_t d = f.domain_order();
  if (d < 2)
    throw DomainError("d1u check needs domain order >= 2, got " + std::to_string(d));
  const auto &g = f.codomain();
  const auto elements = g.elements();
  for (std::int64_t a = 1; a < d; ++a) {
    std::optional<D1uWitness> best;
    for (const auto &b : elements) {
      std::vector<std::int64_t> solutions;
      for (std::int64_t x = 0; x < d; ++x)
        if (g.sub(f(x + a), f(x)) == b)
          solutions.push_back(x);
      if (solutions.size() > 1) {
        D1uWitness w{a, solutions[0], solutions[1]};
        if (!best || std::pair(w.x, w.x2) < std::pair(best->x, best->x2))
          best = w;
      }
    }
    if (best)
      return D1uVerdict{false, best};
  }
  return D1uVerdict{true, std::nullopt};
}

/// Checks D_{ra} f(x) = sum_{i=0}^{r-1} D_a f(ia + x) for every x. For r < 0
/// the sum is read as -sum_{i=r}^{-1}. Holds for every f; exposed as a self-test.
inline bool iterate_identity_check(const GroupFunction &f, std::int64_t a, std::int64_t r) {
  const std::int64_t d = f.domain_order();
  if (nt::mod(a, d) == 0)
    throw DomainError("iteration identity needs a nonzero shift");
  const auto &g = f.codomain();
  auto Da = [&](std::int64_t x) { return g.sub(f(a + x), f(x)); };
  for (std::int64_t x = 0; x < d; ++x) {
    const auto lhs = g.sub(f(r * a + x), f(x));
    auto rhs = g.zero();
    if (r >= 0) {
      for (std::int64_t i = 0; i < r; ++i)
        rhs = g.add(rhs, Da(i * a + x));
    } else {
      for (std::int64_t i = r; i < 0; ++i)
        rhs = g.sub(rhs, Da(i * a + x));
    }
    if (!(lhs == rhs))
      return false;
  }
  return true;
}

} // namespace d1u
