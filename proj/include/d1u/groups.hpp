#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numtheory.hpp"

namespace d1u {

/// Element of a finite abelian group: one residue per cyclic factor.
struct GroupElement {
  std::vector<int> residues;

  friend bool operator==(const GroupElement &, const GroupElement &) = default;
  friend auto operator<=>(const GroupElement &, const GroupElement &) = default;
};

/// Finite abelian group Z/n_1 x ... x Z/n_r in primary decomposition.
///
/// The factor list is always prime powers sorted ascending, so two groups
/// compare equal exactly when they are isomorphic. An empty factor list is
/// the trivial group.
class AbelianGroup {
public:
  AbelianGroup() = default;

  /// Accepts any factor list (e.g. {6}) and decomposes it; factors equal to 1
  /// are dropped. Residues given against the raw list can be translated with
  /// CanonicalMap.
  explicit AbelianGroup(const std::vector<int> &factors);

  const std::vector<int> &factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::int64_t order() const { return order_; }

  GroupElement zero() const { return GroupElement{std::vector<int>(rank(), 0)}; }

  bool contains(const GroupElement &e) const {
    if (e.residues.size() != rank())
      return false;
    for (std::size_t j = 0; j < rank(); ++j)
      if (e.residues[j] < 0 || e.residues[j] >= factors_[j])
        return false;
    return true;
  }

  /// Reduces arbitrary integers into an element; throws ShapeError on length mismatch.
  GroupElement element(const std::vector<std::int64_t> &values) const {
    if (values.size() != rank())
      throw ShapeError("element has " + std::to_string(values.size()) + " residues, group has " +
                       std::to_string(rank()) + " factors");
    GroupElement e{std::vector<int>(rank())};
    for (std::size_t j = 0; j < rank(); ++j)
      e.residues[j] = static_cast<int>(nt::mod(values[j], factors_[j]));
    return e;
  }

  GroupElement add(const GroupElement &u, const GroupElement &v) const {
    check(u);
    check(v);
    GroupElement r{std::vector<int>(rank())};
    for (std::size_t j = 0; j < rank(); ++j) {
      const int s = u.residues[j] + v.residues[j];
      r.residues[j] = s >= factors_[j] ? s - factors_[j] : s;
    }
    return r;
  }

  GroupElement neg(const GroupElement &u) const {
    check(u);
    GroupElement r{std::vector<int>(rank())};
    for (std::size_t j = 0; j < rank(); ++j)
      r.residues[j] = u.residues[j] == 0 ? 0 : factors_[j] - u.residues[j];
    return r;
  }

  GroupElement sub(const GroupElement &u, const GroupElement &v) const { return add(u, neg(v)); }

  /// k * u for any integer k (negative allowed).
  GroupElement scale(const GroupElement &u, std::int64_t k) const {
    check(u);
    GroupElement r{std::vector<int>(rank())};
    for (std::size_t j = 0; j < rank(); ++j)
      r.residues[j] = static_cast<int>(nt::mod(nt::mod(k, factors_[j]) * u.residues[j], factors_[j]));
    return r;
  }

  /// Mixed-radix index in [0, order), first factor least significant.
  std::size_t index_of(const GroupElement &e) const {
    check(e);
    std::size_t idx = 0;
    for (std::size_t j = rank(); j-- > 0;)
      idx = idx * static_cast<std::size_t>(factors_[j]) + static_cast<std::size_t>(e.residues[j]);
    return idx;
  }

  GroupElement at(std::size_t index) const {
    if (index >= static_cast<std::size_t>(order_))
      throw ShapeError("element index " + std::to_string(index) + " out of range");
    GroupElement e{std::vector<int>(rank())};
    for (std::size_t j = 0; j < rank(); ++j) {
      e.residues[j] = static_cast<int>(index % static_cast<std::size_t>(factors_[j]));
      index /= static_cast<std::size_t>(factors_[j]);
    }
    return e;
  }

  std::vector<GroupElement> elements() const {
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(order_));
    for (std::size_t i = 0; i < static_cast<std::size_t>(order_); ++i)
      out.push_back(at(i));
    return out;
  }

  /// Exponent of the group (lcm of the factors); 1 for the trivial group.
  std::int64_t exponent() const {
    std::int64_t l = 1;
    for (int n : factors_)
      l = std::lcm(l, static_cast<std::int64_t>(n));
    return l;
  }

  std::string to_string() const {
    if (factors_.empty())
      return "1";
    std::string s;
    for (std::size_t j = 0; j < rank(); ++j)
      s += (j ? " x Z/" : "Z/") + std::to_string(factors_[j]);
    return s;
  }

  void check(const GroupElement &e) const {
    if (e.residues.size() != rank())
      throw ShapeError("element has " + std::to_string(e.residues.size()) + " residues, group " + to_string() +
                       " has " + std::to_string(rank()) + " factors");
    for (std::size_t j = 0; j < rank(); ++j)
      if (e.residues[j] < 0 || e.residues[j] >= factors_[j])
        throw ShapeError("residue " + std::to_string(e.residues[j]) + " not reduced modulo " +
                         std::to_string(factors_[j]));
  }

  friend bool operator==(const AbelianGroup &a, const AbelianGroup &b) { return a.factors_ == b.factors_; }

private:
  friend class CanonicalMap;

  std::vector<int> factors_;
  std::int64_t order_ = 1;
};

/// Translates residues written against an arbitrary factor list (e.g. {6, 2}
/// or the concatenation of two groups' factors) into the canonical group.
class CanonicalMap {
public:
  explicit CanonicalMap(const std::vector<int> &raw_factors) : raw_(raw_factors) {
    struct Piece {
      int modulus;
      std::size_t source;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i < raw_.size(); ++i) {
      if (raw_[i] < 1)
        throw DomainError("cyclic factor must be positive, got " + std::to_string(raw_[i]));
      for (auto [p, e] : nt::factorize(raw_[i])) {
        std::int64_t pe = 1;
        for (int k = 0; k < e; ++k)
          pe *= p;
        pieces.push_back({static_cast<int>(pe), i});
      }
    }
    std::stable_sort(pieces.begin(), pieces.end(), [](const Piece &a, const Piece &b) { return a.modulus < b.modulus; });
    group_.order_ = 1;
    for (const auto &pc : pieces) {
      group_.factors_.push_back(pc.modulus);
      source_.push_back(pc.source);
      group_.order_ *= pc.modulus;
    }
  }

  const AbelianGroup &group() const { return group_; }
  const std::vector<int> &raw_factors() const { return raw_; }

  GroupElement map(const std::vector<int> &raw_residues) const {
    if (raw_residues.size() != raw_.size())
      throw ShapeError("element has " + std::to_string(raw_residues.size()) + " residues, expected " +
                       std::to_string(raw_.size()));
    GroupElement e{std::vector<int>(group_.rank())};
    for (std::size_t j = 0; j < group_.rank(); ++j)
      e.residues[j] = static_cast<int>(nt::mod(raw_residues[source_[j]], group_.factors_[j]));
    return e;
  }

private:
  std::vector<int> raw_;
  AbelianGroup group_;
  std::vector<std::size_t> source_;
};

inline AbelianGroup::AbelianGroup(const std::vector<int> &factors) : AbelianGroup(CanonicalMap(factors).group()) {}

/// G x H together with the map (g, h) -> canonical element.
class DirectProduct {
public:
  DirectProduct(const AbelianGroup &left, const AbelianGroup &right)
      : left_(left), right_(right), map_(concat(left.factors(), right.factors())) {}

  const AbelianGroup &group() const { return map_.group(); }

  GroupElement pair(const GroupElement &l, const GroupElement &r) const {
    left_.check(l);
    right_.check(r);
    std::vector<int> raw = l.residues;
    raw.insert(raw.end(), r.residues.begin(), r.residues.end());
    return map_.map(raw);
  }

private:
  static std::vector<int> concat(std::vector<int> a, const std::vector<int> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  AbelianGroup left_, right_;
  CanonicalMap map_;
};

inline GroupElement add(const AbelianGroup &g, const GroupElement &u, const GroupElement &v) { return g.add(u, v); }

/// One representative per isomorphism class of abelian groups of order n.
/// Classes come from partitions of each prime exponent; for every prime the
/// cyclic choice is listed first.
inline std::vector<AbelianGroup> enumerate_abelian_groups(std::int64_t n) {
  if (n < 1)
    throw DomainError("group order must be positive, got " + std::to_string(n));
  std::vector<std::vector<int>> acc{{}};
  for (auto [p, e] : nt::factorize(n)) {
    std::vector<std::vector<int>> next;
    for (const auto &prefix : acc)
      for (const auto &part : nt::partitions(e)) {
        auto f = prefix;
        for (int lambda : part) {
          std::int64_t pe = 1;
          for (int k = 0; k < lambda; ++k)
            pe *= p;
          f.push_back(static_cast<int>(pe));
        }
        next.push_back(std::move(f));
      }
    acc = std::move(next);
  }
  std::vector<AbelianGroup> out;
  out.reserve(acc.size());
  for (const auto &f : acc)
    out.emplace_back(f);
  return out;
}

/// exp(2 pi i sum_j index_j e_j / n_j). The phase is accumulated exactly as an
/// integer over the group exponent before the single call to polar().
inline std::complex<double> character_value(const AbelianGroup &g, const GroupElement &index, const GroupElement &e) {
  g.check(index);
  g.check(e);
  const std::int64_t ex = g.exponent();
  std::int64_t phase = 0;
  for (std::size_t j = 0; j < g.rank(); ++j) {
    const std::int64_t n = g.factors()[j];
    const std::int64_t term = (static_cast<std::int64_t>(index.residues[j]) * e.residues[j]) % n;
    phase = (phase + term * (ex / n)) % ex;
  }
  if (phase == 0)
    return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(ex));
}

/// A character of g, identified with its index element via self-duality.
class Character {
public:
  Character(AbelianGroup g, GroupElement index) : group_(std::move(g)), index_(std::move(index)) { group_.check(index_); }

  const GroupElement &index() const { return index_; }
  std::complex<double> operator()(const GroupElement &e) const { return character_value(group_, index_, e); }

private:
  AbelianGroup group_;
  GroupElement index_;
};

} // namespace d1u
