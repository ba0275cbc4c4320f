#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

// Small-integer number theory by trial division. Inputs stay well below 2^40
// everywhere in the library, so nothing here needs to be clever.

namespace d1u::nt {

inline bool is_prime(std::int64_t n) {
  if (n < 2)
    return false;
  if (n % 2 == 0)
    return n == 2;
  for (std::int64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0)
      return false;
  return true;
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t f = 2; f * f <= n; ++f) {
    if (n % f != 0)
      continue;
    int e = 0;
    while (n % f == 0) {
      n /= f;
      ++e;
    }
    out.emplace_back(f, e);
  }
  if (n > 1)
    out.emplace_back(n, 1);
  return out;
}

/// If n = p^k with p prime and k >= 1, returns (p, k).
inline std::optional<std::pair<std::int64_t, int>> prime_power(std::int64_t n) {
  if (n < 2)
    return std::nullopt;
  auto fs = factorize(n);
  if (fs.size() != 1)
    return std::nullopt;
  return fs.front();
}

inline std::int64_t next_prime_at_least(std::int64_t n) {
  if (n <= 2)
    return 2;
  while (!is_prime(n))
    ++n;
  return n;
}

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  const auto r = a % n;
  return r < 0 ? r + n : r;
}

inline std::int64_t gcd(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a < 0 ? -a : a;
}

/// Number of integer partitions of n.
inline std::int64_t partition_count(int n) {
  std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= n; ++part)
    for (int s = part; s <= n; ++s)
      p[static_cast<std::size_t>(s)] += p[static_cast<std::size_t>(s - part)];
  return p[static_cast<std::size_t>(n)];
}

/// All partitions of n into positive parts, each in non-increasing order.
/// Output order: lexicographically descending (n first, 1+1+...+1 last).
inline std::vector<std::vector<int>> partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto &self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      cur.push_back(part);
      self(self, remaining - part, part);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

} // namespace d1u::nt
