#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "diffcalc.hpp"
#include "errors.hpp"
#include "groups.hpp"

namespace d1u {

enum class ValueOrder { Natural, LeastConstraining };

struct SearchConfig {
  double time_budget = 60.0; // seconds, whole call
  std::int64_t min_order = 0; // 0 means d
  std::int64_t max_order = 0; // 0 means 4d
  bool normalize = true;        // fix f(0) = 0
  bool canonical_first = true;  // f(1) residues restricted to divisors of each factor
  std::uint64_t seed = 0;       // 0: deterministic, no restarts
  ValueOrder value_order = ValueOrder::LeastConstraining;
  unsigned workers = 1;         // used only when seed == 0
};

enum class SearchStatus { Found, Exhausted, Timeout };
enum class OrderVerdict { Found, Exhausted, Inconclusive };

inline std::string_view to_string(SearchStatus s) {
  switch (s) {
  case SearchStatus::Found:
    return "FOUND";
  case SearchStatus::Exhausted:
    return "EXHAUSTED";
  case SearchStatus::Timeout:
    return "TIMEOUT";
  }
  return "?";
}

inline std::string_view to_string(OrderVerdict v) {
  switch (v) {
  case OrderVerdict::Found:
    return "FOUND";
  case OrderVerdict::Exhausted:
    return "EXHAUSTED";
  case OrderVerdict::Inconclusive:
    return "INCONCLUSIVE";
  }
  return "?";
}

struct GroupSearchResult {
  AbelianGroup group;
  SearchStatus status = SearchStatus::Timeout;
  std::optional<GroupFunction> function;
  std::int64_t nodes = 0;
  double elapsed = 0;
  bool pigeonhole_pruned = false;
};

struct OrderReport {
  std::int64_t order = 0;
  OrderVerdict verdict = OrderVerdict::Inconclusive;
};

struct SearchOutcome {
  std::int64_t d = 0;
  std::vector<GroupSearchResult> entries;
  std::vector<OrderReport> orders;
  std::optional<std::int64_t> min_order; // first order with a FOUND
  std::int64_t nodes = 0;
  double elapsed = 0;
};

namespace detail {

/// Depth-first assignment of f(0), f(1), ... over codomain element codes.
///
/// For every shift a in 1..d/2 an occupancy row records which values of
/// D_a f are already taken. Placing f(x) determines, for each y < x, the
/// entry D_{x-y} f(y) = f(x) - f(y) and (wrapping) D_{d-x+y} f(x) = f(y) - f(x);
/// whichever of the two shifts lies in the lower half gets the mark. Every
/// difference of the final function is thus checked as soon as both of its
/// endpoints are known, wrap-arounds included.
class Searcher {
public:
  enum class Result { Found, Exhausted, Aborted };

  Searcher(std::int64_t d, const AbelianGroup &g, const SearchConfig &cfg)
      : d_(static_cast<int>(d)), n_(static_cast<int>(g.order())), group_(g), cfg_(cfg) {
    const auto elems = g.elements();
    sub_.resize(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u)
      for (int v = 0; v < n_; ++v)
        sub_[idx(u, v)] = static_cast<int>(g.index_of(g.sub(elems[static_cast<std::size_t>(u)], elems[static_cast<std::size_t>(v)])));
    for (int v = 0; v < n_; ++v) {
      const auto &r = elems[static_cast<std::size_t>(v)].residues;
      bool canon = true;
      for (std::size_t j = 0; j < g.rank(); ++j)
        if (r[j] != 0 && nt::gcd(r[j], g.factors()[j]) != r[j])
          canon = false;
      if (canon)
        canonical_.push_back(v);
    }
  }

  /// Explores the top-level branches listed in `branches` (values of the
  /// first free position), stopping on first solution, deadline, node limit,
  /// or when `cancel` returns true.
  template <class Cancel>
  Result run(const std::vector<int> &branches, std::chrono::steady_clock::time_point deadline,
             std::int64_t node_limit, std::uint64_t shuffle_seed, Cancel &&cancel) {
    reset();
    deadline_ = deadline;
    node_limit_ = node_limit;
    rng_.seed(shuffle_seed);
    randomize_ = shuffle_seed != 0;
    nodes_ = 0;
    aborted_ = false;
    int x0 = 0;
    if (cfg_.normalize) {
      f_[0] = 0;
      x0 = 1;
    }
    if (x0 >= d_)
      return Result::Found;
    for (int v : branches) {
      if (cancel())
        return Result::Aborted;
      const auto m0 = marks_.size();
      if (!place(x0, v))
        continue;
      ++nodes_;
      if (descend(x0 + 1, cancel))
        return Result::Found;
      undo(m0);
      if (aborted_)
        return Result::Aborted;
    }
    return Result::Exhausted;
  }

  /// Candidate values for the first free position.
  std::vector<int> top_branches() const {
    const bool restrict_first = cfg_.normalize && cfg_.canonical_first;
    if (restrict_first)
      return canonical_;
    std::vector<int> all(static_cast<std::size_t>(n_));
    std::iota(all.begin(), all.end(), 0);
    return all;
  }

  GroupFunction solution() const {
    std::vector<GroupElement> values;
    values.reserve(f_.size());
    for (int v : f_)
      values.push_back(group_.at(static_cast<std::size_t>(v)));
    return GroupFunction(group_, std::move(values));
  }

  std::int64_t nodes() const { return nodes_; }

private:
  std::size_t idx(int u, int v) const { return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v); }

  void reset() {
    f_.assign(static_cast<std::size_t>(d_), 0);
    used_.assign(static_cast<std::size_t>(d_ / 2 + 1) * static_cast<std::size_t>(n_), 0);
    marks_.clear();
  }

  bool mark(std::size_t cell) {
    if (used_[cell])
      return false;
    used_[cell] = 1;
    marks_.push_back(cell);
    return true;
  }

  void undo(std::size_t m0) {
    while (marks_.size() > m0) {
      used_[marks_.back()] = 0;
      marks_.pop_back();
    }
  }

  bool place(int x, int v) {
    const auto m0 = marks_.size();
    for (int y = 0; y < x; ++y) {
      const int delta = x - y;
      const int fy = f_[static_cast<std::size_t>(y)];
      if (2 * delta <= d_ && !mark(idx(delta, sub_[idx(v, fy)]))) {
        undo(m0);
        return false;
      }
      if (2 * delta >= d_ && !mark(idx(d_ - delta, sub_[idx(fy, v)]))) {
        undo(m0);
        return false;
      }
    }
    f_[static_cast<std::size_t>(x)] = v;
    return true;
  }

  int count_options(int x) {
    int count = 0;
    for (int w = 0; w < n_; ++w) {
      const auto m0 = marks_.size();
      if (place(x, w)) {
        ++count;
        undo(m0);
      }
    }
    return count;
  }

  std::vector<int> ordered_candidates(int x) {
    struct Cand {
      int value;
      int score;
      std::uint64_t tie;
    };
    std::vector<Cand> cands;
    for (int v = 0; v < n_; ++v) {
      const auto m0 = marks_.size();
      if (!place(x, v))
        continue;
      int score = 0;
      if (cfg_.value_order == ValueOrder::LeastConstraining && x + 1 < d_) {
        score = count_options(x + 1);
        if (score == 0) { // forward check: next position has no value left
          undo(m0);
          continue;
        }
      }
      undo(m0);
      cands.push_back({v, score, randomize_ ? rng_() : static_cast<std::uint64_t>(v)});
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand &a, const Cand &b) {
      return a.score != b.score ? a.score > b.score : a.tie < b.tie;
    });
    std::vector<int> out;
    out.reserve(cands.size());
    for (const auto &c : cands)
      out.push_back(c.value);
    return out;
  }

  template <class Cancel> bool over_limit(Cancel &cancel) {
    if (node_limit_ > 0 && nodes_ >= node_limit_)
      return true;
    if ((nodes_ & 1023) == 0 && (std::chrono::steady_clock::now() >= deadline_ || cancel()))
      return true;
    return false;
  }

  template <class Cancel> bool descend(int x, Cancel &cancel) {
    if (x == d_)
      return true;
    for (int v : ordered_candidates(x)) {
      if (over_limit(cancel)) {
        aborted_ = true;
        return false;
      }
      const auto m0 = marks_.size();
      place(x, v);
      ++nodes_;
      if (descend(x + 1, cancel))
        return true;
      undo(m0);
      if (aborted_)
        return false;
    }
    return false;
  }

  int d_;
  int n_;
  AbelianGroup group_;
  SearchConfig cfg_;
  std::vector<int> sub_;
  std::vector<int> canonical_;
  std::vector<int> f_;
  std::vector<unsigned char> used_;
  std::vector<std::size_t> marks_;
  std::chrono::steady_clock::time_point deadline_;
  std::int64_t node_limit_ = 0;
  std::int64_t nodes_ = 0;
  bool aborted_ = false;
  bool randomize_ = false;
  std::mt19937_64 rng_;
};

// 1, 1, 2, 1, 1, 2, 4, 1, ...
inline std::int64_t luby(std::int64_t i) {
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t top = (std::int64_t{1} << k) - 1;
    if (i == top)
      return std::int64_t{1} << (k - 1);
    if (i < top)
      return luby(i - (std::int64_t{1} << (k - 1)) + 1);
  }
}

inline constexpr std::int64_t max_search_order = 4096;
inline constexpr std::int64_t restart_unit = 10000;

} // namespace detail

/// Backtracking search for a d1u function Z/dZ -> g within cfg.time_budget seconds.
inline GroupSearchResult search_group(std::int64_t d, const AbelianGroup &g, const SearchConfig &cfg) {
  using clock = std::chrono::steady_clock;
  if (d < 2)
    throw DomainError("search needs d >= 2, got " + std::to_string(d));
  GroupSearchResult res;
  res.group = g;
  if (g.order() < d) {
    res.status = SearchStatus::Exhausted;
    res.pigeonhole_pruned = true;
    return res;
  }
  if (g.order() > detail::max_search_order)
    throw CapacityError("search codomain order " + std::to_string(g.order()) + " exceeds " +
                        std::to_string(detail::max_search_order));

  const auto start = clock::now();
  const auto deadline = start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(cfg.time_budget));
  auto finish = [&](detail::Searcher::Result r, const detail::Searcher *s) {
    res.elapsed = std::chrono::duration<double>(clock::now() - start).count();
    if (r == detail::Searcher::Result::Found) {
      res.status = SearchStatus::Found;
      res.function = s->solution();
      if (!is_d1u_bruteforce(*res.function).is_d1u)
        throw std::logic_error("search produced a function that fails the d1u oracle");
    } else {
      res.status = r == detail::Searcher::Result::Exhausted ? SearchStatus::Exhausted : SearchStatus::Timeout;
    }
    return res;
  };

  if (cfg.seed != 0) {
    // Luby restarts with reshuffled tie-breaks; a restart that finishes under
    // its node limit has covered the whole space.
    detail::Searcher s(d, g, cfg);
    std::mt19937_64 seeder(cfg.seed);
    for (std::int64_t i = 1;; ++i) {
      auto r = s.run(s.top_branches(), deadline, detail::restart_unit * detail::luby(i), seeder() | 1,
                     [] { return false; });
      res.nodes += s.nodes();
      if (r != detail::Searcher::Result::Aborted)
        return finish(r, &s);
      if (clock::now() >= deadline)
        return finish(r, &s);
    }
  }

  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    detail::Searcher s(d, g, cfg);
    auto r = s.run(s.top_branches(), deadline, 0, 0, [] { return false; });
    res.nodes = s.nodes();
    return finish(r, &s);
  }

  // Workers pull top-level branches in order. A branch that finds a solution
  // cancels only higher branches, so the reported solution is the one from
  // the lowest successful branch regardless of scheduling.
  const auto branches = detail::Searcher(d, g, cfg).top_branches();
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> best_branch{branches.size()};
  std::atomic<bool> timed_out{false};
  std::atomic<std::int64_t> nodes{0};
  std::mutex mu;
  std::optional<GroupFunction> best;
  auto work = [&] {
    detail::Searcher s(d, g, cfg);
    for (;;) {
      const auto b = next.fetch_add(1);
      if (b >= branches.size() || b > best_branch.load())
        return;
      auto r = s.run({branches[b]}, deadline, 0, 0, [&] { return best_branch.load() < b; });
      nodes += s.nodes();
      if (r == detail::Searcher::Result::Found) {
        std::lock_guard lock(mu);
        if (b < best_branch.load()) {
          best_branch = b;
          best = s.solution();
        }
      } else if (r == detail::Searcher::Result::Aborted && best_branch.load() > b) {
        timed_out = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();
  res.nodes = nodes.load();
  res.elapsed = std::chrono::duration<double>(clock::now() - start).count();
  if (best) {
    res.status = SearchStatus::Found;
    res.function = best;
    if (!is_d1u_bruteforce(*best).is_d1u)
      throw std::logic_error("search produced a function that fails the d1u oracle");
  } else {
    res.status = timed_out ? SearchStatus::Timeout : SearchStatus::Exhausted;
  }
  return res;
}

/// Scans codomain orders upward, trying every abelian group of each order,
/// until one admits a d1u function. The time budget is split evenly across
/// all (order, group) pairs in the range. An order is EXHAUSTED only when all
/// of its groups were searched to completion; any timeout makes it INCONCLUSIVE.
inline SearchOutcome search_min_order(std::int64_t d, const SearchConfig &cfg) {
  if (d < 2)
    throw DomainError("search needs d >= 2, got " + std::to_string(d));
  const std::int64_t lo = cfg.min_order > 0 ? cfg.min_order : d;
  const std::int64_t hi = cfg.max_order > 0 ? cfg.max_order : 4 * d;
  if (lo > hi)
    throw DomainError("empty order range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");

  std::size_t pairs = 0;
  for (std::int64_t n = lo; n <= hi; ++n)
    pairs += n >= d ? enumerate_abelian_groups(n).size() : 0;
  SearchConfig per_pair = cfg;
  per_pair.time_budget = pairs ? cfg.time_budget / static_cast<double>(pairs) : cfg.time_budget;

  SearchOutcome out;
  out.d = d;
  const auto start = std::chrono::steady_clock::now();
  for (std::int64_t n = lo; n <= hi && !out.min_order; ++n) {
    OrderReport rep{n, OrderVerdict::Exhausted};
    for (const auto &g : enumerate_abelian_groups(n)) {
      auto r = search_group(d, g, per_pair);
      out.nodes += r.nodes;
      if (r.status == SearchStatus::Timeout)
        rep.verdict = OrderVerdict::Inconclusive;
      const bool found = r.status == SearchStatus::Found;
      out.entries.push_back(std::move(r));
      if (found) {
        rep.verdict = OrderVerdict::Found;
        out.min_order = n;
        break;
      }
    }
    out.orders.push_back(rep);
  }
  out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

} // namespace d1u
