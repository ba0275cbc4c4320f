#pragma once

#include <complex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "constructions.hpp"
#include "design.hpp"
#include "diffcalc.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "groups.hpp"
#include "search.hpp"

// Interchange formats. Function files carry exact integers only; design files
// carry complex numbers as [re, im] pairs.

namespace d1u::io {

using nlohmann::json;

inline json to_json(const AbelianGroup &g) { return g.factors(); }
inline json to_json(const GroupElement &e) { return e.residues; }

namespace detail {
inline std::vector<int> int_array(const json &j, const char *what) {
  if (!j.is_array())
    throw ShapeError(std::string(what) + " must be a JSON array of integers");
  std::vector<int> out;
  for (const auto &v : j) {
    if (!v.is_number_integer())
      throw ShapeError(std::string(what) + " must contain integers only");
    out.push_back(v.get<int>());
  }
  return out;
}
} // namespace detail

/// Factor list such as [3, 13]; any factorization is accepted and canonicalized.
inline AbelianGroup group_from_json(const json &j) {
  const auto factors = detail::int_array(j, "group");
  for (int n : factors)
    if (n < 2)
      throw DomainError("cyclic factors must be >= 2, got " + std::to_string(n));
  return AbelianGroup(factors);
}

inline json to_json(const GroupFunction &f) {
  json values = json::array();
  for (const auto &v : f.values())
    values.push_back(v.residues);
  return {{"d", f.domain_order()}, {"codomain", to_json(f.codomain())}, {"values", std::move(values)}};
}

/// {d, codomain: [factors], values: [[residues]...]}. Residues are read against
/// the codomain factors as written, then mapped into the canonical group.
inline GroupFunction function_from_json(const json &j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("codomain") || !j.contains("values"))
    throw ShapeError("function JSON needs keys d, codomain, values");
  if (!j.at("d").is_number_integer())
    throw ShapeError("d must be an integer");
  const auto d = j.at("d").get<std::int64_t>();
  const auto raw = detail::int_array(j.at("codomain"), "codomain");
  for (int n : raw)
    if (n < 2)
      throw DomainError("cyclic factors must be >= 2, got " + std::to_string(n));
  const CanonicalMap map(raw);
  const auto &vals = j.at("values");
  if (!vals.is_array() || static_cast<std::int64_t>(vals.size()) != d)
    throw ShapeError("values must hold exactly d = " + std::to_string(d) + " elements");
  std::vector<GroupElement> values;
  values.reserve(vals.size());
  for (const auto &v : vals) {
    const auto residues = detail::int_array(v, "value");
    if (residues.size() != raw.size())
      throw ShapeError("value has " + std::to_string(residues.size()) + " residues, codomain has " +
                       std::to_string(raw.size()) + " factors");
    for (std::size_t i = 0; i < raw.size(); ++i)
      if (residues[i] < 0 || residues[i] >= raw[i])
        throw ShapeError("residue " + std::to_string(residues[i]) + " outside [0, " + std::to_string(raw[i]) + ")");
    values.push_back(map.map(residues));
  }
  return GroupFunction(map.group(), std::move(values));
}

inline json to_json(const FiniteField &f) {
  return {{"p", f.characteristic()},
          {"k", f.degree()},
          {"modulus", f.modulus()},
          {"generator", f.generator().coeffs}};
}

inline json to_json(const D1uVerdict &v) {
  json j{{"is_d1u", v.is_d1u}};
  if (v.witness)
    j["witness"] = {{"a", v.witness->a}, {"x", v.witness->x}, {"x2", v.witness->x2}};
  else
    j["witness"] = nullptr;
  return j;
}

inline json to_json(const ConstructionPlan &p) {
  json j{{"d", p.d},
         {"branch", to_string(p.branch)},
         {"p", p.p ? json(*p.p) : json(nullptr)},
         {"q", p.q},
         {"base_family", to_string(p.base_family)},
         {"base_order", p.base_order},
         {"codomain", to_json(p.codomain)},
         {"bound", p.bound},
         {"bases_count", p.bases_count}};
  j["comparison_bounds"] = {{"prime_gap", p.comparison.prime_gap},
                            {"chebyshev", p.comparison.chebyshev},
                            {"prior", p.comparison.prior},
                            {"dlogd_only", p.comparison.dlogd_only},
                            {"dlogd_p", p.comparison.dlogd_p}};
  return j;
}

inline json to_json(const GroupSearchResult &r) {
  json j{{"order", r.group.order()},
         {"group", to_json(r.group)},
         {"status", to_string(r.status)},
         {"nodes", r.nodes},
         {"elapsed", r.elapsed},
         {"pigeonhole_pruned", r.pigeonhole_pruned}};
  j["function"] = r.function ? to_json(*r.function) : json(nullptr);
  return j;
}

inline json to_json(const SearchOutcome &o) {
  json entries = json::array();
  for (const auto &e : o.entries)
    entries.push_back(to_json(e));
  json orders = json::array();
  for (const auto &r : o.orders)
    orders.push_back({{"order", r.order}, {"verdict", to_string(r.verdict)}});
  return {{"d", o.d},
          {"entries", std::move(entries)},
          {"orders", std::move(orders)},
          {"min_order", o.min_order ? json(*o.min_order) : json(nullptr)},
          {"nodes", o.nodes},
          {"elapsed", o.elapsed}};
}

inline json to_json(const BasisSet &bs) {
  json bases = json::array();
  for (const auto &b : bs.bases) {
    json vectors = json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      json vec = json::array();
      for (Eigen::Index r = 0; r < b.rows(); ++r)
        vec.push_back({b(r, c).real(), b(r, c).imag()});
      vectors.push_back(std::move(vec));
    }
    bases.push_back(std::move(vectors));
  }
  return bases;
}

/// Bases as written by to_json(BasisSet): [[[re, im], ...] per vector] per basis.
inline BasisSet basis_set_from_json(const json &j) {
  if (!j.is_array() || j.empty())
    throw ShapeError("bases must be a nonempty array");
  BasisSet bs;
  for (const auto &basis : j) {
    if (!basis.is_array() || basis.empty())
      throw ShapeError("each basis must be a nonempty array of vectors");
    const auto cols = static_cast<Eigen::Index>(basis.size());
    const auto rows = static_cast<Eigen::Index>(basis.at(0).size());
    if (bs.d == 0)
      bs.d = static_cast<int>(rows);
    if (rows != bs.d)
      throw ShapeError("vector length does not match dimension " + std::to_string(bs.d));
    ComplexMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto &vec = basis.at(static_cast<std::size_t>(c));
      if (!vec.is_array() || static_cast<Eigen::Index>(vec.size()) != rows)
        throw ShapeError("vector length does not match dimension " + std::to_string(bs.d));
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto &z = vec.at(static_cast<std::size_t>(r));
        if (!z.is_array() || z.size() != 2)
          throw ShapeError("complex entries must be [re, im] pairs");
        m(r, c) = {z.at(0).get<double>(), z.at(1).get<double>()};
      }
    }
    bs.bases.push_back(std::move(m));
  }
  return bs;
}

inline json to_json(const WeightedDesign &wd, bool include_bases, double unbiasedness) {
  json j{{"d", wd.dimension()},
         {"bases_count", wd.basis_set.bases.size()},
         {"weights", wd.basis_weights},
         {"residual", wd.residual},
         {"potential_gap", wd.potential_gap},
         {"unbiasedness", unbiasedness},
         {"certified", wd.certified}};
  if (include_bases)
    j["bases"] = to_json(wd.basis_set);
  return j;
}

} // namespace d1u::io
