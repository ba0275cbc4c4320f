#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "diffcalc.hpp"
#include "errors.hpp"
#include "groups.hpp"

namespace d1u {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double certification = 1e-9; // Frobenius residual
inline constexpr double gram = 1e-10;
inline constexpr double unit_norm = 1e-12;
inline constexpr double normalization = 1e-12;
inline constexpr double scalar = 1e-8;
} // namespace tol

/// Orthonormal bases of C^d; basis j is a d x d matrix whose columns are its vectors.
struct BasisSet {
  int d = 0;
  std::vector<ComplexMatrix> bases;

  std::size_t vector_count() const {
    std::size_t n = 0;
    for (const auto &b : bases)
      n += static_cast<std::size_t>(b.cols());
    return n;
  }

  /// Largest |B^* B - I| entry over all bases.
  double max_gram_deviation() const {
    double worst = 0;
    for (const auto &b : bases) {
      const ComplexMatrix gram = b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols());
      worst = std::max(worst, gram.cwiseAbs().maxCoeff());
    }
    return worst;
  }
};

struct WeightedDesign {
  BasisSet basis_set;
  std::vector<double> basis_weights; // weight carried by each vector of basis j
  double residual = 0;               // || sum_x w_x (x x^*)^{(x)2} - P_sym / dim Sym ||_F
  double potential_gap = 0;
  bool certified = false;

  int dimension() const { return basis_set.d; }

  /// sum_j |basis j| * w_j; equals 1 for a normalized design.
  double total_weight() const {
    double s = 0;
    for (std::size_t j = 0; j < basis_weights.size(); ++j)
      s += static_cast<double>(basis_set.bases[j].cols()) * basis_weights[j];
    return s;
  }
};

/// Standard basis followed by one basis per character s of the codomain B:
/// u_{t,s}(x) = chi_t(x) psi_s(f(x)) / sqrt(d), t in Z/dZ. |B| + 1 bases total.
inline BasisSet character_bases(const GroupFunction &f) {
  if (!is_d1u(f).is_d1u)
    throw InvalidInput("character bases need a differentially 1-uniform function");
  const auto d = static_cast<int>(f.domain_order());
  const auto &g = f.codomain();
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  // chi_t(x) = exp(2 pi i t x / d) with the phase reduced exactly mod d
  ComplexMatrix fourier(d, d);
  for (int x = 0; x < d; ++x)
    for (int t = 0; t < d; ++t) {
      const auto k = static_cast<std::int64_t>(t) * x % d;
      fourier(x, t) = k == 0 ? std::complex<double>(1.0, 0.0)
                             : std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / d);
    }

  BasisSet bs;
  bs.d = d;
  bs.bases.reserve(static_cast<std::size_t>(g.order()) + 1);
  bs.bases.push_back(ComplexMatrix::Identity(d, d));
  for (std::size_t s = 0; s < static_cast<std::size_t>(g.order()); ++s) {
    const auto index = g.at(s);
    ComplexMatrix basis(d, d);
    for (int x = 0; x < d; ++x) {
      const auto phase = character_value(g, index, f.values()[static_cast<std::size_t>(x)]);
      basis.row(x) = fourier.row(x) * (phase * norm);
    }
    bs.bases.push_back(std::move(basis));
  }
  return bs;
}

namespace detail {

// Columns are the vectors of all bases, in order.
inline ComplexMatrix stacked_vectors(const BasisSet &bs) {
  ComplexMatrix all(bs.d, static_cast<Eigen::Index>(bs.vector_count()));
  Eigen::Index col = 0;
  for (const auto &b : bs.bases) {
    all.middleCols(col, b.cols()) = b;
    col += b.cols();
  }
  return all;
}

inline std::vector<double> per_vector_weights(const BasisSet &bs, const std::vector<double> &basis_weights) {
  std::vector<double> w;
  w.reserve(bs.vector_count());
  for (std::size_t j = 0; j < bs.bases.size(); ++j)
    for (Eigen::Index c = 0; c < bs.bases[j].cols(); ++c)
      w.push_back(basis_weights[j]);
  return w;
}

/// Frobenius norm of sum_x w_x (x x^*)^{(x)2} - 2 P_sym / (d(d+1)), formed explicitly
/// as a d^2 x d^2 operator.
inline double design_residual(const BasisSet &bs, const std::vector<double> &basis_weights) {
  const int d = bs.d;
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const ComplexMatrix all = stacked_vectors(bs);
  const auto w = per_vector_weights(bs, basis_weights);
  ComplexMatrix tensor(d2, all.cols());   // columns x (x) x
  ComplexMatrix weighted(d2, all.cols()); // columns w_x * x (x) x
  for (Eigen::Index c = 0; c < all.cols(); ++c)
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const auto v = all(i, c) * all(k, c);
        tensor(i * d + k, c) = v;
        weighted(i * d + k, c) = v * w[static_cast<std::size_t>(c)];
      }
  ComplexMatrix op = weighted * tensor.adjoint();
  // P_sym = (I + SWAP) / 2, target = 2 P_sym / (d(d+1)) = (I + SWAP) / (d(d+1))
  const double c = 1.0 / (static_cast<double>(d) * (d + 1));
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      op(i * d + k, i * d + k) -= c;
      op(i * d + k, k * d + i) -= c;
    }
  return op.norm();
}

/// Gram matrix of the per-basis operators S_j: G_jk = sum_{u in j, v in k} |<u,v>|^4.
inline Eigen::MatrixXd operator_gram(const BasisSet &bs) {
  const ComplexMatrix all = stacked_vectors(bs);
  const Eigen::MatrixXd overlap4 = (all.adjoint() * all).cwiseAbs2().cwiseAbs2();
  const auto n = static_cast<Eigen::Index>(bs.bases.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::Index row = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index col = 0;
    const auto rj = bs.bases[static_cast<std::size_t>(j)].cols();
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto ck = bs.bases[static_cast<std::size_t>(k)].cols();
      gram(j, k) = overlap4.block(row, col, rj, ck).sum();
      col += ck;
    }
    row += rj;
  }
  return gram;
}

/// min 1/2 w^T Q w + q^T w  s.t.  c^T w = 1, w >= 0, by a primal active-set
/// method. Equality subproblems are solved through a complete orthogonal
/// decomposition of the KKT matrix, so rank-deficient Q (e.g. repeated bases)
/// yields the minimum-norm solution.
inline Eigen::VectorXd active_set_qp(const Eigen::MatrixXd &Q, const Eigen::VectorXd &q, const Eigen::VectorXd &c) {
  const auto n = Q.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / c.sum());
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  constexpr double eps = 1e-14;

  auto solve_free = [&] {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!fixed[static_cast<std::size_t>(i)])
        free.push_back(i);
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b)
        kkt(a, b) = Q(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]);
      kkt(a, m) = kkt(m, a) = c(free[static_cast<std::size_t>(a)]);
      rhs(a) = -q(free[static_cast<std::size_t>(a)]);
    }
    rhs(m) = 1.0;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n);
    for (Eigen::Index a = 0; a < m; ++a)
      full(free[static_cast<std::size_t>(a)]) = sol(a);
    return std::pair(full, -sol(m)); // lambda: grad = lambda * c on the free set
  };

  for (int iter = 0; iter < 10 * static_cast<int>(n) + 10; ++iter) {
    auto [target, lambda] = solve_free();
    bool feasible = true;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!fixed[static_cast<std::size_t>(i)] && target(i) < -eps)
        feasible = false;
    if (feasible) {
      w = target.cwiseMax(0.0);
      const Eigen::VectorXd grad = Q * w + q;
      Eigen::Index worst = -1;
      double worst_mu = -1e-12;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!fixed[static_cast<std::size_t>(i)])
          continue;
        const double mu = grad(i) - lambda * c(i);
        if (mu < worst_mu) {
          worst_mu = mu;
          worst = i;
        }
      }
      if (worst < 0)
        return w;
      fixed[static_cast<std::size_t>(worst)] = false;
      continue;
    }
    // Step toward target until the first free weight hits zero.
    double alpha = 1.0;
    Eigen::Index block = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fixed[static_cast<std::size_t>(i)] || target(i) >= 0)
        continue;
      const double a = w(i) / (w(i) - target(i));
      if (a < alpha) {
        alpha = a;
        block = i;
      }
    }
    w += alpha * (target - w);
    if (block >= 0) {
      w(block) = 0;
      fixed[static_cast<std::size_t>(block)] = true;
    }
  }
  return w.cwiseMax(0.0);
}

} // namespace detail

/// Sum_{x,y} w_x w_y |<x,y>|^4 - 2 / (d(d+1)). Zero exactly for 2-designs.
inline double frame_potential_gap(const BasisSet &bs, const std::vector<double> &basis_weights) {
  const Eigen::MatrixXd gram = detail::operator_gram(bs);
  const Eigen::Map<const Eigen::VectorXd> w(basis_weights.data(), static_cast<Eigen::Index>(basis_weights.size()));
  const double d = bs.d;
  return w.dot(gram * w) - 2.0 / (d * (d + 1));
}

inline double frame_potential_gap(const WeightedDesign &wd) {
  return frame_potential_gap(wd.basis_set, wd.basis_weights);
}

/// Per-basis weights minimizing the Frobenius distance to the normalized
/// symmetric projector, subject to sum_j d w_j = 1 and w_j >= 0.
/// Never throws on a bad fit: `certified` is false instead.
inline WeightedDesign solve_weights(BasisSet bs) {
  if (bs.bases.empty())
    throw DomainError("solve_weights needs at least one basis");
  for (const auto &b : bs.bases)
    if (b.rows() != bs.d)
      throw ShapeError("basis vector length does not match dimension " + std::to_string(bs.d));
  if (bs.max_gram_deviation() > tol::gram)
    throw InvalidInput("bases are not orthonormal");

  const auto n = static_cast<Eigen::Index>(bs.bases.size());
  const double d = bs.d;
  const Eigen::MatrixXd gram = detail::operator_gram(bs);
  // <S_j, 2 P_sym / (d(d+1))> = |basis j| * 2 / (d(d+1)) for unit vectors
  Eigen::VectorXd h(n), c(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double size = static_cast<double>(bs.bases[static_cast<std::size_t>(j)].cols());
    h(j) = size * 2.0 / (d * (d + 1));
    c(j) = size;
  }
  const Eigen::VectorXd w = detail::active_set_qp(2.0 * gram, -2.0 * h, c);

  WeightedDesign wd;
  wd.basis_weights.assign(w.data(), w.data() + w.size());
  wd.residual = detail::design_residual(bs, wd.basis_weights);
  wd.basis_set = std::move(bs);
  wd.potential_gap = frame_potential_gap(wd);
  wd.certified = wd.residual <= tol::certification && std::abs(wd.total_weight() - 1.0) <= tol::normalization &&
                 std::all_of(wd.basis_weights.begin(), wd.basis_weights.end(), [](double x) { return x >= 0; });
  return wd;
}

/// Haar-random unit vector in C^d.
template <class Rng> ComplexVector random_unit_vector(int d, Rng &rng) {
  std::normal_distribution<double> gauss;
  ComplexVector v(d);
  for (int i = 0; i < d; ++i)
    v(i) = {gauss(rng), gauss(rng)};
  return v / v.norm();
}

/// sum_x w_x |<alpha,x>|^2 |<beta,x>|^2 - (1 + |<alpha,beta>|^2) / (d(d+1)) for unit alpha, beta.
inline double point_deviation(const WeightedDesign &wd, const ComplexVector &alpha, const ComplexVector &beta) {
  const int d = wd.dimension();
  if (alpha.size() != d || beta.size() != d)
    throw ShapeError("test vectors must have length " + std::to_string(d));
  const ComplexMatrix all = detail::stacked_vectors(wd.basis_set);
  const auto w = detail::per_vector_weights(wd.basis_set, wd.basis_weights);
  const Eigen::VectorXd pa = (all.adjoint() * alpha).cwiseAbs2();
  const Eigen::VectorXd pb = (all.adjoint() * beta).cwiseAbs2();
  double sum = 0;
  for (Eigen::Index x = 0; x < all.cols(); ++x)
    sum += w[static_cast<std::size_t>(x)] * pa(x) * pb(x);
  return sum - (1.0 + std::norm(alpha.dot(beta))) / (static_cast<double>(d) * (d + 1));
}

/// Max |point_deviation| over `trials` Haar-random (alpha, beta) pairs.
inline double haar_point_check(const WeightedDesign &wd, int trials, std::uint64_t seed = 1) {
  if (trials < 1)
    throw DomainError("haar_point_check needs trials >= 1");
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const auto alpha = random_unit_vector(wd.dimension(), rng);
    const auto beta = random_unit_vector(wd.dimension(), rng);
    worst = std::max(worst, std::abs(point_deviation(wd, alpha, beta)));
  }
  return worst;
}

/// Max over vectors u, v from distinct bases of ||<u,v>|^2 - 1/d|.
inline double unbiasedness_report(const BasisSet &bs) {
  if (bs.bases.size() < 2)
    throw DomainError("unbiasedness needs at least two bases");
  const double inv_d = 1.0 / bs.d;
  double worst = 0;
  for (std::size_t j = 0; j < bs.bases.size(); ++j)
    for (std::size_t k = j + 1; k < bs.bases.size(); ++k) {
      const Eigen::MatrixXd overlaps = (bs.bases[j].adjoint() * bs.bases[k]).cwiseAbs2();
      worst = std::max(worst, (overlaps.array() - inv_d).abs().maxCoeff());
    }
  return worst;
}

} // namespace d1u
