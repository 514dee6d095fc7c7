#pragma once

// Pairwise functions that turn an n-by-p feature matrix into a GeneralGraph:
// Euclidean distance, inner product, cosine, RBF kernel, Spearman rank
// correlation, and a distance-to-kernel transform K = 1 - D / max(D).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gge/graph.hpp"
#include "gge/matrix.hpp"

namespace gge {

enum class KernelKind {
  euclidean,
  inner,
  cosine,
  rbf,
  spearman,
  distance_to_kernel,
};

struct KernelSpec {
  KernelKind kind = KernelKind::euclidean;
  double sigma = 1.0;  // rbf bandwidth
  // Base pairwise function for distance_to_kernel (any non-dk kind).
  KernelKind base = KernelKind::euclidean;
  double base_sigma = 1.0;
};

inline void validate(const KernelSpec& spec) {
  if (spec.kind == KernelKind::rbf && !(spec.sigma > 0.0))
    throw std::invalid_argument("kernel: rbf sigma must be > 0");
  if (spec.kind == KernelKind::distance_to_kernel) {
    if (spec.base == KernelKind::distance_to_kernel)
      throw std::invalid_argument("kernel: distance-to-kernel base cannot nest");
    if (spec.base == KernelKind::rbf && !(spec.base_sigma > 0.0))
      throw std::invalid_argument("kernel: rbf sigma must be > 0");
  }
}

// Average (fractional) ranks; ties share the mean of their positions.
inline std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace detail {

inline double dot(std::span<const double> x, std::span<const double> u) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += x[d] * u[d];
  return s;
}

inline double squared_distance(std::span<const double> x,
                               std::span<const double> u) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double diff = x[d] - u[d];
    s += diff * diff;
  }
  return s;
}

// Pearson correlation; a zero-variance side yields 0 rather than NaN.
inline double pearson(std::span<const double> x, std::span<const double> u) {
  const std::size_t n = x.size();
  double mx = 0.0, mu = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    mx += x[d];
    mu += u[d];
  }
  mx /= static_cast<double>(n);
  mu /= static_cast<double>(n);
  double sxx = 0.0, suu = 0.0, sxu = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    const double a = x[d] - mx;
    const double b = u[d] - mu;
    sxx += a * a;
    suu += b * b;
    sxu += a * b;
  }
  if (sxx <= 0.0 || suu <= 0.0) return 0.0;
  return sxu / std::sqrt(sxx * suu);
}

}  // namespace detail

// kappa(spec, x, u) for vector-level kinds. distance_to_kernel is defined on
// whole matrices only; see pairwise_graph.
inline double kappa(const KernelSpec& spec, std::span<const double> x,
                    std::span<const double> u) {
  validate(spec);
  if (x.size() != u.size())
    throw std::invalid_argument("kappa: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(u.size()) + ")");
  switch (spec.kind) {
    case KernelKind::euclidean:
      return std::sqrt(detail::squared_distance(x, u));
    case KernelKind::inner:
      return detail::dot(x, u);
    case KernelKind::cosine: {
      const double nx = std::sqrt(detail::dot(x, x));
      const double nu = std::sqrt(detail::dot(u, u));
      if (nx == 0.0 || nu == 0.0) return 0.0;  // zero vector is uninformative
      return detail::dot(x, u) / (nx * nu);
    }
    case KernelKind::rbf:
      return std::exp(-detail::squared_distance(x, u) /
                      (2.0 * spec.sigma * spec.sigma));
    case KernelKind::spearman: {
      const auto rx = average_ranks(x);
      const auto ru = average_ranks(u);
      return detail::pearson(rx, ru);
    }
    case KernelKind::distance_to_kernel:
      throw std::invalid_argument(
          "kappa: distance-to-kernel applies to full matrices; use pairwise_graph");
  }
  throw std::logic_error("kappa: unknown kernel kind");
}

namespace detail {

// Upper triangle plus diagonal computed once and mirrored, so the output is
// exactly symmetric. Spearman pre-ranks every row once.
inline Matrix pairwise_matrix(const FeatureMatrix& features,
                              const KernelSpec& spec) {
  const int n = features.rows;
  Matrix out(n, n, 0.0);
  if (spec.kind == KernelKind::spearman) {
    std::vector<std::vector<double>> ranks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ranks[i] = average_ranks(features.row(i));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = pearson(ranks[i], ranks[j]);
        out(i, j) = v;
        out(j, i) = v;
      }
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = kappa(spec, features.row(i), features.row(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  return out;
}

}  // namespace detail

// Dense symmetric graph with entry (i,j) = kappa(spec, row_i, row_j).
// distance_to_kernel first builds D under the base spec, then maps it to
// K = 1 - D / max(D); if every base distance is zero the result is all ones.
inline GeneralGraph pairwise_graph(const FeatureMatrix& features,
                                   const KernelSpec& spec) {
  validate(spec);
  if (features.rows < 2)
    throw std::invalid_argument("pairwise_graph: need at least 2 rows");
  if (!features.all_finite())
    throw std::invalid_argument("pairwise_graph: non-finite feature entry");

  if (spec.kind == KernelKind::distance_to_kernel) {
    KernelSpec base;
    base.kind = spec.base;
    base.sigma = spec.base_sigma;
    Matrix d = detail::pairwise_matrix(features, base);
    const double dmax = *std::max_element(d.data.begin(), d.data.end());
    if (dmax == 0.0) return GeneralGraph::from_dense(Matrix(features.rows, features.rows, 1.0));
    for (double& v : d.data) v = 1.0 - v / dmax;
    return GeneralGraph::from_dense(std::move(d));
  }
  return GeneralGraph::from_dense(detail::pairwise_matrix(features, spec));
}

// Applies the distance-to-kernel map to an existing dense distance matrix.
inline GeneralGraph distance_to_kernel_graph(const GeneralGraph& distances) {
  const Matrix& src = distances.dense();
  Matrix d = src;
  const double dmax = *std::max_element(d.data.begin(), d.data.end());
  if (dmax == 0.0) return GeneralGraph::from_dense(Matrix(d.rows, d.cols, 1.0));
  for (double& v : d.data) v = 1.0 - v / dmax;
  return GeneralGraph::from_dense(std::move(d));
}

}  // namespace gge
