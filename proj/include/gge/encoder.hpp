#pragma once

// One-hot graph encoder embedding. Given an n-by-n pairwise matrix A and a
// label vector with K known classes, the embedding is Z = A * W, where W is
// the normalized one-hot matrix W(j,k) = 1/n_k iff label_j = k. Row i of Z
// holds vertex i's average connection weight to each class. A dense path
// costs O(n^2); the sparse path streams the triplet list in O(s + nK).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gge/graph.hpp"
#include "gge/matrix.hpp"

namespace gge {

struct EncodeOptions {
  bool normalize = true;      // scale each nonzero row of Z to unit norm
  bool zero_diagonal = false; // treat A's diagonal as zero before the multiply
};

namespace detail {

inline void prefetch(const void* p) {
#if defined(__GNUC__) || defined(__clang__)
  __builtin_prefetch(p);
#else
  (void)p;
#endif
}

// Per-class reciprocal counts; throws if any class 1..K is empty, since the
// embedding divides by n_k.
inline std::vector<double> inverse_counts(const LabelVector& labels) {
  const auto counts = class_counts(labels);
  std::vector<double> inv(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0)
      throw std::runtime_error("encode: class " + std::to_string(k + 1) +
                               " has no labeled vertices");
    inv[k] = 1.0 / static_cast<double>(counts[k]);
  }
  return inv;
}

inline void scale_columns(Matrix& z, const std::vector<double>& inv) {
  for (int i = 0; i < z.rows; ++i)
    for (int k = 0; k < z.cols; ++k) z(i, k) *= inv[k];
}

inline void normalize_rows(Matrix& z) {
  for (int i = 0; i < z.rows; ++i) {
    double sq = 0.0;
    for (int k = 0; k < z.cols; ++k) sq += z(i, k) * z(i, k);
    if (sq > 0.0) {
      const double inv = 1.0 / std::sqrt(sq);
      for (int k = 0; k < z.cols; ++k) z(i, k) *= inv;
    }
  }
}

}  // namespace detail

// The normalized one-hot matrix W of Step 2. Rows with label 0 are zero.
inline Matrix build_onehot(const LabelVector& labels) {
  const auto inv = detail::inverse_counts(labels);
  Matrix w(labels.size(), labels.num_classes(), 0.0);
  for (int i = 0; i < labels.size(); ++i)
    if (labels[i] > 0) w(i, labels[i] - 1) = inv[labels[i] - 1];
  return w;
}

// Dense path: per-class row sums accumulated in ascending j, scaled by 1/n_k
// once per entry. Equal to the literal A*W product up to rounding.
inline EncoderEmbedding encode_dense(const GeneralGraph& graph,
                                     const LabelVector& labels,
                                     const EncodeOptions& opts = {}) {
  if (graph.size() != labels.size())
    throw std::invalid_argument("encode: graph has " +
                                std::to_string(graph.size()) +
                                " vertices but labels have " +
                                std::to_string(labels.size()));
  const auto inv = detail::inverse_counts(labels);
  const Matrix& a = graph.dense();
  const int n = graph.size();
  const int num_classes = labels.num_classes();

  Matrix z(n, num_classes, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto row = a.row(i);
    auto out = z.row(i);
    for (int j = 0; j < n; ++j) {
      if (opts.zero_diagonal && j == i) continue;
      const int label = labels[j];
      if (label > 0) out[label - 1] += row[j];
    }
  }
  detail::scale_columns(z, inv);
  if (opts.normalize) detail::normalize_rows(z);
  return {std::move(z), opts.normalize};
}

// Sparse path: one pass over the triplets, O(s + nK). Accumulation follows
// the stored triplet order, so the result is deterministic.
inline EncoderEmbedding encode_sparse(const GeneralGraph& graph,
                                      const LabelVector& labels,
                                      const EncodeOptions& opts = {}) {
  if (graph.size() != labels.size())
    throw std::invalid_argument("encode: graph has " +
                                std::to_string(graph.size()) +
                                " vertices but labels have " +
                                std::to_string(labels.size()));
  const auto inv = detail::inverse_counts(labels);
  const int n = graph.size();
  const int num_classes = labels.num_classes();
  const bool mirror =
      graph.mode() == GeneralGraph::SparseMode::symmetric_once;

  Matrix z(n, num_classes, 0.0);
  const auto& triplets = graph.triplets();
  const int* lab = labels.values().data();
  double* out = z.data.data();
  // The scatter targets are random but known ahead of time; prefetching a few
  // triplets out keeps the pass memory-bound instead of latency-bound on
  // graphs whose accumulator no longer fits in cache.
  constexpr std::size_t kPrefetchDistance = 16;
  for (std::size_t t = 0; t < triplets.size(); ++t) {
    if (t + kPrefetchDistance < triplets.size()) {
      const auto& f = triplets[t + kPrefetchDistance];
      detail::prefetch(&lab[f.col]);
      detail::prefetch(&out[static_cast<std::size_t>(f.row) * num_classes]);
      detail::prefetch(&lab[f.row]);
      detail::prefetch(&out[static_cast<std::size_t>(f.col) * num_classes]);
    }
    const auto& e = triplets[t];
    if (opts.zero_diagonal && e.row == e.col) continue;
    if (const int lc = lab[e.col]; lc > 0)
      out[static_cast<std::size_t>(e.row) * num_classes + lc - 1] += e.weight;
    if (mirror && e.row != e.col)
      if (const int lr = lab[e.row]; lr > 0)
        out[static_cast<std::size_t>(e.col) * num_classes + lr - 1] += e.weight;
  }
  detail::scale_columns(z, inv);
  if (opts.normalize) detail::normalize_rows(z);
  return {std::move(z), opts.normalize};
}

// Storage-dispatching entry point.
inline EncoderEmbedding encode(const GeneralGraph& graph,
                               const LabelVector& labels,
                               const EncodeOptions& opts = {}) {
  return graph.is_dense() ? encode_dense(graph, labels, opts)
                          : encode_sparse(graph, labels, opts);
}

}  // namespace gge
