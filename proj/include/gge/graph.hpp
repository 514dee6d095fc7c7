#pragma once

// Core graph and label types. A GeneralGraph is any n-by-n pairwise matrix:
// binary adjacency, weighted adjacency, distance, or kernel. Storage is
// either dense or a sparse triplet list; both are immutable after
// construction and safe to share across threads.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gge/matrix.hpp"

namespace gge {

inline constexpr double kSymmetryTol = 1e-12;

class GeneralGraph {
 public:
  struct Triplet {
    int row = 0;  // 0-based; file formats are 1-based and convert on IO
    int col = 0;
    double weight = 0.0;
  };

  // How a sparse triplet list encodes an undirected graph:
  //   symmetric_once - each undirected edge appears once and counts both ways
  //   as_stored      - entries are taken literally (directed or pre-mirrored)
  enum class SparseMode { symmetric_once, as_stored };

  static GeneralGraph from_dense(Matrix a) {
    if (a.rows != a.cols)
      throw std::invalid_argument("from_dense: matrix must be square, got " +
                                  std::to_string(a.rows) + "x" +
                                  std::to_string(a.cols));
    if (!a.all_finite())
      throw std::invalid_argument("from_dense: non-finite entry");
    GeneralGraph g;
    g.n_ = a.rows;
    g.dense_storage_ = true;
    g.symmetric_ = detect_symmetric(a);
    g.values_ = std::move(a);
    return g;
  }

  static GeneralGraph from_triplets(int n, std::vector<Triplet> triplets,
                                    SparseMode mode) {
    if (n < 0) throw std::invalid_argument("from_triplets: negative n");
    for (std::size_t t = 0; t < triplets.size(); ++t) {
      const auto& e = triplets[t];
      if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
        throw std::invalid_argument("from_triplets: index out of range at triplet " +
                                    std::to_string(t + 1));
      if (!std::isfinite(e.weight))
        throw std::invalid_argument("from_triplets: non-finite weight at triplet " +
                                    std::to_string(t + 1));
    }
    GeneralGraph g;
    g.n_ = n;
    g.dense_storage_ = false;
    g.mode_ = mode;
    g.symmetric_ = (mode == SparseMode::symmetric_once);
    g.triplets_ = std::move(triplets);
    return g;
  }

  int size() const { return n_; }
  bool is_dense() const { return dense_storage_; }
  bool symmetric() const { return symmetric_; }
  SparseMode mode() const { return mode_; }

  const Matrix& dense() const {
    if (!dense_storage_)
      throw std::logic_error("dense(): graph has sparse storage");
    return values_;
  }
  const std::vector<Triplet>& triplets() const {
    if (dense_storage_)
      throw std::logic_error("triplets(): graph has dense storage");
    return triplets_;
  }

 private:
  static bool detect_symmetric(const Matrix& a) {
    for (int i = 0; i < a.rows; ++i)
      for (int j = i + 1; j < a.cols; ++j)
        if (std::abs(a(i, j) - a(j, i)) > kSymmetryTol) return false;
    return true;
  }

  int n_ = 0;
  bool dense_storage_ = true;
  bool symmetric_ = true;
  SparseMode mode_ = SparseMode::as_stored;
  Matrix values_;
  std::vector<Triplet> triplets_;
};

// Dense form of a graph. Duplicate triplets are summed; under symmetric_once
// every off-diagonal triplet is mirrored. Dense input is returned unchanged.
inline GeneralGraph densify(const GeneralGraph& g) {
  if (g.is_dense()) return g;
  Matrix a(g.size(), g.size(), 0.0);
  for (const auto& e : g.triplets()) {
    a(e.row, e.col) += e.weight;
    if (g.mode() == GeneralGraph::SparseMode::symmetric_once && e.row != e.col)
      a(e.col, e.row) += e.weight;
  }
  return GeneralGraph::from_dense(std::move(a));
}

// Sparse form. Exactly symmetric dense matrices keep only the upper triangle
// plus diagonal (symmetric_once); anything else is stored entry by entry, so
// the conversion is always lossless.
inline GeneralGraph sparsify(const GeneralGraph& g) {
  if (!g.is_dense()) return g;
  const Matrix& a = g.dense();
  bool exact = true;
  for (int i = 0; i < a.rows && exact; ++i)
    for (int j = i + 1; j < a.cols; ++j)
      if (a(i, j) != a(j, i)) {
        exact = false;
        break;
      }
  std::vector<GeneralGraph::Triplet> trips;
  if (exact) {
    for (int i = 0; i < a.rows; ++i)
      for (int j = i; j < a.cols; ++j)
        if (a(i, j) != 0.0) trips.push_back({i, j, a(i, j)});
    return GeneralGraph::from_triplets(g.size(), std::move(trips),
                                       GeneralGraph::SparseMode::symmetric_once);
  }
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (a(i, j) != 0.0) trips.push_back({i, j, a(i, j)});
  return GeneralGraph::from_triplets(g.size(), std::move(trips),
                                     GeneralGraph::SparseMode::as_stored);
}

// Length-n label vector with values in {0, ..., K}; 0 marks an unknown label.
class LabelVector {
 public:
  LabelVector(std::vector<int> values, int num_classes)
      : values_(std::move(values)), num_classes_(num_classes) {
    if (num_classes_ < 1)
      throw std::invalid_argument("LabelVector: class count must be >= 1");
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] < 0 || values_[i] > num_classes_)
        throw std::invalid_argument(
            "LabelVector: label " + std::to_string(values_[i]) + " at entry " +
            std::to_string(i + 1) + " outside {0,...," +
            std::to_string(num_classes_) + "}");
  }

  int size() const { return static_cast<int>(values_.size()); }
  int num_classes() const { return num_classes_; }
  int operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& values() const { return values_; }

 private:
  std::vector<int> values_;
  int num_classes_;
};

// n_k for k = 1..K; label-0 entries are counted in no class.
inline std::vector<std::int64_t> class_counts(const LabelVector& labels) {
  std::vector<std::int64_t> counts(labels.num_classes(), 0);
  for (int v : labels.values())
    if (v > 0) ++counts[v - 1];
  return counts;
}

// The n-by-K embedding produced by the encoder.
struct EncoderEmbedding {
  Matrix values;
  bool normalized = false;
};

}  // namespace gge
