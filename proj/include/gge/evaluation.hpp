#pragma once

// Label-masked cross-validation. Each fold encodes the FULL graph with the
// test fold's labels set to 0 (the unknown-label category), fits the
// classifier on training-row embeddings with true training labels, and scores
// the test rows. Structure is shared transductively; labels never leak.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "gge/classifiers.hpp"
#include "gge/encoder.hpp"
#include "gge/graph.hpp"
#include "gge/random.hpp"

namespace gge {

struct FoldPlan {
  int folds = 5;
  std::vector<int> assignments;  // length n, fold index in 1..folds
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct ClassifierSpec {
  enum class Kind { lda, knn };
  Kind kind = Kind::lda;
  int k = 5;  // knn only
  static ClassifierSpec lda() { return {Kind::lda, 0}; }
  static ClassifierSpec knn(int k) { return {Kind::knn, k}; }
};

struct CvResult {
  double mean_error = 0.0;
  double std_error = 0.0;  // population sd across folds
  std::vector<double> per_fold;
};

struct RepeatResult {
  double mean_error = 0.0;
  double std_error = 0.0;  // population sd across repetitions
  std::vector<double> per_rep;
};

namespace detail {

inline double population_sd(const std::vector<double>& xs, double mean) {
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return xs.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace detail

// Deterministic fold assignment. Labeled vertices are shuffled and dealt
// round-robin (within each class when stratified, so per-class fold counts
// differ by at most one). Label-0 vertices get fold slots too but are never
// tested or trained on.
inline FoldPlan kfold_split(const LabelVector& labels, int folds,
                            std::uint64_t seed, bool stratified = true) {
  const int n = labels.size();
  if (folds < 2) throw std::invalid_argument("kfold_split: need folds >= 2");
  std::int64_t labeled = 0;
  for (int v : labels.values())
    if (v > 0) ++labeled;
  if (labeled < folds)
    throw std::runtime_error("kfold_split: only " + std::to_string(labeled) +
                             " labeled vertices for " + std::to_string(folds) +
                             " folds");
  if (stratified) {
    const auto counts = class_counts(labels);
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (counts[k] > 0 && counts[k] < folds)
        throw std::runtime_error("kfold_split: class " + std::to_string(k + 1) +
                                 " has " + std::to_string(counts[k]) +
                                 " members, fewer than " +
                                 std::to_string(folds) + " folds");
  }

  FoldPlan plan;
  plan.folds = folds;
  plan.seed = seed;
  plan.stratified = stratified;
  plan.assignments.assign(n, 0);
  auto rng = substream(seed, "kfold");

  auto deal = [&](std::vector<int>& idx) {
    rng.shuffle(std::span<int>(idx));
    for (std::size_t t = 0; t < idx.size(); ++t)
      plan.assignments[idx[t]] = static_cast<int>(t % folds) + 1;
  };

  if (stratified) {
    // Strata in fixed order: classes 1..K, then the unknown-label group.
    for (int k = 1; k <= labels.num_classes() + 1; ++k) {
      const int want = k <= labels.num_classes() ? k : 0;
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (labels[i] == want) idx.push_back(i);
      deal(idx);
    }
  } else {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (labels[i] > 0) idx.push_back(i);
    deal(idx);
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (labels[i] == 0) rest.push_back(i);
    deal(rest);
  }
  return plan;
}

namespace detail {

inline int predict_one(const ClassifierSpec& classifier, const LdaModel& lda,
                       const Matrix& train_points,
                       std::span<const int> train_labels,
                       std::span<const double> point) {
  if (classifier.kind == ClassifierSpec::Kind::lda)
    return lda_predict(lda, point);
  return knn_predict(train_points, train_labels, point, classifier.k);
}

}  // namespace detail

// One full CV pass over the plan's folds.
inline CvResult cv_error(const GeneralGraph& graph, const LabelVector& labels,
                         const FoldPlan& plan, const ClassifierSpec& classifier,
                         const EncodeOptions& opts = {}) {
  const int n = graph.size();
  if (labels.size() != n ||
      static_cast<int>(plan.assignments.size()) != n)
    throw std::invalid_argument("cv_error: graph/labels/plan size mismatch");

  CvResult result;
  result.per_fold.reserve(plan.folds);
  for (int f = 1; f <= plan.folds; ++f) {
    std::vector<int> masked = labels.values();
    std::vector<int> train_idx, test_idx;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == 0) continue;
      if (plan.assignments[i] == f) {
        masked[i] = 0;
        test_idx.push_back(i);
      } else {
        train_idx.push_back(i);
      }
    }
    if (test_idx.empty())
      throw std::runtime_error("cv_error: fold " + std::to_string(f) +
                               " has no labeled test vertices");
    const LabelVector masked_labels(std::move(masked), labels.num_classes());
    const EncoderEmbedding emb = encode(graph, masked_labels, opts);

    Matrix train_points(static_cast<int>(train_idx.size()), emb.values.cols);
    std::vector<int> train_labels(train_idx.size());
    for (std::size_t t = 0; t < train_idx.size(); ++t) {
      const auto src = emb.values.row(train_idx[t]);
      std::copy(src.begin(), src.end(), train_points.row(static_cast<int>(t)).begin());
      train_labels[t] = labels[train_idx[t]];
    }

    LdaModel lda;
    if (classifier.kind == ClassifierSpec::Kind::lda)
      lda = lda_fit(train_points, train_labels, labels.num_classes());

    int wrong = 0;
    for (int i : test_idx) {
      const int pred = detail::predict_one(classifier, lda, train_points,
                                           train_labels, emb.values.row(i));
      if (pred != labels[i]) ++wrong;
    }
    result.per_fold.push_back(static_cast<double>(wrong) /
                              static_cast<double>(test_idx.size()));
  }
  result.mean_error =
      std::accumulate(result.per_fold.begin(), result.per_fold.end(), 0.0) /
      static_cast<double>(result.per_fold.size());
  result.std_error = detail::population_sd(result.per_fold, result.mean_error);
  return result;
}

// CV on raw points (no graph, no masking); the train/test protocol and fold
// plans match cv_error. Provided for the raw-feature benchmark curves.
inline CvResult cv_error_points(const Matrix& points, const LabelVector& labels,
                                const FoldPlan& plan,
                                const ClassifierSpec& classifier) {
  const int n = points.rows;
  if (labels.size() != n ||
      static_cast<int>(plan.assignments.size()) != n)
    throw std::invalid_argument("cv_error_points: size mismatch");
  CvResult result;
  for (int f = 1; f <= plan.folds; ++f) {
    std::vector<int> train_idx, test_idx;
    for (int i = 0; i < n; ++i) {
      if (labels[i] == 0) continue;
      (plan.assignments[i] == f ? test_idx : train_idx).push_back(i);
    }
    if (test_idx.empty())
      throw std::runtime_error("cv_error_points: fold " + std::to_string(f) +
                               " has no labeled test vertices");
    Matrix train_points(static_cast<int>(train_idx.size()), points.cols);
    std::vector<int> train_labels(train_idx.size());
    for (std::size_t t = 0; t < train_idx.size(); ++t) {
      const auto src = points.row(train_idx[t]);
      std::copy(src.begin(), src.end(), train_points.row(static_cast<int>(t)).begin());
      train_labels[t] = labels[train_idx[t]];
    }
    LdaModel lda;
    if (classifier.kind == ClassifierSpec::Kind::lda)
      lda = lda_fit(train_points, train_labels, labels.num_classes());
    int wrong = 0;
    for (int i : test_idx) {
      const int pred = detail::predict_one(classifier, lda, train_points,
                                           train_labels, points.row(i));
      if (pred != labels[i]) ++wrong;
    }
    result.per_fold.push_back(static_cast<double>(wrong) /
                              static_cast<double>(test_idx.size()));
  }
  result.mean_error =
      std::accumulate(result.per_fold.begin(), result.per_fold.end(), 0.0) /
      static_cast<double>(result.per_fold.size());
  result.std_error = detail::population_sd(result.per_fold, result.mean_error);
  return result;
}

// Repeats cv_error with fold seeds base_seed + r; reports the mean and
// population sd across repetitions.
inline RepeatResult repeat_cv(const GeneralGraph& graph,
                              const LabelVector& labels, int folds, int reps,
                              std::uint64_t base_seed,
                              const ClassifierSpec& classifier,
                              const EncodeOptions& opts = {},
                              bool stratified = true) {
  if (reps < 1) throw std::invalid_argument("repeat_cv: need reps >= 1");
  RepeatResult result;
  result.per_rep.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    const FoldPlan plan = kfold_split(labels, folds, base_seed + r, stratified);
    result.per_rep.push_back(
        cv_error(graph, labels, plan, classifier, opts).mean_error);
  }
  result.mean_error =
      std::accumulate(result.per_rep.begin(), result.per_rep.end(), 0.0) /
      static_cast<double>(result.per_rep.size());
  result.std_error = detail::population_sd(result.per_rep, result.mean_error);
  return result;
}

}  // namespace gge
