#pragma once

// Classifiers used on the embedding: linear discriminant analysis with a
// pooled covariance (plus a small ridge for stability) and k-nearest
// neighbors. Tie-breaking is deterministic everywhere so cross-validation
// results are reproducible bit-for-bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gge/matrix.hpp"

namespace gge {

inline constexpr double kDefaultRidge = 1e-8;

namespace detail {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
inline Matrix cholesky(const Matrix& a) {
  const int n = a.rows;
  Matrix l(n, n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s))
          throw std::runtime_error(
              "lda: pooled covariance is singular even after ridge");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// Solves (L L^T) x = b in place given the Cholesky factor L.
inline std::vector<double> cholesky_solve(const Matrix& l,
                                          std::span<const double> b) {
  const int n = l.rows;
  std::vector<double> x(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

}  // namespace detail

struct LdaModel {
  Matrix means;                 // K x d class means
  Matrix pooled_cov;            // d x d, symmetric
  std::vector<double> priors;   // empirical class frequencies, sum 1
  double ridge = kDefaultRidge;
  // Cached discriminant: score_k(x) = x . coef_k + intercept_k.
  Matrix coef;                  // K x d, rows are Sigma^-1 mu_k
  std::vector<double> intercept;
};

// Fits the shared-covariance discriminant model. labels take values in
// 1..num_classes; every class must appear, and n must exceed num_classes so
// the pooled covariance denominator n - K is positive.
inline LdaModel lda_fit(const Matrix& points, std::span<const int> labels,
                        int num_classes, double ridge = kDefaultRidge) {
  const int n = points.rows;
  const int d = points.cols;
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("lda_fit: points/labels size mismatch");
  if (d < 1) throw std::invalid_argument("lda_fit: need at least 1 dimension");
  if (n <= num_classes)
    throw std::runtime_error("lda_fit: need n > K for the pooled covariance (n=" +
                             std::to_string(n) + ", K=" +
                             std::to_string(num_classes) + ")");

  std::vector<std::int64_t> counts(num_classes, 0);
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 1 || labels[i] > num_classes)
      throw std::invalid_argument("lda_fit: label " + std::to_string(labels[i]) +
                                  " outside 1.." + std::to_string(num_classes));
    ++counts[labels[i] - 1];
  }
  for (int k = 0; k < num_classes; ++k)
    if (counts[k] == 0)
      throw std::runtime_error("lda_fit: class " + std::to_string(k + 1) +
                               " has no training points");

  LdaModel model;
  model.ridge = ridge;
  model.means = Matrix(num_classes, d, 0.0);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c) model.means(labels[i] - 1, c) += points(i, c);
  for (int k = 0; k < num_classes; ++k)
    for (int c = 0; c < d; ++c)
      model.means(k, c) /= static_cast<double>(counts[k]);

  model.priors.resize(num_classes);
  for (int k = 0; k < num_classes; ++k)
    model.priors[k] = static_cast<double>(counts[k]) / static_cast<double>(n);

  // Within-class scatter / (n - K), then ridge * (trace/d) * I. A zero-scatter
  // fit falls back to a unit scale so the ridge still regularizes.
  model.pooled_cov = Matrix(d, d, 0.0);
  for (int i = 0; i < n; ++i) {
    const int k = labels[i] - 1;
    for (int a = 0; a < d; ++a) {
      const double da = points(i, a) - model.means(k, a);
      for (int b = a; b < d; ++b) {
        const double db = points(i, b) - model.means(k, b);
        model.pooled_cov(a, b) += da * db;
      }
    }
  }
  const double denom = static_cast<double>(n - num_classes);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      model.pooled_cov(a, b) /= denom;
      model.pooled_cov(b, a) = model.pooled_cov(a, b);
    }
  double trace = 0.0;
  for (int a = 0; a < d; ++a) trace += model.pooled_cov(a, a);
  const double scale = trace > 0.0 ? trace / d : 1.0;
  for (int a = 0; a < d; ++a) model.pooled_cov(a, a) += ridge * scale;

  const Matrix chol = detail::cholesky(model.pooled_cov);
  model.coef = Matrix(num_classes, d, 0.0);
  model.intercept.resize(num_classes);
  for (int k = 0; k < num_classes; ++k) {
    const auto w = detail::cholesky_solve(chol, model.means.row(k));
    double quad = 0.0;
    for (int c = 0; c < d; ++c) {
      model.coef(k, c) = w[c];
      quad += model.means(k, c) * w[c];
    }
    model.intercept[k] = -0.5 * quad + std::log(model.priors[k]);
  }
  return model;
}

// Linear discriminant scores x . Sigma^-1 mu_k - mu_k . Sigma^-1 mu_k / 2
// + log pi_k for every class.
inline std::vector<double> lda_scores(const LdaModel& model,
                                      std::span<const double> point) {
  if (static_cast<int>(point.size()) != model.means.cols)
    throw std::invalid_argument("lda_scores: dimension mismatch");
  std::vector<double> scores(model.coef.rows);
  for (int k = 0; k < model.coef.rows; ++k) {
    double s = model.intercept[k];
    for (int c = 0; c < model.coef.cols; ++c)
      s += point[c] * model.coef(k, c);
    scores[k] = s;
  }
  return scores;
}

// Predicted label in 1..K; ties go to the smallest label.
inline int lda_predict(const LdaModel& model, std::span<const double> point) {
  const auto scores = lda_scores(model, point);
  int best = 0;
  for (int k = 1; k < static_cast<int>(scores.size()); ++k)
    if (scores[k] > scores[best]) best = k;
  return best + 1;
}

// Majority label among the k Euclidean-nearest training points. Distance ties
// prefer the smaller training index; vote ties prefer the smallest label.
inline int knn_predict(const Matrix& train_points,
                       std::span<const int> train_labels,
                       std::span<const double> query, int k) {
  const int n = train_points.rows;
  if (n == 0) throw std::runtime_error("knn_predict: empty training set");
  if (static_cast<int>(train_labels.size()) != n)
    throw std::invalid_argument("knn_predict: points/labels size mismatch");
  if (static_cast<int>(query.size()) != train_points.cols)
    throw std::invalid_argument("knn_predict: dimension mismatch");
  if (k < 1 || k > n)
    throw std::invalid_argument("knn_predict: k must be in 1..n");

  std::vector<std::pair<double, int>> dist(n);
  for (int i = 0; i < n; ++i) {
    if (train_labels[i] < 1)
      throw std::invalid_argument("knn_predict: training label must be >= 1");
    double sq = 0.0;
    const auto row = train_points.row(i);
    for (int c = 0; c < train_points.cols; ++c) {
      const double diff = row[c] - query[c];
      sq += diff * diff;
    }
    dist[i] = {sq, i};
  }
  std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());

  int max_label = 0;
  for (int i = 0; i < k; ++i)
    max_label = std::max(max_label, train_labels[dist[i].second]);
  std::vector<int> votes(max_label, 0);
  for (int i = 0; i < k; ++i) ++votes[train_labels[dist[i].second] - 1];
  int best = 0;
  for (int v = 1; v < max_label; ++v)
    if (votes[v] > votes[best]) best = v;
  return best + 1;
}

}  // namespace gge
