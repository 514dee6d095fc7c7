#pragma once

// Monte Carlo validation of the embedding's asymptotics on SBM-family models,
// where the per-class limit is known in closed form: empirical moments against
// the predicted means, 1/m_k variance scaling, cross-dimension correlations,
// normality diagnostics, and the gap between LDA and the plug-in optimal
// classifier built from the true generative parameters.
//
// All statistics here are computed on unnormalized embeddings; the normalized
// pipeline is exercised through classification error instead.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gge/classifiers.hpp"
#include "gge/encoder.hpp"
#include "gge/evaluation.hpp"
#include "gge/graph.hpp"
#include "gge/matrix.hpp"
#include "gge/parallel.hpp"
#include "gge/synth.hpp"

namespace gge {

// Per-class limit of the unnormalized embedding under a (weighted) SBM:
// a vertex of class y sees dimension k concentrate at mean(y,k) with
// per-edge variance variance(y,k). Binary: mean = B, var = B(1-B).
// Uniform(0,w) weights: mean = (w/2) B, var = (w^2/3) B - (w^2/4) B^2.
struct SbmMoments {
  Matrix mean;      // K x K, row y
  Matrix variance;  // K x K, per-edge variance of kappa given V=k, Y=y
};

inline SbmMoments sbm_closed_form_moments(const SbmSpec& spec) {
  if (!spec.degree_params.empty())
    throw std::invalid_argument(
        "closed-form moments require a plain (non-degree-corrected) SBM");
  const int k = spec.num_classes();
  SbmMoments m{Matrix(k, k), Matrix(k, k)};
  const double w = spec.weight_max;
  for (int y = 0; y < k; ++y)
    for (int c = 0; c < k; ++c) {
      const double b = spec.block_probs(y, c);
      if (w > 0.0) {
        m.mean(y, c) = 0.5 * w * b;
        m.variance(y, c) = (w * w / 3.0) * b - (w * w / 4.0) * b * b;
      } else {
        m.mean(y, c) = b;
        m.variance(y, c) = b * (1.0 - b);
      }
    }
  return m;
}

namespace detail {

inline std::pair<GeneralGraph, LabelVector> generate_sbm_family(
    int n, const SbmSpec& spec, std::uint64_t seed, std::uint64_t replicate) {
  if (!spec.degree_params.empty())
    throw std::invalid_argument("theory checks require a plain SBM spec");
  if (spec.weight_max > 0.0) return gen_weighted_sbm(n, spec, seed, replicate);
  return gen_sbm(n, spec, seed, replicate);
}

// Per-class running sums sufficient for means and covariances.
struct MomentSums {
  std::vector<std::int64_t> count;
  Matrix sum;                 // K x K
  std::vector<Matrix> outer;  // K matrices, K x K each

  explicit MomentSums(int k)
      : count(k, 0), sum(k, k), outer(static_cast<std::size_t>(k), Matrix(k, k)) {}

  void add_row(int cls, std::span<const double> z) {
    const int k = sum.cols;
    ++count[cls];
    for (int a = 0; a < k; ++a) {
      sum(cls, a) += z[a];
      for (int b = 0; b < k; ++b) outer[cls](a, b) += z[a] * z[b];
    }
  }

  void merge(const MomentSums& other) {
    const int k = sum.cols;
    for (int c = 0; c < k; ++c) {
      count[c] += other.count[c];
      for (int a = 0; a < k; ++a) {
        sum(c, a) += other.sum(c, a);
        for (int b = 0; b < k; ++b) outer[c](a, b) += other.outer[c](a, b);
      }
    }
  }
};

}  // namespace detail

struct MomentReport {
  int n = 0;
  int reps = 0;
  std::vector<std::int64_t> counts;   // pooled sample size per class
  Matrix means;                       // K x K, row y = empirical class mean
  std::vector<Matrix> covariances;    // per class, population covariance
  Matrix theoretical_means;           // closed-form SBM limit
};

// Pools unnormalized embeddings by true class over `reps` replicates. With
// `probe` set, only vertex 1 is collected and its class is pinned to 1 across
// replicates, realizing the conditioned-on-one-observation variant (for the
// SBM the class determines the latent value).
inline MomentReport moment_report(const SbmSpec& spec, int n, int reps,
                                  std::uint64_t seed, bool probe = false,
                                  const EncodeOptions& opts = {false, false}) {
  if (reps < 2) throw std::invalid_argument("moment_report: need reps >= 2");
  const int k = spec.num_classes();
  std::vector<detail::MomentSums> slots(static_cast<std::size_t>(reps),
                                        detail::MomentSums(k));
  run_replicates(reps, [&](int r) {
    if (probe) {
      if (!spec.degree_params.empty())
        throw std::invalid_argument("theory checks require a plain SBM spec");
      // Pin the probe vertex's class to 1 across replicates, then draw edges
      // conditioned on the pinned label vector. Labels and edges come from
      // separate substreams, so the conditional draw stays exact.
      std::vector<int> pinned = gen_labels(n, spec.priors, seed, r).values();
      pinned[0] = 1;
      const LabelVector labels(std::move(pinned), k);
      auto rng = substream(seed, "sbm.edges", r);
      std::vector<GeneralGraph::Triplet> edges;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.bernoulli(spec.block_probs(labels[i] - 1, labels[j] - 1)))
            edges.push_back({i, j, 1.0});
      if (spec.weight_max > 0.0) {
        auto wrng = substream(seed, "sbm.weights", r);
        for (auto& e : edges) e.weight = wrng.uniform(0.0, spec.weight_max);
      }
      const GeneralGraph g = GeneralGraph::from_triplets(
          n, std::move(edges), GeneralGraph::SparseMode::symmetric_once);
      const EncoderEmbedding emb = encode(g, labels, opts);
      slots[r].add_row(0, emb.values.row(0));
      return;
    }
    auto [graph, labels] = detail::generate_sbm_family(n, spec, seed, r);
    const EncoderEmbedding emb = encode(graph, labels, opts);
    for (int i = 0; i < n; ++i)
      slots[r].add_row(labels[i] - 1, emb.values.row(i));
  });

  detail::MomentSums total(k);
  for (const auto& s : slots) total.merge(s);

  MomentReport report;
  report.n = n;
  report.reps = reps;
  report.counts = total.count;
  report.means = Matrix(k, k);
  report.covariances.assign(static_cast<std::size_t>(k), Matrix(k, k));
  for (int y = 0; y < k; ++y) {
    if (total.count[y] == 0) continue;
    const double inv = 1.0 / static_cast<double>(total.count[y]);
    for (int a = 0; a < k; ++a) report.means(y, a) = total.sum(y, a) * inv;
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        report.covariances[y](a, b) =
            total.outer[y](a, b) * inv - report.means(y, a) * report.means(y, b);
  }
  report.theoretical_means = sbm_closed_form_moments(spec).mean;
  return report;
}

// Largest |off-diagonal correlation| within each class, from the pooled
// covariances; dimensions with no variance are skipped.
inline std::vector<double> max_offdiagonal_correlation(
    const MomentReport& report) {
  const int k = report.means.cols;
  std::vector<double> out(k, 0.0);
  for (int y = 0; y < k; ++y) {
    double worst = 0.0;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        const double va = report.covariances[y](a, a);
        const double vb = report.covariances[y](b, b);
        if (va <= 0.0 || vb <= 0.0) continue;
        worst = std::max(worst, std::abs(report.covariances[y](a, b)) /
                                    std::sqrt(va * vb));
      }
    out[y] = worst;
  }
  return out;
}

inline std::vector<double> cross_covariance_check(const SbmSpec& spec, int n,
                                                  int reps, std::uint64_t seed) {
  return max_offdiagonal_correlation(moment_report(spec, n, reps, seed));
}

struct VarianceScalingReport {
  std::vector<int> sizes;
  std::vector<Matrix> variances;  // per size, K x K (class y, dimension k)
  // ratios[i] = variances[i] ./ variances[i+1], elementwise; under the
  // 1/m_k law this approaches sizes[i+1] / sizes[i].
  std::vector<Matrix> ratios;
};

// Empirical Var(Z_k | class) at each size. Replicate substreams are offset
// per size so the sizes are independent draws.
inline VarianceScalingReport variance_scaling(const SbmSpec& spec,
                                              const std::vector<int>& sizes,
                                              int reps, std::uint64_t seed) {
  if (sizes.size() < 2)
    throw std::invalid_argument("variance_scaling: need at least 2 sizes");
  VarianceScalingReport report;
  report.sizes = sizes;
  const int k = spec.num_classes();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::uint64_t base_rep = s * static_cast<std::uint64_t>(reps);
    std::vector<detail::MomentSums> slots(static_cast<std::size_t>(reps),
                                          detail::MomentSums(k));
    run_replicates(reps, [&](int r) {
      auto [graph, labels] =
          detail::generate_sbm_family(sizes[s], spec, seed, base_rep + r);
      const EncoderEmbedding emb = encode(graph, labels, {false, false});
      for (int i = 0; i < sizes[s]; ++i)
        slots[r].add_row(labels[i] - 1, emb.values.row(i));
    });
    detail::MomentSums total(k);
    for (const auto& sl : slots) total.merge(sl);
    Matrix var(k, k);
    for (int y = 0; y < k; ++y) {
      if (total.count[y] == 0) continue;
      const double inv = 1.0 / static_cast<double>(total.count[y]);
      for (int a = 0; a < k; ++a) {
        const double mean = total.sum(y, a) * inv;
        var(y, a) = total.outer[y](a, a) * inv - mean * mean;
      }
    }
    report.variances.push_back(std::move(var));
  }
  for (std::size_t s = 0; s + 1 < sizes.size(); ++s) {
    Matrix ratio(k, k);
    for (int y = 0; y < k; ++y)
      for (int a = 0; a < k; ++a) {
        const double denom = report.variances[s + 1](y, a);
        ratio(y, a) = denom > 0.0 ? report.variances[s](y, a) / denom : 0.0;
      }
    report.ratios.push_back(std::move(ratio));
  }
  return report;
}

struct NormalityReport {
  int n = 0;
  int reps = 0;
  Matrix skewness;        // K x K, class by dimension
  Matrix excess_kurtosis; // K x K
  Matrix ks_distance;     // K x K, to the fitted normal
  std::vector<std::vector<bool>> constant;  // exact-constant coordinates
  std::vector<double> max_offdiag_correlation;  // per class
};

namespace detail {

inline double standard_normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// One-sample Kolmogorov-Smirnov distance of `xs` to N(mean, sd).
inline double ks_distance(std::vector<double> xs, double mean, double sd) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = standard_normal_cdf((xs[i] - mean) / sd);
    d = std::max(d, std::max(std::abs(f - static_cast<double>(i) / n),
                             std::abs(static_cast<double>(i + 1) / n - f)));
  }
  return d;
}

}  // namespace detail

// Pools per-class coordinates over replicates, standardizes by the pooled
// mean/sd, and reports skewness, excess kurtosis, and the KS distance to the
// standard normal. Zero-variance coordinates are flagged and excluded from KS.
inline NormalityReport normality_report(const SbmSpec& spec, int n, int reps,
                                        std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("normality_report: need reps >= 2");
  const int k = spec.num_classes();
  // samples[r][class][dim] -> values collected by replicate r.
  std::vector<std::vector<std::vector<std::vector<double>>>> slots(
      static_cast<std::size_t>(reps));
  run_replicates(reps, [&](int r) {
    auto [graph, labels] = detail::generate_sbm_family(n, spec, seed, r);
    const EncoderEmbedding emb = encode(graph, labels, {false, false});
    auto& mine = slots[r];
    mine.assign(static_cast<std::size_t>(k),
                std::vector<std::vector<double>>(static_cast<std::size_t>(k)));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < k; ++a)
        mine[labels[i] - 1][a].push_back(emb.values(i, a));
  });

  NormalityReport report;
  report.n = n;
  report.reps = reps;
  report.skewness = Matrix(k, k);
  report.excess_kurtosis = Matrix(k, k);
  report.ks_distance = Matrix(k, k);
  report.constant.assign(k, std::vector<bool>(k, false));
  report.max_offdiag_correlation.assign(k, 0.0);

  for (int y = 0; y < k; ++y) {
    std::vector<std::vector<double>> pooled(static_cast<std::size_t>(k));
    for (int r = 0; r < reps; ++r)
      for (int a = 0; a < k; ++a)
        pooled[a].insert(pooled[a].end(), slots[r][y][a].begin(),
                         slots[r][y][a].end());
    std::vector<double> means(k, 0.0), sds(k, 0.0);
    for (int a = 0; a < k; ++a) {
      const auto& xs = pooled[a];
      const double cnt = static_cast<double>(xs.size());
      if (xs.empty()) {
        report.constant[y][a] = true;
        continue;
      }
      const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
      if (*lo == *hi) {
        report.constant[y][a] = true;
        continue;
      }
      double m = 0.0;
      for (double x : xs) m += x;
      m /= cnt;
      double m2 = 0.0, m3 = 0.0, m4 = 0.0;
      for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
      }
      m2 /= cnt;
      m3 /= cnt;
      m4 /= cnt;
      means[a] = m;
      if (m2 <= 0.0) {
        report.constant[y][a] = true;
        continue;
      }
      sds[a] = std::sqrt(m2);
      report.skewness(y, a) = m3 / (m2 * sds[a]);
      report.excess_kurtosis(y, a) = m4 / (m2 * m2) - 3.0;
      report.ks_distance(y, a) = detail::ks_distance(pooled[a], m, sds[a]);
    }
    // Within-class correlations require paired coordinates; reuse the slot
    // layout, which stores dimensions of one vertex at the same position.
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b) {
        if (report.constant[y][a] || report.constant[y][b]) continue;
        double cov = 0.0;
        double cnt = 0.0;
        for (int r = 0; r < reps; ++r) {
          const auto& xa = slots[r][y][a];
          const auto& xb = slots[r][y][b];
          for (std::size_t i = 0; i < xa.size(); ++i)
            cov += (xa[i] - means[a]) * (xb[i] - means[b]);
          cnt += static_cast<double>(xa.size());
        }
        cov /= cnt;
        report.max_offdiag_correlation[y] =
            std::max(report.max_offdiag_correlation[y],
                     std::abs(cov) / (sds[a] * sds[b]));
      }
  }
  return report;
}

struct BayesGapReport {
  double lda_error = 0.0;
  double plugin_error = 0.0;
  double gap = 0.0;
  std::vector<double> per_rep_gap;
};

namespace detail {

// Plug-in optimal rule from the true generative parameters: Gaussian limit
// with mean mu_y and diagonal covariance variance(y,k)/m_k, weighted by the
// true priors. Ties go to the smallest label.
inline int plugin_predict(std::span<const double> z, const SbmMoments& moments,
                          const std::vector<std::int64_t>& train_counts,
                          const std::vector<double>& priors) {
  const int k = static_cast<int>(priors.size());
  int best = 0;
  double best_score = 0.0;
  for (int y = 0; y < k; ++y) {
    double score = std::log(priors[y]);
    for (int c = 0; c < k; ++c) {
      const double var = std::max(moments.variance(y, c), 1e-12) /
                         static_cast<double>(train_counts[c]);
      const double d = z[c] - moments.mean(y, c);
      score += -0.5 * (d * d / var + std::log(2.0 * std::numbers::pi * var));
    }
    if (y == 0 || score > best_score) {
      best = y;
      best_score = score;
    }
  }
  return best + 1;
}

}  // namespace detail

// LDA-on-embedding error minus plug-in-optimal error under a (weighted) SBM,
// where the Gaussian limit is exact per class. Both classifiers see the same
// label-masked unnormalized embeddings fold by fold.
inline BayesGapReport bayes_gap(const SbmSpec& spec, int n, int reps,
                                std::uint64_t seed, int folds = 5) {
  if (!spec.degree_params.empty())
    throw std::invalid_argument("bayes_gap: requires a plain SBM spec");
  const SbmMoments moments = sbm_closed_form_moments(spec);
  const int k = spec.num_classes();
  const EncodeOptions opts{false, false};

  std::vector<std::pair<double, double>> slot_errors(
      static_cast<std::size_t>(reps));
  run_replicates(reps, [&](int r) {
    auto [graph, labels] = detail::generate_sbm_family(n, spec, seed, r);
    const FoldPlan plan = kfold_split(labels, folds, seed + r, true);
    double lda_wrong = 0.0, plugin_wrong = 0.0, tested = 0.0;
    for (int f = 1; f <= folds; ++f) {
      std::vector<int> masked = labels.values();
      std::vector<int> train_idx, test_idx;
      for (int i = 0; i < n; ++i) {
        if (plan.assignments[i] == f) {
          masked[i] = 0;
          test_idx.push_back(i);
        } else {
          train_idx.push_back(i);
        }
      }
      const LabelVector masked_labels(std::move(masked), k);
      const auto train_counts = class_counts(masked_labels);
      const EncoderEmbedding emb = encode(graph, masked_labels, opts);

      Matrix train_points(static_cast<int>(train_idx.size()), k);
      std::vector<int> train_labels(train_idx.size());
      for (std::size_t t = 0; t < train_idx.size(); ++t) {
        const auto src = emb.values.row(train_idx[t]);
        std::copy(src.begin(), src.end(),
                  train_points.row(static_cast<int>(t)).begin());
        train_labels[t] = labels[train_idx[t]];
      }
      const LdaModel lda = lda_fit(train_points, train_labels, k);
      for (int i : test_idx) {
        const auto z = emb.values.row(i);
        if (lda_predict(lda, z) != labels[i]) lda_wrong += 1.0;
        if (detail::plugin_predict(z, moments, train_counts, spec.priors) !=
            labels[i])
          plugin_wrong += 1.0;
        tested += 1.0;
      }
    }
    slot_errors[r] = {lda_wrong / tested, plugin_wrong / tested};
  });

  BayesGapReport report;
  for (int r = 0; r < reps; ++r) {
    report.lda_error += slot_errors[r].first;
    report.plugin_error += slot_errors[r].second;
    report.per_rep_gap.push_back(slot_errors[r].first - slot_errors[r].second);
  }
  report.lda_error /= static_cast<double>(reps);
  report.plugin_error /= static_cast<double>(reps);
  report.gap = report.lda_error - report.plugin_error;
  return report;
}

}  // namespace gge
