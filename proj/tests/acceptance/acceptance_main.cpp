// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// gating criterion fails. Thresholds are pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gge/gge.hpp"
#include "support/reference.hpp"

namespace {

using gge::ClassifierSpec;
using gge::EncodeOptions;
using gge::GeneralGraph;
using gge::LabelVector;
using gge::Matrix;
using Mode = GeneralGraph::SparseMode;
using Triplet = GeneralGraph::Triplet;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct RandomInstance {
  GeneralGraph graph;
  LabelVector labels;
  EncodeOptions opts;
};

RandomInstance random_instance(gge::RandomStream& rng, int max_n,
                               bool integer_weights) {
  const int num_classes = 1 + static_cast<int>(rng.below(5));
  const int n =
      std::max<int>(num_classes, 2 + static_cast<int>(rng.below(max_n)));
  std::vector<int> labels(n);
  for (int i = 0; i < num_classes; ++i) labels[i] = i + 1;
  const bool with_zeros = rng.bernoulli(0.5);
  for (int i = num_classes; i < n; ++i)
    labels[i] = (with_zeros && rng.bernoulli(0.2))
                    ? 0
                    : 1 + static_cast<int>(rng.below(num_classes));
  const bool binary = rng.bernoulli(0.5);
  auto weight = [&]() {
    if (binary) return 1.0;
    if (integer_weights) return static_cast<double>(rng.below(9) + 1);
    return rng.uniform(-2.0, 2.0);
  };
  std::vector<Triplet> trips;
  const int edges = static_cast<int>(rng.below(3 * n + 1));
  for (int e = 0; e < edges; ++e)
    trips.push_back({static_cast<int>(rng.below(n)),
                     static_cast<int>(rng.below(n)), weight()});
  const auto mode = rng.bernoulli(0.5) ? Mode::symmetric_once : Mode::as_stored;
  GeneralGraph sparse = GeneralGraph::from_triplets(n, trips, mode);
  GeneralGraph graph = rng.bernoulli(0.5) ? gge::densify(sparse) : sparse;
  EncodeOptions opts{rng.bernoulli(0.5), rng.bernoulli(0.3)};
  return {std::move(graph), LabelVector(std::move(labels), num_classes), opts};
}

// C1: dense path, sparse path, and the per-definition oracle agree to 1e-12
// on 200 random instances covering every storage/weight/label-0 combination.
Outcome criterion_oracle_equivalence() {
  auto rng = gge::substream(20240601, "accept.c1");
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, 100, false);
    const auto dense = gge::densify(inst.graph);
    const auto z_dense = gge::encode_dense(dense, inst.labels, inst.opts);
    const auto z_oracle =
        gge::testing::encode_oracle(inst.graph, inst.labels, inst.opts);
    worst = std::max(
        worst, gge::testing::max_abs_diff(z_dense.values, z_oracle.values));
    const auto z_sparse =
        gge::encode_sparse(gge::sparsify(inst.graph), inst.labels, inst.opts);
    worst = std::max(
        worst, gge::testing::max_abs_diff(z_sparse.values, z_dense.values));
  }
  return {worst <= 1e-12,
          "max |dense - oracle|, |sparse - dense| = " + std::to_string(worst) +
              " (tolerance 1e-12, 200 instances)"};
}

// C2: permutation equivariance, positive-scale invariance of the normalized
// embedding, and column-locality hold exactly on 100 random instances.
Outcome criterion_equivariance() {
  auto rng = gge::substream(20240602, "accept.c2");
  for (int trial = 0; trial < 100; ++trial) {
    // Integer weights keep raw class sums exact, so permutation and
    // power-of-two scaling must match bit for bit.
    const auto inst = random_instance(rng, 60, true);
    const auto dense = gge::densify(inst.graph);
    const int n = dense.size();
    const int num_classes = inst.labels.num_classes();

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<int>(perm));
    Matrix pa(n, n);
    std::vector<int> plabels(n);
    for (int i = 0; i < n; ++i) {
      plabels[i] = inst.labels[perm[i]];
      for (int j = 0; j < n; ++j) pa(i, j) = dense.dense()(perm[i], perm[j]);
    }
    const auto z = gge::encode_dense(dense, inst.labels, inst.opts);
    const auto pz =
        gge::encode_dense(GeneralGraph::from_dense(std::move(pa)),
                          LabelVector(plabels, num_classes), inst.opts);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < num_classes; ++k)
        if (pz.values(i, k) != z.values(perm[i], k))
          return {false, "permutation equivariance broke at trial " +
                             std::to_string(trial)};

    Matrix scaled = dense.dense();
    for (double& v : scaled.data) v *= 4.0;
    const auto zn = gge::encode_dense(dense, inst.labels,
                                      {true, inst.opts.zero_diagonal});
    const auto zn4 =
        gge::encode_dense(GeneralGraph::from_dense(std::move(scaled)),
                          inst.labels, {true, inst.opts.zero_diagonal});
    if (!(zn.values == zn4.values))
      return {false,
              "scale invariance broke at trial " + std::to_string(trial)};

    const int target = 1 + static_cast<int>(rng.below(num_classes));
    Matrix perturbed = dense.dense();
    for (int j = 0; j < n; ++j) {
      if (inst.labels[j] == target) continue;
      for (int i = 0; i < n; ++i) perturbed(i, j) += rng.uniform(-1.0, 1.0);
    }
    const EncodeOptions raw{false, inst.opts.zero_diagonal};
    const auto zr = gge::encode_dense(dense, inst.labels, raw);
    const auto zp =
        gge::encode_dense(GeneralGraph::from_dense(std::move(perturbed)),
                          inst.labels, raw);
    for (int i = 0; i < n; ++i)
      if (zp.values(i, target - 1) != zr.values(i, target - 1))
        return {false,
                "column locality broke at trial " + std::to_string(trial)};
  }
  return {true,
          "permutation, scaling, and column-locality exact on 100 instances"};
}

struct CvSummary {
  double mean = 0.0;
  double sd = 0.0;
};

template <typename MakeGraph>
CvSummary replicated_cv(int n, int reps, std::uint64_t seed,
                        MakeGraph&& make_graph) {
  std::vector<double> errors(reps);
  gge::run_replicates(reps, [&](int r) {
    auto [graph, labels] = make_graph(n, r);
    const auto plan = gge::kfold_split(labels, 5, seed + r, true);
    errors[r] = gge::cv_error(graph, labels, plan, ClassifierSpec::lda(),
                              {true, false})
                    .mean_error;
  });
  CvSummary s;
  for (double e : errors) s.mean += e;
  s.mean /= reps;
  for (double e : errors) s.sd += (e - s.mean) * (e - s.mean);
  s.sd = std::sqrt(s.sd / reps);
  return s;
}

// C3: weighted SBM, n=500: 5-fold encoder+LDA error over 20 seeded CV
// repetitions per instance stays <= 0.10 with repetition sd <= 0.01 (three
// seeded instances), and the error shrinks from n=50.
Outcome criterion_wsbm_classification() {
  const auto spec = gge::default_sbm_spec(10.0);
  double mean500 = 0.0, worst_sd = 0.0;
  for (int inst = 0; inst < 3; ++inst) {
    auto [graph, labels] = gge::gen_weighted_sbm(500, spec, 913, inst);
    const auto res = gge::repeat_cv(graph, labels, 5, 20, 101 + 50 * inst,
                                    ClassifierSpec::lda(), {true, false});
    mean500 += res.mean_error / 3.0;
    worst_sd = std::max(worst_sd, res.std_error);
  }
  double mean50 = 0.0;
  for (int inst = 0; inst < 3; ++inst) {
    auto [graph, labels] = gge::gen_weighted_sbm(50, spec, 917, inst);
    const auto res = gge::repeat_cv(graph, labels, 5, 20, 103 + 50 * inst,
                                    ClassifierSpec::lda(), {true, false});
    mean50 += res.mean_error / 3.0;
  }
  char buf[160];
  std::snprintf(
      buf, sizeof(buf),
      "n=500 error %.4f (<=0.10), max sd %.4f (<=0.01), n=50 error %.4f (must exceed)",
      mean500, worst_sd, mean50);
  return {mean500 <= 0.10 && worst_sd <= 0.01 && mean500 < mean50, buf};
}

// C4: Gaussian mixture (p=100, K=3) through the distance-to-kernel graph:
// error <= 0.15 at n=500 over 20 replicates and decreasing from n=50.
Outcome criterion_gaussian_classification() {
  const gge::GaussianMixSpec mix;
  const gge::KernelSpec dk = gge::parse_kernel_spec("dk");
  auto make = [&](int n, int r) {
    auto [x, labels] =
        gge::gen_gaussian_mixture(n, mix, 929, static_cast<std::uint64_t>(r));
    return std::pair<GeneralGraph, LabelVector>(gge::pairwise_graph(x, dk),
                                                std::move(labels));
  };
  const CvSummary big = replicated_cv(500, 20, 107, make);
  auto make_small = [&](int n, int r) {
    auto [x, labels] = gge::gen_gaussian_mixture(
        n, mix, 937, static_cast<std::uint64_t>(r) + 1000);
    return std::pair<GeneralGraph, LabelVector>(gge::pairwise_graph(x, dk),
                                                std::move(labels));
  };
  const CvSummary small = replicated_cv(50, 20, 109, make_small);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "n=500 error %.4f (<=0.15), n=50 error %.4f (must exceed)",
                big.mean, small.mean);
  return {big.mean <= 0.15 && big.mean < small.mean, buf};
}

// C5: binary SBM moments at n=2000 over 50 replicates: class means within
// 0.01 of mu_y(k) = B(y,k) and within-class off-diagonal correlation <= 0.1.
Outcome criterion_moments() {
  const auto spec = gge::default_sbm_spec();
  const auto report = gge::moment_report(spec, 2000, 50, 941);
  // Independent oracle: the closed-form limit recomputed from the benchmark
  // block matrix right here, not taken from the library.
  double worst_mean = 0.0;
  for (int y = 0; y < 3; ++y)
    for (int k = 0; k < 3; ++k) {
      const double expected = (y == k) ? 0.2 : 0.1;
      worst_mean =
          std::max(worst_mean, std::abs(report.means(y, k) - expected));
    }
  const auto corr = gge::max_offdiagonal_correlation(report);
  const double worst_corr = *std::max_element(corr.begin(), corr.end());
  char buf[160];
  std::snprintf(
      buf, sizeof(buf),
      "max |mean - B| = %.5f (<=0.01), max offdiag corr = %.4f (<=0.1)",
      worst_mean, worst_corr);
  return {worst_mean <= 0.01 && worst_corr <= 0.1, buf};
}

// C6: Var(Z_k | class) ratio between n=500 and n=2000 within [3.2, 4.8] for
// every class/dimension cell, 100 replicates.
Outcome criterion_variance_scaling() {
  const auto report =
      gge::variance_scaling(gge::default_sbm_spec(), {500, 2000}, 100, 947);
  double lo = 1e9, hi = 0.0;
  for (int y = 0; y < 3; ++y)
    for (int k = 0; k < 3; ++k) {
      lo = std::min(lo, report.ratios[0](y, k));
      hi = std::max(hi, report.ratios[0](y, k));
    }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "variance ratios in [%.3f, %.3f] (target [3.2, 4.8])", lo, hi);
  return {lo >= 3.2 && hi <= 4.8, buf};
}

// C7: normality at n=4000 (|skew| <= 0.2, |excess kurtosis| <= 0.3) and the
// KS distance strictly shrinks from n=500 to n=4000, 50 replicates each.
Outcome criterion_normality() {
  const auto spec = gge::default_sbm_spec();
  const auto big = gge::normality_report(spec, 4000, 50, 953);
  const auto small = gge::normality_report(spec, 500, 50, 953);
  double worst_skew = 0.0, worst_kurt = 0.0;
  bool ks_shrinks = true;
  for (int y = 0; y < 3; ++y)
    for (int k = 0; k < 3; ++k) {
      worst_skew = std::max(worst_skew, std::abs(big.skewness(y, k)));
      worst_kurt = std::max(worst_kurt, std::abs(big.excess_kurtosis(y, k)));
      if (!(big.ks_distance(y, k) < small.ks_distance(y, k)))
        ks_shrinks = false;
    }
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "max |skew| %.4f (<=0.2), max |exkurt| %.4f (<=0.3), KS shrinks: %s",
      worst_skew, worst_kurt, ks_shrinks ? "yes" : "no");
  return {worst_skew <= 0.2 && worst_kurt <= 0.3 && ks_shrinks, buf};
}

// C8: LDA-vs-plug-in gap <= 0.02 at n=2000 and non-increasing from n=200,
// 50 replicates.
Outcome criterion_bayes_gap() {
  const auto spec = gge::default_sbm_spec(10.0);
  const auto big = gge::bayes_gap(spec, 2000, 50, 967);
  const auto small = gge::bayes_gap(spec, 200, 50, 967);
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "gap(2000) %.5f (<=0.02), gap(200) %.5f (must be >=), lda(2000) %.5f",
      big.gap, small.gap, big.lda_error);
  return {big.gap <= 0.02 && big.gap <= small.gap, buf};
}

// C9: encode_sparse is O(s + nK): with average degree fixed at 20, doubling
// n (and s with it) must grow the measured time by at most 2.5x. Rounds are
// interleaved across the sizes so clock/load drift cancels, and the minimum
// over rounds estimates each size's cost floor.
Outcome criterion_sparse_performance() {
  using Clock = std::chrono::steady_clock;
  const std::vector<int> sizes = {12500, 25000, 50000};
  std::vector<GeneralGraph> graphs;
  std::vector<LabelVector> labels;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const double p = 20.0 / static_cast<double>(sizes[s] - 1);
    graphs.push_back(gge::gen_gnp(sizes[s], p, 971, s));
    labels.push_back(gge::gen_labels(sizes[s], {1.0 / 3, 1.0 / 3, 1.0 / 3}, 977, s));
  }
  std::vector<double> best(sizes.size(), 1e30);
  double sink = 0.0;
  for (int round = 0; round < 30; ++round) {
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const auto t0 = Clock::now();
      const auto emb = gge::encode_sparse(graphs[s], labels[s], {true, false});
      const auto t1 = Clock::now();
      sink += emb.values(0, 0);
      if (round > 0)  // first round warms caches and the allocator
        best[s] =
            std::min(best[s], std::chrono::duration<double>(t1 - t0).count());
    }
  }
  const double r1 = best[1] / best[0];
  const double r2 = best[2] / best[1];
  char buf[200];
  std::snprintf(
      buf, sizeof(buf),
      "min times %.3fms / %.3fms / %.3fms, ratios %.2f, %.2f (<=2.5) [sink %.2f]",
      best[0] * 1e3, best[1] * 1e3, best[2] * 1e3, r1, r2, sink);
  return {r1 <= 2.5 && r2 <= 2.5, buf};
}

Outcome criterion_external_dataset_protocol() {
  return {true,
          "informational: real datasets are not shipped; `gge cv --graph "
          "<weighted-graph.csv> --labels <labels.csv> --classifier lda "
          "--folds 5 --reps 50 --seed S` runs the full evaluation protocol "
          "(published reference on the weighted Wikipedia graph: 19.3 +/- "
          "0.4% error)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    bool gating;
  };
  const std::vector<Criterion> criteria = {
      {"C1 oracle equivalence", criterion_oracle_equivalence, true},
      {"C2 equivariance suite", criterion_equivariance, true},
      {"C3 weighted SBM classification", criterion_wsbm_classification, true},
      {"C4 Gaussian mixture classification", criterion_gaussian_classification,
       true},
      {"C5 class-moment limits", criterion_moments, true},
      {"C6 variance scaling law", criterion_variance_scaling, true},
      {"C7 normality diagnostics", criterion_normality, true},
      {"C8 plug-in optimality gap", criterion_bayes_gap, true},
      {"C9 sparse-path performance", criterion_sparse_performance, true},
      {"C10 user-supplied dataset protocol", criterion_external_dataset_protocol, false},
  };

  // The timing criterion (index 8) runs first, on a cold machine; everything
  // else follows in order. Results are printed in criterion order.
  std::vector<std::size_t> order = {8, 0, 1, 2, 3, 4, 5, 6, 7, 9};
  std::vector<Outcome> outcomes(criteria.size());
  for (std::size_t idx : order) {
    try {
      outcomes[idx] = criteria[idx].run();
    } catch (const std::exception& e) {
      outcomes[idx] = {false, std::string("exception: ") + e.what()};
    }
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!outcomes[i].pass && criteria[i].gating) ++failures;
    std::printf("[%s] %s: %s\n", outcomes[i].pass ? "PASS" : "FAIL",
                criteria[i].name, outcomes[i].detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d gating criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all gating criteria passed\n");
  return 0;
}
