#pragma once

// Seeded generators for the random graph models: stochastic block model
// (binary, weighted, degree-corrected), random dot product graphs, and the
// Gaussian mixture used for feature-based graphs. Identical (spec, seed,
// replicate) always reproduces identical output; edges are drawn for i < j
// only and mirrored, so diagonals are zero by construction.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gge/graph.hpp"
#include "gge/matrix.hpp"
#include "gge/random.hpp"

namespace gge {

struct SbmSpec {
  Matrix block_probs;                 // K x K, entries in [0,1]
  std::vector<double> priors;         // length K, sums to 1
  double weight_max = 0.0;            // 0 = unweighted; else Uniform(0, w) edge weights
  std::vector<double> degree_params;  // empty, or length n for the DC-SBM

  int num_classes() const { return block_probs.rows; }
};

// Canonical three-class benchmark: 0.2 on the diagonal, 0.1 off it.
inline SbmSpec default_sbm_spec(double weight_max = 0.0) {
  SbmSpec spec;
  spec.block_probs = Matrix(3, 3, 0.1);
  for (int k = 0; k < 3; ++k) spec.block_probs(k, k) = 0.2;
  spec.priors = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  spec.weight_max = weight_max;
  return spec;
}

struct GaussianMixSpec {
  int p = 100;
  int num_classes = 3;
  double signal_mean = 3.0;
  double signal_sd = 1.0;
  double noise_mean = 1.0;
  double noise_sd = 0.5;
  std::vector<double> priors;  // empty = equal
};

namespace detail {

inline void validate_priors(const std::vector<double>& priors) {
  double sum = 0.0;
  for (double p : priors) {
    if (p < 0.0) throw std::invalid_argument("priors must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("priors must sum to 1");
}

inline void validate(const SbmSpec& spec) {
  if (spec.block_probs.rows != spec.block_probs.cols ||
      spec.block_probs.rows < 1)
    throw std::invalid_argument("sbm: block matrix must be square");
  for (double b : spec.block_probs.data)
    if (!(b >= 0.0 && b <= 1.0))
      throw std::invalid_argument("sbm: block probabilities must lie in [0,1]");
  if (static_cast<int>(spec.priors.size()) != spec.num_classes())
    throw std::invalid_argument("sbm: priors/block size mismatch");
  validate_priors(spec.priors);
  if (spec.weight_max < 0.0)
    throw std::invalid_argument("sbm: weight_max must be nonnegative");
  for (double t : spec.degree_params)
    if (!(t >= 0.0) || !std::isfinite(t))
      throw std::invalid_argument("sbm: degree parameters must be nonnegative");
}

}  // namespace detail

// i.i.d. categorical labels in 1..K.
inline LabelVector gen_labels(int n, const std::vector<double>& priors,
                              std::uint64_t seed, std::uint64_t replicate = 0) {
  detail::validate_priors(priors);
  auto rng = substream(seed, "labels", replicate);
  std::vector<int> values(n);
  for (int i = 0; i < n; ++i) values[i] = rng.categorical(priors) + 1;
  return LabelVector(std::move(values), static_cast<int>(priors.size()));
}

// Mixture where coordinate k is the signal dimension for class k and every
// other coordinate follows the shared noise law.
inline std::pair<FeatureMatrix, LabelVector> gen_gaussian_mixture(
    int n, const GaussianMixSpec& spec, std::uint64_t seed,
    std::uint64_t replicate = 0) {
  if (spec.num_classes > spec.p)
    throw std::invalid_argument("gaussian mixture: need K <= p");
  if (spec.signal_sd < 0.0 || spec.noise_sd < 0.0)
    throw std::invalid_argument("gaussian mixture: sds must be nonnegative");
  std::vector<double> priors = spec.priors;
  if (priors.empty())
    priors.assign(spec.num_classes, 1.0 / spec.num_classes);
  LabelVector labels = gen_labels(n, priors, seed, replicate);

  auto rng = substream(seed, "gaussmix", replicate);
  FeatureMatrix x(n, spec.p);
  for (int i = 0; i < n; ++i) {
    const int k = labels[i];
    for (int d = 0; d < spec.p; ++d)
      x(i, d) = (d == k - 1) ? rng.normal(spec.signal_mean, spec.signal_sd)
                             : rng.normal(spec.noise_mean, spec.noise_sd);
  }
  return {std::move(x), std::move(labels)};
}

namespace detail {

// Shared Bernoulli edge loop for the SBM family. The same "sbm.edges"
// substream drives plain and degree-corrected draws, so a DC-SBM with unit
// degree parameters reproduces gen_sbm exactly.
inline std::pair<GeneralGraph, LabelVector> sample_sbm_edges(
    int n, const SbmSpec& spec, std::uint64_t seed, std::uint64_t replicate,
    bool degree_corrected) {
  validate(spec);
  if (degree_corrected && !spec.degree_params.empty() &&
      static_cast<int>(spec.degree_params.size()) != n)
    throw std::invalid_argument("dcsbm: degree parameters must have length n");

  LabelVector labels = gen_labels(n, spec.priors, seed, replicate);
  auto rng = substream(seed, "sbm.edges", replicate);
  std::vector<GeneralGraph::Triplet> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = spec.block_probs(labels[i] - 1, labels[j] - 1);
      if (degree_corrected && !spec.degree_params.empty()) {
        p *= spec.degree_params[i] * spec.degree_params[j];
        if (p > 1.0)
          throw std::runtime_error(
              "dcsbm: edge probability exceeds 1 for pair (" +
              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  GeneralGraph g = GeneralGraph::from_triplets(
      n, std::move(edges), GeneralGraph::SparseMode::symmetric_once);
  return {std::move(g), std::move(labels)};
}

}  // namespace detail

// Binary SBM: A(i,j) ~ Bernoulli(B(y_i, y_j)) independently for i < j.
inline std::pair<GeneralGraph, LabelVector> gen_sbm(int n, const SbmSpec& spec,
                                                    std::uint64_t seed,
                                                    std::uint64_t replicate = 0) {
  return detail::sample_sbm_edges(n, spec, seed, replicate, false);
}

// Weighted SBM: the binary draw above, with every realized edge multiplied by
// an independent Uniform(0, weight_max) weight from its own substream. The
// edge set matches gen_sbm for the same (seed, replicate).
inline std::pair<GeneralGraph, LabelVector> gen_weighted_sbm(
    int n, const SbmSpec& spec, std::uint64_t seed,
    std::uint64_t replicate = 0) {
  if (!(spec.weight_max > 0.0))
    throw std::invalid_argument("gen_weighted_sbm: weight_max must be positive");
  auto [g, labels] = detail::sample_sbm_edges(n, spec, seed, replicate, false);
  auto wrng = substream(seed, "sbm.weights", replicate);
  std::vector<GeneralGraph::Triplet> edges = g.triplets();
  for (auto& e : edges) e.weight = wrng.uniform(0.0, spec.weight_max);
  GeneralGraph weighted = GeneralGraph::from_triplets(
      g.size(), std::move(edges), GeneralGraph::SparseMode::symmetric_once);
  return {std::move(weighted), std::move(labels)};
}

// Degree-corrected SBM: A(i,j) ~ Bernoulli(theta_i theta_j B(y_i, y_j)).
// Empty degree_params means all ones.
inline std::pair<GeneralGraph, LabelVector> gen_dcsbm(
    int n, const SbmSpec& spec, std::uint64_t seed,
    std::uint64_t replicate = 0) {
  return detail::sample_sbm_edges(n, spec, seed, replicate, true);
}

// Random dot product graph: A(i,j) ~ Bernoulli(x_i . x_j) for i < j.
inline GeneralGraph gen_rdpg(const FeatureMatrix& latent, std::uint64_t seed,
                             std::uint64_t replicate = 0) {
  const int n = latent.rows;
  auto rng = substream(seed, "rdpg.edges", replicate);
  std::vector<GeneralGraph::Triplet> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double p = 0.0;
      for (int d = 0; d < latent.cols; ++d) p += latent(i, d) * latent(j, d);
      if (p < 0.0 || p > 1.0)
        throw std::runtime_error("rdpg: inner product " + std::to_string(p) +
                                 " outside [0,1] for pair (" +
                                 std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
      if (rng.bernoulli(p)) edges.push_back({i, j, 1.0});
    }
  }
  return GeneralGraph::from_triplets(n, std::move(edges),
                                     GeneralGraph::SparseMode::symmetric_once);
}

// Erdos-Renyi G(n,p) via geometric skips over the upper triangle; O(edges)
// instead of O(n^2). Distributionally a one-block SBM, intended for large
// sparse instances.
inline GeneralGraph gen_gnp(int n, double p, std::uint64_t seed,
                            std::uint64_t replicate = 0) {
  if (!(p >= 0.0 && p < 1.0))
    throw std::invalid_argument("gen_gnp: p must lie in [0,1)");
  auto rng = substream(seed, "gnp.edges", replicate);
  std::vector<GeneralGraph::Triplet> edges;
  if (p > 0.0 && n > 1) {
    const double log1mp = std::log1p(-p);
    const std::uint64_t total =
        static_cast<std::uint64_t>(n) * (n - 1) / 2;
    // Walk a linear index over pairs (i<j); row i covers n-1-i slots.
    std::uint64_t t = 0;
    std::uint64_t i = 0;
    std::uint64_t row_end = static_cast<std::uint64_t>(n) - 1;
    bool first = true;
    while (true) {
      const double gap = std::floor(std::log(rng.uniform_open()) / log1mp);
      t += static_cast<std::uint64_t>(gap) + (first ? 0 : 1);
      first = false;
      if (t >= total) break;
      while (t >= row_end) {
        ++i;
        row_end += static_cast<std::uint64_t>(n) - 1 - i;
      }
      const std::uint64_t offset = t - (row_end - (n - 1 - i));
      const int col = static_cast<int>(i + 1 + offset);
      edges.push_back({static_cast<int>(i), col, 1.0});
    }
  }
  return GeneralGraph::from_triplets(n, std::move(edges),
                                     GeneralGraph::SparseMode::symmetric_once);
}

}  // namespace gge
