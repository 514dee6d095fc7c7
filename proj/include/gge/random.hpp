#pragma once

// Counter-based random number generation (Philox4x32-10) with named,
// splittable substreams. Every stochastic routine in the library draws from a
// stream keyed by (seed, purpose tag, replicate index), so independent
// replicates are reproducible regardless of execution order.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>

namespace gge {

// 32-bit FNV-1a; derives the substream id from a purpose tag.
constexpr std::uint32_t fnv1a32(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 16777619u;
  }
  return h;
}

// Philox4x32-10 block function (Salmon et al., "Parallel Random Numbers:
// As Easy as 1, 2, 3"). 128-bit counter, 64-bit key, 10 rounds.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// One substream of the Philox family. The 128-bit counter is laid out as
// [position.lo, position.hi, replicate.lo, tag ^ replicate.hi], giving every
// (seed, tag, replicate) triple a disjoint 2^64-block stream.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view tag,
               std::uint64_t replicate = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr2_(static_cast<std::uint32_t>(replicate)),
        ctr3_(fnv1a32(tag) ^ static_cast<std::uint32_t>(replicate >> 32)) {}

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) {
      buf_ = Philox4x32::block({static_cast<std::uint32_t>(pos_),
                                static_cast<std::uint32_t>(pos_ >> 32), ctr2_,
                                ctr3_},
                               key_);
      ++pos_;
      buf_pos_ = 0;
    }
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    return lo | (static_cast<std::uint64_t>(next_u32()) << 32);
  }

  // Uniform on [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_open() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound). Used for shuffles.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below: bound must be > 0");
    const auto v = static_cast<std::uint64_t>(uniform() * static_cast<double>(bound));
    return v >= bound ? bound - 1 : v;
  }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Index in [0, probs.size()) drawn from the given probability vector.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
      cum += probs[k];
      if (u < cum) return static_cast<int>(k);
    }
    return static_cast<int>(probs.size()) - 1;
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t ctr2_ = 0;
  std::uint32_t ctr3_ = 0;
  std::uint64_t pos_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline RandomStream substream(std::uint64_t seed, std::string_view tag,
                              std::uint64_t replicate = 0) {
  return RandomStream(seed, tag, replicate);
}

}  // namespace gge
