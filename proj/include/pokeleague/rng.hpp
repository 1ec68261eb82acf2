#pragma once

#include <cstdint>
#include <string_view>

namespace pokeleague {

/// SplitMix64 stream. The whole generator state is one word, so it
/// serializes into battle snapshots and digests without loss.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = -bound % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

  /// Uniform integer in [lo, hi].
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool one_in(std::uint64_t n) { return below(n) == 0; }
  bool coin() { return below(2) == 0; }

  /// True with probability p, resolved at 1/10000 granularity. p <= 0 and
  /// p >= 1 do not consume a draw.
  bool chance(double p);

  std::uint64_t state() const { return state_; }
  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

/// Stable sub-seed for a labelled sub-stream (e.g. a match id).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

}  // namespace pokeleague
