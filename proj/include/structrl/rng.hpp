#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace structrl {

/// Named sub-streams forked from one (base, run_seed) pair. Keeping the
/// streams separate means e.g. switching the replay strategy cannot shift
/// the action-sampling sequence.
enum class StreamId : std::uint64_t {
  Env = 1,
  Policy = 2,
  Replay = 3,
  Analysis = 4,
};

/// Deterministic random stream. All distributions are derived from the raw
/// mt19937_64 output here rather than through std:: distribution objects, so
/// a (base, run_seed, stream) triple always reproduces the same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t base, std::uint64_t run_seed, StreamId stream) {
    std::seed_seq seq{base, run_seed, static_cast<std::uint64_t>(stream)};
    engine_.seed(seq);
  }

  /// Uniform double in [0, 1).
  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). n must be positive.
  int uniform_int(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return static_cast<int>(x % bound);
  }

  /// Index sampled proportionally to the given non-negative weights.
  /// Consumes exactly one uniform draw.
  int pick_weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double r = uniform_real() * total;
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (weights[i] > 0.0) last_positive = static_cast<int>(i);
      acc += weights[i];
      if (r < acc) return static_cast<int>(i);
    }
    return last_positive;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace structrl
