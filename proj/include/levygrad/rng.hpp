#pragma once

#include <cstdint>
#include <random>

namespace levygrad {

// Purpose tags keep the clock and the Brownian draws of one path on
// independent streams, so either can be regenerated on its own.
enum class StreamPurpose : std::uint32_t {
  kClock = 1,
  kIncrements = 2,
  kAuxiliary = 3,
  kInternal = 4,
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose);

/// Random stream keyed by (seed, path index, purpose). Path i of seed s is
/// reproducible regardless of which worker generates it or in which order.
class RngStream {
 public:
  using result_type = std::mt19937_64::result_type;

  RngStream(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose)
      : engine_(mix_seed(seed, index, purpose)) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }
  /// Uniform on (0, 1].
  double uniform_open_left() { return 1.0 - uniform(); }
  double normal() { return normal_(engine_); }
  long poisson(double mean);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace levygrad
