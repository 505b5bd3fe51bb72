#pragma once

#include <cstdint>
#include <random>

namespace covert {

/// Reproducible random stream addressed by (seed, stream id).
///
/// Every Monte-Carlo trial owns its own stream, so results do not depend on
/// how trials are scheduled across workers.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    engine_.seed(seq);
  }

  double normal(double stddev) { return stddev * normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace covert
