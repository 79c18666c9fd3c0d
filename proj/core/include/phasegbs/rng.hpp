#pragma once

#include <cstdint>
#include <random>

namespace phasegbs {

/// Independent purposes that draw randomness from one master seed.
enum class StreamDomain : std::uint64_t {
  input_samples = 1,
  vacuum_noise = 2,
  random_unitary = 3,
  synthetic_patterns = 4,
};

/// Derives the seed of stream `index` in `domain` from a master seed.
/// A fixed chain of splitmix64 finalizers, so the mapping is the same on
/// every platform and does not depend on how work is scheduled.
std::uint64_t derive_stream_seed(std::uint64_t master, StreamDomain domain,
                                 std::uint64_t index);

/// Standard normal deviates from a 64-bit Mersenne Twister via the
/// Box-Muller transform. Both the engine and the transform are fully
/// specified, so a seed reproduces the same deviates everywhere.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace phasegbs
