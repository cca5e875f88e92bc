#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace rsfb {

/// xoshiro256** engine. Cheap to seed, so every (trial, role) pair gets its own.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Circularly symmetric complex Gaussian with unit variance, CN(0, 1).
  std::complex<double> complex_normal();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// What a substream is used for within one Monte Carlo trial.
enum class StreamRole : std::uint32_t {
  kChannel = 1,
  kQuantizer = 2,
  kCommonPrecoder = 3,
  kPrivatePrecoder = 4,
  kPerfectPrecoder = 5,
  kAuxiliary = 6,
};

/// Deterministic substream for (master seed, trial, role, index).
///
/// Substreams depend only on these labels, never on which worker runs the
/// trial, so Monte Carlo results are invariant to the worker count.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamRole role,
                           std::uint32_t index = 0);

}  // namespace rsfb
