#include "rsfb/rng.hpp"

#include <cmath>
#include <numbers>

namespace rsfb {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) {
  for (auto& word : s_) word = splitmix64(seed);
}

RandomStream::result_type RandomStream::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() {
  // 53 random bits, offset by half an ulp so neither 0 nor 1 is produced.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

std::complex<double> RandomStream::complex_normal() {
  // |z|^2 = -ln(u1) ~ Exp(1); the phase is uniform.
  const double radius = std::sqrt(-std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  return std::polar(radius, angle);
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t trial, StreamRole role,
                           std::uint32_t index) {
  std::uint64_t state = master_seed;
  std::uint64_t key = splitmix64(state);
  state = key ^ (trial * 0xD1B54A32D192ED03ULL);
  key = splitmix64(state);
  state = key ^ ((static_cast<std::uint64_t>(role) << 32) | index);
  return RandomStream(splitmix64(state));
}

}  // namespace rsfb
