#include <cmath>
#include <set>

#include <doctest.h>

#include "rsfb/rng.hpp"

using namespace rsfb;

TEST_CASE("substreams are reproducible and distinct") {
  auto a = derive_stream(7, 3, StreamRole::kChannel);
  auto b = derive_stream(7, 3, StreamRole::kChannel);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  std::set<std::uint64_t> firsts;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    for (auto role : {StreamRole::kChannel, StreamRole::kQuantizer, StreamRole::kCommonPrecoder,
                      StreamRole::kPrivatePrecoder, StreamRole::kPerfectPrecoder}) {
      for (std::uint32_t idx = 0; idx < 4; ++idx) firsts.insert(derive_stream(1, trial, role, idx)());
    }
  }
  CHECK(firsts.size() == 50 * 5 * 4);
  CHECK(derive_stream(1, 0, StreamRole::kChannel)() != derive_stream(2, 0, StreamRole::kChannel)());
}

TEST_CASE("uniform stays in the open unit interval") {
  RandomStream r(0);
  double sum = 0.0;
  constexpr int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("complex normal has unit variance and circular symmetry") {
  RandomStream r(11);
  constexpr int n = 200000;
  double p = 0.0, re = 0.0, im = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = r.complex_normal();
    p += std::norm(z);
    re += z.real() * z.real();
    im += z.imag() * z.imag();
    cross += z.real() * z.imag();
  }
  CHECK(p / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(re / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(cross / n) < 0.005);
}
