#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "rsfb/channel.hpp"
#include "rsfb/error.hpp"

using namespace rsfb;

namespace {

CVector random_unit(int M, RandomStream& r) { return sample_isotropic_unit(M, r); }

}  // namespace

TEST_CASE("vector helpers") {
  const CVector a{{1.0, 0.0}, {0.0, 1.0}};
  const CVector b{{0.0, 1.0}, {2.0, 0.0}};
  // a^H b = conj(1) * i + conj(i) * 2 = i - 2i
  CHECK(inner(a, b) == cplx(0.0, -1.0));
  CHECK(norm_sq(a) == 2.0);
  CHECK(gain(a, b) == 1.0);
  CHECK(norm_sq(normalized(b)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(normalized(CVector(3)), DomainError);

  CVector v{{0.0, 0.0}, {0.0, -2.0}, {1.0, 1.0}};
  apply_phase_convention(v);
  CHECK(v[1].real() == doctest::Approx(2.0));
  CHECK(v[1].imag() == doctest::Approx(0.0));
  CHECK(std::abs(v[2]) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("channel samples have CN(0,1) entries") {
  RandomStream r(5);
  double p = 0.0;
  constexpr int n = 50000;
  for (int i = 0; i < n; ++i) p += norm_sq(sample_channel(4, r).entries);
  CHECK(p / (4.0 * n) == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(sample_channel(1, r), DomainError);
}

TEST_CASE("nullspace samples are orthogonal unit vectors") {
  RandomStream r(9);
  for (int M : {2, 3, 4, 8}) {
    for (int i = 0; i < 200; ++i) {
      const CVector v = random_unit(M, r);
      const CVector w = sample_unit_in_nullspace(v, r);
      CHECK(norm_sq(w) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(inner(v, w)) < 1e-10);
    }
  }
}

TEST_CASE("quantization error law") {
  RandomStream r(21);
  // Minimum of two uniform errors at M = 2 has mean 1/3.
  double s = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) s += sample_quantization_error(2, 1.0, r);
  CHECK(s / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK_THROWS_AS(sample_quantization_error(4, -1.0, r), DomainError);
}

TEST_CASE("RVQ reports are consistent with the channel") {
  RandomStream r(3);
  for (auto mode : {QuantizerMode::kExplicit, QuantizerMode::kStatistical}) {
    for (int M : {2, 4}) {
      for (int i = 0; i < 100; ++i) {
        const auto h = sample_channel(M, r);
        const auto rep = quantize_rvq(h, 6.0, mode, r);
        CHECK(norm_sq(rep.direction) == doctest::Approx(1.0).epsilon(1e-12));
        const double cos2 = gain(h.direction(), rep.direction);
        CHECK(rep.sin2_error == doctest::Approx(1.0 - cos2).epsilon(1e-10));
        CHECK(rep.bits == 6.0);
      }
    }
  }
}

TEST_CASE("explicit RVQ with one codeword") {
  RandomStream r(17);
  constexpr int n = 50000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += quantize_rvq(sample_channel(4, r), 0.0, QuantizerMode::kExplicit, r).sin2_error;
  CHECK(s / n == doctest::Approx(0.75).epsilon(0.01));
}

TEST_CASE("mean quantization error stays below 2^{-B/(M-1)}") {
  RandomStream r(23);
  for (auto mode : {QuantizerMode::kExplicit, QuantizerMode::kStatistical}) {
    double s = 0.0;
    constexpr int n = 3000;
    for (int i = 0; i < n; ++i) s += quantize_rvq(sample_channel(4, r), 10.0, mode, r).sin2_error;
    CHECK(s / n < std::pow(2.0, -10.0 / 3.0));
  }
}

TEST_CASE("explicit RVQ argument checks") {
  RandomStream r(1);
  const auto h = sample_channel(4, r);
  CHECK_THROWS_AS(quantize_rvq(h, 2.5, QuantizerMode::kExplicit, r), DomainError);
  CHECK_THROWS_AS(quantize_rvq(h, 31.0, QuantizerMode::kExplicit, r), DomainError);
  CHECK_NOTHROW(quantize_rvq(h, 2.5, QuantizerMode::kStatistical, r));
  ChannelVector zero{CVector(4)};
  CHECK_THROWS_AS(quantize_rvq(zero, 3.0, QuantizerMode::kStatistical, r), DomainError);
}

TEST_CASE("quantizer modes agree in distribution") {
  // Smaller than the acceptance run; catches gross mismatches quickly.
  for (int M : {2, 4}) {
    for (int B : {2, 6}) {
      RandomStream r(100 + M * 10 + B);
      std::vector<double> a, b;
      for (int i = 0; i < 20000; ++i) {
        const auto h = sample_channel(M, r);
        a.push_back(quantize_rvq(h, B, QuantizerMode::kExplicit, r).sin2_error);
        b.push_back(quantize_rvq(h, B, QuantizerMode::kStatistical, r).sin2_error);
      }
      CAPTURE(M);
      CAPTURE(B);
      CHECK(oracle::ks(a, b) < 0.02);
    }
  }
}

TEST_CASE("pseudo-inverse precoders match an SVD oracle") {
  RandomStream r(31);
  for (int M : {2, 3, 4, 6}) {
    for (int i = 0; i < 50; ++i) {
      const CVector h1 = random_unit(M, r);
      const CVector h2 = random_unit(M, r);
      const auto [w1, w2] = zf_pseudoinverse_precoders(h1, h2);
      CHECK(std::abs(inner(h2, w1)) < 1e-10);
      CHECK(std::abs(inner(h1, w2)) < 1e-10);
      const auto P = oracle::pinv(oracle::stacked(h1, h2));
      const Eigen::VectorXcd c1 = P.col(0).normalized();
      const Eigen::VectorXcd c2 = P.col(1).normalized();
      CHECK(oracle::overlap(c1, w1) > 1.0 - 1e-9);
      CHECK(oracle::overlap(c2, w2) > 1.0 - 1e-9);
    }
  }
}

TEST_CASE("pseudo-inverse of orthonormal inputs returns the inputs") {
  const CVector e1{{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const CVector e2{{0.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
  const auto [w1, w2] = zf_pseudoinverse_precoders(e1, e2);
  CHECK(gain(w1, e1) == doctest::Approx(1.0));
  CHECK(gain(w2, e2) == doctest::Approx(1.0));
}

TEST_CASE("pseudo-inverse rejects collinear directions") {
  RandomStream r(2);
  const CVector h = random_unit(4, r);
  CVector h2 = h;
  for (auto& z : h2) z *= std::polar(1.0, 0.7);
  CHECK_THROWS_AS(zf_pseudoinverse_precoders(h, h2), DegenerateGeometryError);
}

TEST_CASE("dominant right singular vector") {
  RandomStream r(41);
  for (int M : {2, 4, 5}) {
    for (int i = 0; i < 50; ++i) {
      const CVector h1 = random_unit(M, r);
      const CVector h2 = random_unit(M, r);
      const CVector v = dominant_right_singular(h1, h2);
      CHECK(norm_sq(v) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(oracle::overlap(oracle::top_right_singular(oracle::stacked(h1, h2)), v) > 1.0 - 1e-9);
      // phase convention
      std::size_t k = 0;
      while (std::abs(v[k]) == 0.0) ++k;
      CHECK(v[k].real() > 0.0);
      CHECK(std::abs(v[k].imag()) < 1e-12);
    }
  }
  const CVector u = random_unit(4, r);
  const CVector v = dominant_right_singular(u, u);
  CHECK(gain(u, v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(dominant_right_singular(CVector(4), CVector(4)), DomainError);
}
