#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "rsfb/error.hpp"
#include "rsfb/numerics.hpp"

using namespace rsfb;
using namespace rsfb::numerics;

TEST_CASE("E1 against quadrature") {
  CHECK(exp_integral_e1(1.0) == doctest::Approx(0.2193839).epsilon(1e-6));
  CHECK(exp_integral_e1(2.0) == doctest::Approx(0.0489005).epsilon(1e-5));
  for (double x : {1e-6, 1e-3, 0.1, 0.5, 0.999, 1.0, 1.001, 3.0, 10.0, 40.0, 200.0}) {
    CAPTURE(x);
    CHECK(exp_integral_e1(x) == doctest::Approx(oracle::en(1, x)).epsilon(1e-10));
  }
}

TEST_CASE("E1 leading asymptotic term") {
  const double x = 50.0;
  CHECK(exp_integral_e1_scaled(x) * x == doctest::Approx(1.0).epsilon(0.02));
  CHECK(exp_integral_e1_scaled(800.0) > 0.0);
  CHECK(std::isfinite(exp_integral_e1_scaled(800.0)));
}

TEST_CASE("E1 is strictly decreasing") {
  double prev = exp_integral_e1(1e-4);
  for (double x = 2e-4; x < 60.0; x *= 1.3) {
    const double v = exp_integral_e1(x);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("E1 rejects non-positive arguments") {
  CHECK_THROWS_AS(exp_integral_e1(0.0), DomainError);
  CHECK_THROWS_AS(exp_integral_e1(-1.0), DomainError);
  CHECK_THROWS_AS(exp_integral_e1(std::nan("")), DomainError);
}

TEST_CASE("E_n against quadrature") {
  for (int n : {1, 2, 3, 5, 8}) {
    for (double x : {0.05, 0.7, 1.5, 6.0, 25.0}) {
      CAPTURE(n);
      CAPTURE(x);
      CHECK(exp_integral_en(n, x) == doctest::Approx(oracle::en(n, x)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(exp_integral_en(0, 1.0), DomainError);
}

TEST_CASE("phi reference values") {
  CHECK(phi(0.5) == doctest::Approx(0.361328).epsilon(1e-6));
  CHECK(phi(1000.0) == doctest::Approx(-kEulerGamma + std::log(1000.0)).epsilon(1e-3));
  CHECK(phi(1e-4) / 1e-4 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(phi(0.0), DomainError);
}

TEST_CASE("phi matches E[ln(1 + xZ)] over a log grid") {
  for (double x = 1e-3; x <= 1e6; x *= 3.7) {
    CAPTURE(x);
    CHECK(phi(x) == doctest::Approx(oracle::phi(x)).epsilon(1e-9));
  }
}

TEST_CASE("upper incomplete gamma") {
  CHECK(upper_incomplete_gamma(1, 2.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(upper_incomplete_gamma(0, 1.0) == doctest::Approx(exp_integral_e1(1.0)).epsilon(1e-14));
  CHECK(upper_incomplete_gamma(-1, 1.0) == doctest::Approx(0.148496).epsilon(1e-5));
  CHECK_THROWS_AS(upper_incomplete_gamma(-1, 0.0), DomainError);
}

TEST_CASE("upper incomplete gamma against quadrature") {
  for (int r = -7; r <= 4; ++r) {
    for (double a : {0.05, 0.5, 1.0, 2.0, 5.0, 12.0}) {
      CAPTURE(r);
      CAPTURE(a);
      CHECK(upper_incomplete_gamma(r, a) == doctest::Approx(oracle::upper_gamma(r, a)).epsilon(1e-9));
    }
  }
}

TEST_CASE("upper incomplete gamma recurrence consistency") {
  for (int r = -5; r <= 1; ++r) {
    for (double a : {0.5, 1.0, 2.0, 5.0}) {
      CAPTURE(r);
      CAPTURE(a);
      const double lhs = r * upper_incomplete_gamma(r, a) + std::pow(a, r) * std::exp(-a);
      CHECK(lhs == doctest::Approx(upper_incomplete_gamma(r + 1, a)).epsilon(1e-10));
    }
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(9, 0) == 1);
  CHECK(binomial(7, 3) == 35);
  CHECK(binomial(62, 31) == 465428353255261088ULL);
  // Pascal's rule
  for (int n = 1; n <= 62; ++n) {
    for (int k = 1; k < n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
  }
  CHECK_THROWS_AS(binomial(3, 4), DomainError);
  CHECK_THROWS_AS(binomial(63, 1), DomainError);
}

TEST_CASE("special-function config validation") {
  SpecialFnConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tolerance = 1e-3;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.rel_tolerance = 1e-12;
  cfg.max_terms = 5;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  CHECK_THROWS_AS(exp_integral_e1(1.0, cfg), DomainError);
}
