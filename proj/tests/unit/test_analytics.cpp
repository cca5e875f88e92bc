#include <cmath>

#include <doctest.h>

#include "oracles.hpp"
#include "rsfb/analytics.hpp"
#include "rsfb/error.hpp"
#include "rsfb/montecarlo.hpp"
#include "rsfb/numerics.hpp"
#include "rsfb/schemes.hpp"

using namespace rsfb;
using namespace rsfb::analytics;
using numerics::kE;
using numerics::kEulerGamma;

namespace {

// Direct transcriptions of the bounds, built on the quadrature phi.
double eps_o(double P, double t) { return (oracle::phi(P / 2) - oracle::phi(P * t / 2)) / std::log(2.0); }
double kappa_o(double P, double t) { return (4.0 / (P * t) - 1.0) * oracle::phi(P * t / 4) - 1.0 - kEulerGamma; }
double lam(double P, int M, double B) { return P * M / (2.0 * (M - 1)) * std::pow(2.0, -B / (M - 1)); }
double common_o(double P, double t) { return std::log2(1.0 + P * (1.0 - t) / 2.0 * std::exp(kappa_o(P, t))); }

double bound_rs_o(double P, int M, double ba, double bb, double t) {
  return 2 * eps_o(P, t) + std::log2(1 + t * lam(P, M, ba)) + std::log2(1 + t * lam(P, M, bb)) - common_o(P, t);
}

double bound_st_o(double P, int M, double ba, double bb, double ta, double tb) {
  const double ln2 = std::log(2.0);
  const double mu = (2 * oracle::phi(P / 2) - oracle::phi(P * tb / 2) - oracle::phi(P * ta / 2)) / ln2;
  const double rho = (oracle::phi(P * tb / 2) - oracle::phi(P * tb / 4) / 2 - oracle::phi(P * ta / 2) +
                      oracle::phi(P * ta / 4) / 2) / ln2;
  return mu - rho + std::log2(1 + ta * lam(P, M, ba)) + std::log2(1 + tb * lam(P, M, bb)) - common_o(P, tb);
}

double bits_eq_o(double delta, double t, double P, int M) {
  const double arg = std::sqrt(delta) * std::sqrt(1 + P * (1 - t) / 2 * std::exp(kappa_o(P, t))) /
                         (t * std::pow(2.0, eps_o(P, t))) - 1.0 / t;
  return (M - 1) * std::log2(P * M / (2.0 * (M - 1))) - (M - 1) * std::log2(arg);
}

double theta_o(double tau, int M) { return std::pow(2.0, -tau / (2 * (M - 1))) + std::pow(2.0, tau / (2 * (M - 1))) + 2; }

double bits_rs_o(double delta, double t, double tau, double P, int M) {
  const double th = theta_o(tau, M);
  const double inner = (th * th - 4 * th) / (4 * t * t) +
                       delta * (1 + P * (1 - t) / 2 * std::exp(kappa_o(P, t))) / (t * t * std::pow(2.0, 2 * eps_o(P, t)));
  return (M - 1) * std::log2(P * M / (2.0 * (M - 1))) - (M - 1) * std::log2(std::sqrt(inner) - (th - 2) / (2 * t));
}

}  // namespace

TEST_CASE("building blocks") {
  for (double P : {1.0, 100.0, 1e4}) {
    for (double t : {0.01, 0.3, 1.0}) {
      CHECK(epsilon_term(P, t) == doctest::Approx(eps_o(P, t)).epsilon(1e-9));
      CHECK(kappa(P, t) == doctest::Approx(kappa_o(P, t)).epsilon(1e-9));
    }
  }
  CHECK(epsilon_term(100.0, 1.0) == 0.0);
  CHECK(common_snr_term(100.0, 1.0) == 0.0);
}

TEST_CASE("joint CDF") {
  for (int M : {2, 3, 4, 8}) {
    CHECK(joint_cdf(0.0, 1.0, M) == 0.0);
    // marginal: x2 -> inf gives 1 - e^{-x1}
    CHECK(joint_cdf(1.0, 50.0, M) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
    double prev = 0.0;
    for (double x = 0.1; x < 6.0; x += 0.3) {
      const double v = joint_cdf(x, x, M);
      CHECK(v >= prev);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
  // large M approaches independence
  CHECK(std::abs(joint_cdf(1.0, 1.5, 30) - joint_cdf_independent(1.0, 1.5)) < 0.01);
  CHECK(joint_cdf_independent(1.0, 2.0) ==
        doctest::Approx(1 - std::exp(-1.0) - std::exp(-2.0) + std::exp(-3.0)));
}

TEST_CASE("joint CDF against Monte Carlo") {
  mc::ExperimentSpec s;
  s.M = 4;
  s.quantizer = mc::QuantizerChoice::kStatistical;
  s.trials = 40000;
  const auto g = mc::sample_gains(s);
  for (double x1 : {0.3, 1.0, 2.0}) {
    for (double x2 : {0.5, 1.5}) {
      std::int64_t hits = 0;
      for (const auto& v : g) hits += v.common[1] <= x1 && v.own[1] <= x2;
      CHECK(std::abs(static_cast<double>(hits) / s.trials - joint_cdf(x1, x2, 4)) < 0.01);
    }
  }
}

TEST_CASE("distribution of Y") {
  const double P = 1000.0, t = 0.2;
  CHECK(cdf_yk_approx(0.01, P, t) == doctest::Approx(0.50498).epsilon(1e-4));
  for (double y : {0.001, 0.02, 0.3}) {
    const double fk = 1 - std::exp(-y) / (1 + P * t / 2 * y);
    CHECK(cdf_yk_approx(y, P, t) == doctest::Approx(fk).epsilon(1e-12));
    CHECK(cdf_y_upper(y, P, t) == doctest::Approx(1 - (1 - fk) * (1 - fk)).epsilon(1e-12));
  }
  // E[ln Y] under the upper CDF by quadrature of the density
  const double c = P * t / 2;
  auto dens = [&](double y) {
    return std::log(y) * std::exp(-2 * y) / ((1 + c * y) * (1 + c * y)) * (2 + 2 * c / (1 + c * y));
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double e = ts.integrate(dens, 0.0, 1.0) + es.integrate(dens, 1.0, std::numeric_limits<double>::infinity());
  CHECK(expected_ln_y_lower(P, t) == doctest::Approx(e).epsilon(1e-8));
}

TEST_CASE("equal-feedback loss bound") {
  for (double P : {1.0, 31.6, 1000.0, 1e4}) {
    for (double t : {0.02, 0.4, 1.0}) {
      CHECK(bound_rs_s_eq(P, 4, 10.0, t, Regime::kExact) == doctest::Approx(bound_rs_o(P, 4, 10, 10, t)).epsilon(1e-9));
    }
  }
  // t = 1 leaves only the ZF term
  CHECK(bound_rs_s_eq(1000.0, 4, 10.0, 1.0, Regime::kExact) ==
        doctest::Approx(2 * std::log2(1 + lam(1000.0, 4, 10.0))).epsilon(1e-12));
  // high-SNR form approaches the exact one at a fixed ratio
  CHECK(bound_rs_s_eq(1e12, 4, 40.0, 0.1, Regime::kHighSnr) ==
        doctest::Approx(bound_rs_s_eq(1e12, 4, 40.0, 0.1, Regime::kExact)).epsilon(1e-6));
  const double P = 1e9;
  const double t = power_split_eq(P, 4, 20.0);
  CHECK(bound_rs_s_eq_at_split(P, 4, 20.0) ==
        doctest::Approx(bound_rs_s_eq(P, 4, 20.0, t, Regime::kHighSnr)).epsilon(1e-9));
}

TEST_CASE("equal-feedback bit law") {
  CHECK(feedback_bits_rs_s_eq(64.0, 1.0, 1e6, 4, Regime::kExact) -
            feedback_bits_rs_s_eq(64.0, power_split_eq_delta(64.0), 1e6, 4, Regime::kExact) ==
        doctest::Approx(2.38).epsilon(0.002));
  CHECK(overhead_reduction_eq(64.0, 4) == doctest::Approx(2.3799).epsilon(1e-4));
  for (double P : {100.0, 1000.0, 1e5}) {
    for (double t : {0.05, 0.0876, 1.0}) {
      const double b = feedback_bits_rs_s_eq(64.0, t, P, 4, Regime::kExact);
      CHECK(b == doctest::Approx(bits_eq_o(64.0, t, P, 4)).epsilon(1e-9));
      // inverse of the loss bound
      CHECK(bound_rs_s_eq(P, 4, b, t, Regime::kExact) == doctest::Approx(6.0).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(feedback_bits_rs_s_eq(1.5, 0.05, 1000.0, 4, Regime::kExact), InfeasibleError);
  try {
    feedback_bits_rs_s_eq(1.5, 0.05, 1000.0, 4, Regime::kExact);
  } catch (const InfeasibleError& e) {
    CHECK(!e.subexpression().empty());
  }
}

TEST_CASE("alternating-feedback quantities") {
  CHECK(theta(0.0, 4) == 4.0);
  CHECK(theta(6.0, 2) == doctest::Approx(10.125).epsilon(1e-12));
  CHECK(delta0(4.0) == doctest::Approx(kE * kE).epsilon(1e-12));
  CHECK(delta0(theta(10.0, 2)) > delta0(theta(6.0, 2)));
  CHECK(threshold_bits_rs(1000.0, 4, 4.0) == doctest::Approx(threshold_bits_eq(1000.0, 4)).epsilon(1e-12));
  for (double P : {10.0, 1000.0}) {
    for (double t : {0.05, 0.5, 1.0}) {
      CHECK(bound_rs_s_rs(P, 2, 7.0, 13.0, t, Regime::kExact) ==
            doctest::Approx(bound_rs_o(P, 2, 7.0, 13.0, t)).epsilon(1e-9));
      CHECK(bound_rs_s_rs(P, 4, 10.0, 10.0, t, Regime::kExact) ==
            doctest::Approx(bound_rs_s_eq(P, 4, 10.0, t, Regime::kExact)).epsilon(1e-12));
    }
  }
  for (double tau : {0.0, 6.0, 14.0}) {
    for (double t : {0.1, 1.0}) {
      CHECK(feedback_bits_rs_s_rs(64.0, t, tau, 1000.0, 4) ==
            doctest::Approx(bits_rs_o(64.0, t, tau, 1000.0, 4)).epsilon(1e-9));
    }
  }
  CHECK(feedback_bits_rs_s_rs(64.0, 0.1, 0.0, 1000.0, 4) ==
        doctest::Approx(feedback_bits_rs_s_eq(64.0, 0.1, 1000.0, 4, Regime::kExact)).epsilon(1e-9));
}

TEST_CASE("capped alternating bound dominates the high-SNR bound at the split") {
  for (double tau : {2.0, 6.0, 10.0}) {
    const double P = 1e8, bbar = 20.0;
    const double ba = bbar - tau / 2, bb = bbar + tau / 2;
    CHECK(bound_rs_s_rs_capped(P, 2, bbar, tau) + 1e-9 >= bound_rs_s_rs_at_split(P, 2, ba, bb));
    CHECK(bound_rs_s_rs_capped(P, 2, bbar, tau) - bound_rs_s_rs_at_split(P, 2, ba, bb) <=
          std::log2(kE / 2) + 1e-9 + 0.5);
  }
}

TEST_CASE("space-time loss bound") {
  for (double P : {30.0, 1000.0, 1e5}) {
    const auto s = power_split_st(P, 2, 7.0, 13.0);
    CHECK(bound_rs_st(P, 2, 7.0, 13.0, s.t_alpha, s.t_beta, Regime::kExact) ==
          doctest::Approx(bound_st_o(P, 2, 7.0, 13.0, s.t_alpha, s.t_beta)).epsilon(1e-9));
  }
  // equal ratios: c_0 carries nothing and the bound equals the single-use one
  CHECK(bound_rs_st(1000.0, 2, 7.0, 13.0, 0.2, 0.2, Regime::kExact) ==
        doctest::Approx(bound_rs_s_rs(1000.0, 2, 7.0, 13.0, 0.2, Regime::kExact)).epsilon(1e-9));
  // the capped form does not depend on tau and bounds the high-SNR value
  const double P = 1e9;
  for (double tau : {4.0, 10.0}) {
    const auto s = power_split_st(P, 2, 20.0 - tau / 2, 20.0 + tau / 2);
    CHECK(bound_rs_st(P, 2, 20.0 - tau / 2, 20.0 + tau / 2, s.t_alpha, s.t_beta, Regime::kHighSnr) <=
          bound_rs_st_capped(P, 2, 20.0) + 1e-9);
  }
}

TEST_CASE("space-time gains") {
  CHECK(st_gain_db(10.0, 2) == doctest::Approx(9.266).epsilon(1e-3));
  CHECK(st_gain_db_large_tau(10.0, 2) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(st_reduction_bits(14.0, 4) == doctest::Approx(2.567).epsilon(1e-3));
  CHECK(st_reduction_bits(14.0, 4) == doctest::Approx(3 * std::log2(theta(14.0, 4) / 4)).epsilon(1e-12));
  CHECK(st_reduction_bits(0.0, 4) == 0.0);
  for (double tau = 0.0; tau < 40.0; tau += 2.0) {
    CHECK(st_gain_db(tau, 3) >= st_gain_db_large_tau(tau, 3) - 1e-12);
  }
  CHECK(feedback_bits_rs_st(64.0, 14.0, 1000.0, 4) ==
        doctest::Approx(feedback_bits_rs_s_rs(64.0, power_split_rs_delta(64.0, 14.0, 4), 14.0, 1000.0, 4) -
                        st_reduction_bits(14.0, 4)).epsilon(1e-12));
}

TEST_CASE("round trip of the bit law at a reference point") {
  const double t = 0.2, P = 1000.0;
  const double b = feedback_bits_rs_s_eq(64.0, t, P, 4, Regime::kExact);
  CHECK(b == doctest::Approx(17.6205).epsilon(1e-4));
  CHECK(bound_rs_s_eq(P, 4, b, t, Regime::kExact) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("exact space-time gain sits within half a dB of the large-tau form") {
  for (int M : {2, 3, 4}) {
    for (double tau = 8.2 * (M - 1); tau < 60.0; tau += 0.5) {
      CHECK(st_gain_db(tau, M) - st_gain_db_large_tau(tau, M) <= 0.5);
    }
    // at exactly 8(M-1) the gap is 6 log2(17/16)
    CHECK(st_gain_db(8.0 * (M - 1), M) - st_gain_db_large_tau(8.0 * (M - 1), M) ==
          doctest::Approx(6 * std::log2(17.0 / 16.0)).epsilon(1e-12));
  }
}
