#include "rsfb/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rsfb/error.hpp"
#include "rsfb/numerics.hpp"
#include "rsfb/schemes.hpp"

namespace rsfb::analytics {
namespace {

using numerics::kE;
using numerics::kEulerGamma;
using numerics::kLn2;

void require_positive_power(double P, const char* what) {
  if (!(P > 0.0) || !std::isfinite(P)) throw DomainError(std::string(what) + ": P must be positive");
}

void require_split(double t, const char* what) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError(std::string(what) + ": t must lie in (0, 1]");
}

void require_delta(double delta, const char* what) {
  if (!(delta > 1.0)) throw DomainError(std::string(what) + ": delta must exceed 1");
}

void require_tau(double tau, const char* what) {
  if (!(tau >= 0.0)) throw DomainError(std::string(what) + ": tau must be non-negative");
}

double log2_k(double P, int M) { return std::log2(P * M / (2.0 * (M - 1))); }

// 1 + 2/(te) - 2/e: high-SNR limit of 1 + P(1-t)/2 e^kappa.
double high_snr_common(double t) { return 1.0 + 2.0 / (t * kE) - 2.0 / kE; }

}  // namespace

const char* regime_name(Regime r) { return r == Regime::kExact ? "exact" : "high-snr"; }

double epsilon_term(double P, double t) {
  require_positive_power(P, "epsilon_term");
  require_split(t, "epsilon_term");
  if (t == 1.0) return 0.0;
  return (numerics::phi(P / 2.0) - numerics::phi(P * t / 2.0)) / kLn2;
}

double kappa(double P, double t) {
  require_positive_power(P, "kappa");
  require_split(t, "kappa");
  const double pt = P * t;
  return (4.0 / pt - 1.0) * numerics::phi(pt / 4.0) - 1.0 - kEulerGamma;
}

double common_snr_term(double P, double t) {
  if (t == 1.0) return 0.0;
  return P * (1.0 - t) / 2.0 * std::exp(kappa(P, t));
}

double joint_cdf(double x1, double x2, int M) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0)) throw DomainError("joint_cdf: arguments must be non-negative");
  if (M < 2) throw DomainError("joint_cdf: M must be at least 2");
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  if (std::isinf(x1) && std::isinf(x2)) return 1.0;
  if (std::isinf(x1)) return -std::expm1(-x2);
  if (std::isinf(x2)) return -std::expm1(-x1);

  const int n = M - 1;
  const double a = std::max(x1, x2);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(M * M) + 3);
  const double inv_gamma_m = 1.0 / std::tgamma(static_cast<double>(M));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const int p1 = n - i;
      const int p2 = n - j;
      const double sign = ((p1 + p2) % 2 == 0) ? 1.0 : -1.0;
      const double coeff = static_cast<double>(numerics::binomial(n, i)) *
                           static_cast<double>(numerics::binomial(n, j));
      const double g = numerics::upper_incomplete_gamma(i + j + 2 - M, a);
      terms.push_back(sign * std::pow(x1, p1) * std::pow(x2, p2) * coeff * g * inv_gamma_m);
    }
  }
  terms.push_back(1.0);
  terms.push_back(-std::exp(-x1));
  terms.push_back(-std::exp(-x2));
  std::sort(terms.begin(), terms.end(),
            [](double l, double r) { return std::abs(l) > std::abs(r); });
  // Neumaier compensated summation.
  double sum = 0.0;
  double comp = 0.0;
  for (double v : terms) {
    const double s = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - s) + v;
    } else {
      comp += (v - s) + sum;
    }
    sum = s;
  }
  const double raw = sum + comp;
  if (!(raw >= -1e-8 && raw <= 1.0 + 1e-8)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "joint_cdf: raw value " << raw << " outside [0, 1] at x1=" << x1 << ", x2=" << x2
        << ", M=" << M;
    throw PrecisionError(msg.str());
  }
  return std::clamp(raw, 0.0, 1.0);
}

double joint_cdf_independent(double x1, double x2) {
  if (!(x1 >= 0.0) || !(x2 >= 0.0)) {
    throw DomainError("joint_cdf_independent: arguments must be non-negative");
  }
  return std::expm1(-x1) * std::expm1(-x2);
}

double cdf_yk_approx(double y, double P, double t) {
  if (!(y >= 0.0)) throw DomainError("cdf_yk_approx: y must be non-negative");
  if (std::isinf(y)) return 1.0;
  return 1.0 - std::exp(-y) / (1.0 + P * t / 2.0 * y);
}

double cdf_y_upper(double y, double P, double t) {
  if (!(y >= 0.0)) throw DomainError("cdf_y_upper: y must be non-negative");
  if (std::isinf(y)) return 1.0;
  const double d = 1.0 + P * t / 2.0 * y;
  return 1.0 - std::exp(-2.0 * y) / (d * d);
}

double expected_ln_y_lower(double P, double t) {
  require_positive_power(P, "expected_ln_y_lower");
  require_split(t, "expected_ln_y_lower");
  const double pt = P * t;
  return (4.0 / pt - 1.0) * numerics::phi(pt / 4.0) - kEulerGamma - kLn2 - 1.0;
}

double bound_rs_s_eq(double P, int M, double bits, double t, Regime regime) {
  require_positive_power(P, "bound_rs_s_eq");
  require_split(t, "bound_rs_s_eq");
  const double lam = interference_scale(P, M, bits);
  if (regime == Regime::kHighSnr) {
    return 2.0 * std::log2(1.0 / t + lam) - std::log2(high_snr_common(t));
  }
  return 2.0 * epsilon_term(P, t) + 2.0 * std::log2(1.0 + t * lam) -
         std::log2(1.0 + common_snr_term(P, t));
}

double bound_rs_s_eq_at_split(double P, int M, double bits) {
  return bound_rs_s_eq(P, M, bits, power_split_eq(P, M, bits), Regime::kHighSnr);
}

double feedback_bits_rs_s_eq(double delta, double t, double P, int M, Regime regime) {
  require_delta(delta, "feedback_bits_rs_s_eq");
  require_positive_power(P, "feedback_bits_rs_s_eq");
  require_split(t, "feedback_bits_rs_s_eq");
  if (M < 2) throw DomainError("feedback_bits_rs_s_eq: M must be at least 2");
  double inner = 0.0;
  if (regime == Regime::kHighSnr) {
    inner = std::sqrt(delta * high_snr_common(t)) - 1.0 / t;
  } else {
    inner = std::sqrt(delta) * std::sqrt(1.0 + common_snr_term(P, t)) /
                (t * std::exp2(epsilon_term(P, t))) -
            1.0 / t;
  }
  if (!(inner > 0.0)) {
    throw InfeasibleError("outer log2 argument <= 0",
                          "feedback_bits_rs_s_eq: loss target unreachable at this t");
  }
  return (M - 1) * log2_k(P, M) - (M - 1) * std::log2(inner);
}

double overhead_reduction_eq(double delta, int M) {
  if (delta < kE * kE) throw DomainError("overhead_reduction_eq: requires delta >= e^2");
  if (M < 2) throw DomainError("overhead_reduction_eq: M must be at least 2");
  return (M - 1) * std::log2((delta / (2.0 * kE) + kE / 2.0 - 1.0) / (std::sqrt(delta) - 1.0));
}

double theta(double tau, int M) {
  require_tau(tau, "theta");
  if (M < 2) throw DomainError("theta: M must be at least 2");
  const double x = tau / (2.0 * (M - 1));
  return std::exp2(-x) + std::exp2(x) + 2.0;
}

double threshold_bits_rs(double P, int M, double th) {
  require_positive_power(P, "threshold_bits_rs");
  if (!(th >= 4.0)) throw DomainError("threshold_bits_rs: Theta must be at least 4");
  const double root = std::sqrt(kE * kE / 4.0 + (kE - 2.0) * (kE - 2.0) * th * (th - 4.0) / 16.0);
  return (M - 1) * log2_k(P, M) - (M - 1) * std::log2(root + (kE - 2.0) * (th - 2.0) / 4.0);
}

double delta0(double th) {
  if (!(th >= 4.0)) throw DomainError("delta0: Theta must be at least 4");
  const double y = kE * kE / 8.0 * (th - 2.0) * (th - 2.0) * (1.0 - 2.0 / kE) + kE;
  return std::sqrt(kE * kE / 4.0 * (th * th - 4.0 * th) + y * y) + y;
}

double bound_rs_s_rs(double P, int M, double bits_alpha, double bits_beta, double t,
                     Regime regime) {
  require_positive_power(P, "bound_rs_s_rs");
  require_split(t, "bound_rs_s_rs");
  if (bits_alpha > bits_beta) throw DomainError("bound_rs_s_rs: requires bits_alpha <= bits_beta");
  const double la = interference_scale(P, M, bits_alpha);
  const double lb = interference_scale(P, M, bits_beta);
  if (regime == Regime::kHighSnr) {
    return std::log2(1.0 / t + la) + std::log2(1.0 / t + lb) - std::log2(high_snr_common(t));
  }
  return 2.0 * epsilon_term(P, t) + std::log2(1.0 + t * la) + std::log2(1.0 + t * lb) -
         std::log2(1.0 + common_snr_term(P, t));
}

double bound_rs_s_rs_at_split(double P, int M, double bits_alpha, double bits_beta) {
  const double t = power_split_rs(P, M, bits_alpha, bits_beta);
  return bound_rs_s_rs(P, M, bits_alpha, bits_beta, t, Regime::kHighSnr);
}

double bound_rs_s_rs_capped(double P, int M, double mean_bits, double tau) {
  require_positive_power(P, "bound_rs_s_rs_capped");
  const double eta = interference_scale(P, M, mean_bits);
  return std::log2(eta * theta(tau, M)) + std::log2(kE / 2.0);
}

double feedback_bits_rs_s_rs(double delta, double t, double tau, double P, int M, Regime regime) {
  require_delta(delta, "feedback_bits_rs_s_rs");
  require_tau(tau, "feedback_bits_rs_s_rs");
  require_positive_power(P, "feedback_bits_rs_s_rs");
  require_split(t, "feedback_bits_rs_s_rs");
  const double th = theta(tau, M);
  // (1 + t eta (Th - 2) + t^2 eta^2) = q, solved for eta.
  double q_over_t2 = 0.0;
  if (regime == Regime::kHighSnr) {
    q_over_t2 = delta * high_snr_common(t);
  } else {
    q_over_t2 = delta * (1.0 + common_snr_term(P, t)) / std::exp2(2.0 * epsilon_term(P, t)) / (t * t);
  }
  const double radicand = (th * th - 4.0 * th) / (4.0 * t * t) + q_over_t2;
  if (radicand < 0.0) {
    throw InfeasibleError("inner square-root argument < 0",
                          "feedback_bits_rs_s_rs: loss target unreachable at this t");
  }
  const double eta = std::sqrt(radicand) - (th - 2.0) / (2.0 * t);
  if (!(eta > 0.0)) {
    throw InfeasibleError("outer log2 argument <= 0",
                          "feedback_bits_rs_s_rs: loss target unreachable at this t");
  }
  return (M - 1) * log2_k(P, M) - (M - 1) * std::log2(eta);
}

double bound_rs_st(double P, int M, double bits_alpha, double bits_beta, double t_alpha,
                   double t_beta, Regime regime) {
  require_positive_power(P, "bound_rs_st");
  require_split(t_alpha, "bound_rs_st");
  require_split(t_beta, "bound_rs_st");
  if (t_alpha > t_beta) throw DomainError("bound_rs_st: requires t_alpha <= t_beta");
  if (bits_alpha > bits_beta) throw DomainError("bound_rs_st: requires bits_alpha <= bits_beta");
  const double la = interference_scale(P, M, bits_alpha);
  const double lb = interference_scale(P, M, bits_beta);
  if (regime == Regime::kHighSnr) {
    return std::log2(1.0 / t_beta + lb) + std::log2(1.0 / t_alpha + la) -
           0.5 * std::log2(t_beta / t_alpha) - std::log2(high_snr_common(t_beta));
  }
  const double pb = P * t_beta;
  const double pa = P * t_alpha;
  const double mu = epsilon_term(P, t_beta) + epsilon_term(P, t_alpha);
  const double rho = (numerics::phi(pb / 2.0) - 0.5 * numerics::phi(pb / 4.0) -
                      numerics::phi(pa / 2.0) + 0.5 * numerics::phi(pa / 4.0)) /
                     kLn2;
  return mu - rho + std::log2(1.0 + t_alpha * la) + std::log2(1.0 + t_beta * lb) -
         std::log2(1.0 + common_snr_term(P, t_beta));
}

double bound_rs_st_capped(double P, int M, double mean_bits) {
  require_positive_power(P, "bound_rs_st_capped");
  return std::log2(interference_scale(P, M, mean_bits)) + 2.0 + std::log2(kE / 2.0);
}

double st_gain_db(double tau, int M) { return 3.0 * st_reduction_bits(tau, M) / (M - 1); }

double st_gain_db_large_tau(double tau, int M) {
  require_tau(tau, "st_gain_db_large_tau");
  return 3.0 * (tau / (2.0 * (M - 1)) - 2.0);
}

double st_reduction_bits(double tau, int M) {
  require_tau(tau, "st_reduction_bits");
  if (M < 2) throw DomainError("st_reduction_bits: M must be at least 2");
  const double x = tau / (4.0 * (M - 1));
  return 2.0 * (M - 1) * std::log2((std::exp2(-x) + std::exp2(x)) / 2.0);
}

double st_reduction_bits_large_tau(double tau, int M) {
  require_tau(tau, "st_reduction_bits_large_tau");
  return tau / 2.0 - 2.0 * (M - 1);
}

double feedback_bits_rs_st(double delta, double tau, double P, int M) {
  const double t = power_split_rs_delta(delta, tau, M);
  return feedback_bits_rs_s_rs(delta, t, tau, P, M, Regime::kExact) - st_reduction_bits(tau, M);
}

}  // namespace rsfb::analytics
