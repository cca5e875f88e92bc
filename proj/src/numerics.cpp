#include "rsfb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rsfb/error.hpp"

namespace rsfb::numerics {
namespace {

constexpr double kTiny = 1e-300;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

// Power series of E_n(x), valid (and used) for 0 < x <= 1.
double en_series(int n, double x, const SpecialFnConfig& cfg) {
  const int nm1 = n - 1;
  double sum = nm1 != 0 ? 1.0 / nm1 : -std::log(x) - kEulerGamma;
  double fact = 1.0;
  for (int i = 1; i <= cfg.max_terms; ++i) {
    fact *= -x / i;
    double del = 0.0;
    if (i != nm1) {
      del = -fact / (i - nm1);
    } else {
      double psi = -kEulerGamma;
      for (int k = 1; k <= nm1; ++k) psi += 1.0 / k;
      del = fact * (-std::log(x) + psi);
    }
    sum += del;
    if (std::abs(del) < std::abs(sum) * cfg.rel_tolerance) return sum;
  }
  throw PrecisionError("E_n series did not converge for n=" + std::to_string(n) +
                       ", x=" + std::to_string(x));
}

// exp(x) E_n(x) from the modified-Lentz continued fraction, for x > 1.
double en_scaled_continued_fraction(int n, double x, const SpecialFnConfig& cfg) {
  double b = x + n;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= cfg.max_terms; ++i) {
    const double an = -static_cast<double>(i) * (n - 1 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < cfg.rel_tolerance) return h;
  }
  throw PrecisionError("E_n continued fraction did not converge for n=" + std::to_string(n) +
                       ", x=" + std::to_string(x));
}

}  // namespace

void SpecialFnConfig::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance <= 1e-6)) {
    throw DomainError("SpecialFnConfig: rel_tolerance must lie in (0, 1e-6]");
  }
  if (max_terms < 10) throw DomainError("SpecialFnConfig: max_terms must be at least 10");
}

double exp_integral_en(int n, double x, const SpecialFnConfig& cfg) {
  if (n < 1) throw DomainError("exp_integral_en: order must be >= 1");
  require_positive(x, "exp_integral_en");
  cfg.validate();
  if (x <= 1.0) return en_series(n, x, cfg);
  return en_scaled_continued_fraction(n, x, cfg) * std::exp(-x);
}

double exp_integral_e1(double x, const SpecialFnConfig& cfg) {
  require_positive(x, "exp_integral_e1");
  cfg.validate();
  if (x <= 1.0) return en_series(1, x, cfg);
  return en_scaled_continued_fraction(1, x, cfg) * std::exp(-x);
}

double exp_integral_e1_scaled(double x, const SpecialFnConfig& cfg) {
  require_positive(x, "exp_integral_e1_scaled");
  cfg.validate();
  if (x <= 1.0) return std::exp(x) * en_series(1, x, cfg);
  return en_scaled_continued_fraction(1, x, cfg);
}

double phi(double x, const SpecialFnConfig& cfg) {
  require_positive(x, "phi");
  return exp_integral_e1_scaled(1.0 / x, cfg);
}

double upper_incomplete_gamma(int r, double a, const SpecialFnConfig& cfg) {
  require_positive(a, "upper_incomplete_gamma");
  cfg.validate();
  if (r >= 1) {
    // (r-1)! e^{-a} sum_{k<r} a^k / k!
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < r; ++k) {
      term *= a / k;
      sum += term;
    }
    return std::tgamma(static_cast<double>(r)) * std::exp(-a) * sum;
  }
  if (r == 0) return exp_integral_e1(a, cfg);
  if (a > 1.0) {
    const int n = -r;
    return std::pow(a, -n) * exp_integral_en(n + 1, a, cfg);
  }
  double g = exp_integral_e1(a, cfg);
  const double ea = std::exp(-a);
  for (int s = -1; s >= r; --s) g = (g - std::pow(a, s) * ea) / s;
  return g;
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0) throw DomainError("binomial: arguments must be non-negative");
  if (k > n) throw DomainError("binomial: k must not exceed n");
  if (n > 62) throw DomainError("binomial: n must be at most 62");
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // Dividing out the gcd first keeps every intermediate below C(n, k).
    const auto d = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, d);
    result = (result / g) * (static_cast<std::uint64_t>(n - k + i) / (d / g));
  }
  return result;
}

}  // namespace rsfb::numerics
