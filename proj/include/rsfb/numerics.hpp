#pragma once

#include <cstdint>

namespace rsfb::numerics {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kE = 2.71828182845904523536028747135266250;
inline constexpr double kLn2 = 0.69314718055994530941723212145817657;

/// Convergence policy shared by the series and continued-fraction evaluators.
struct SpecialFnConfig {
  double rel_tolerance = 1e-12;
  int max_terms = 200;

  /// Throws DomainError unless rel_tolerance is in (0, 1e-6] and max_terms >= 10.
  void validate() const;
};

/// Exponential integral E1(x) = int_1^inf exp(-x t) / t dt, for x > 0.
///
/// Power series below x = 1, modified-Lentz continued fraction above.
double exp_integral_e1(double x, const SpecialFnConfig& cfg = {});

/// exp(x) * E1(x), evaluated without forming exp(x) so large x does not overflow.
double exp_integral_e1_scaled(double x, const SpecialFnConfig& cfg = {});

/// Generalized exponential integral E_n(x) for integer n >= 1 and x > 0.
double exp_integral_en(int n, double x, const SpecialFnConfig& cfg = {});

/// phi(x) = exp(1/x) E1(1/x). Equals E[ln(1 + x Z)] for Z ~ Exp(1).
double phi(double x, const SpecialFnConfig& cfg = {});

/// Upper incomplete gamma Gamma(r, a) for any integer order r and a > 0.
///
/// r >= 1 uses the finite sum, r = 0 is E1(a). For r < 0 the downward
/// recurrence Gamma(r, a) = (Gamma(r + 1, a) - a^r e^{-a}) / r is used while
/// a <= 1; above that the recurrence amplifies rounding by roughly a / |r|
/// per step, so Gamma(-n, a) = a^{-n} E_{n+1}(a) is used instead.
double upper_incomplete_gamma(int r, double a, const SpecialFnConfig& cfg = {});

/// Exact binomial coefficient, n <= 62.
std::uint64_t binomial(int n, int k);

}  // namespace rsfb::numerics
