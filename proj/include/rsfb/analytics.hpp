#pragma once

#include <string>

namespace rsfb::analytics {

/// Which display of a bound to evaluate: the finite-SNR closed form or its P -> inf limit.
enum class Regime { kExact, kHighSnr };

struct BoundValue {
  double value = 0.0;  // bps/Hz or bits, depending on the formula
  std::string formula;
  Regime regime = Regime::kExact;
};

const char* regime_name(Regime r);

// Building blocks. P is linear SNR, t the private-power fraction.

/// [phi(P/2) - phi(Pt/2)] / ln 2
double epsilon_term(double P, double t);
/// (4/(Pt) - 1) phi(Pt/4) - 1 - gamma
double kappa(double P, double t);
/// P(1-t)/2 e^{kappa(t)}
double common_snr_term(double P, double t);

// Distributions.

/// Joint CDF of (|h^H w_c|^2, |h^H w_k|^2), exact for any M >= 2.
/// Throws PrecisionError if cancellation pushes the raw sum out of [-1e-8, 1 + 1e-8].
double joint_cdf(double x1, double x2, int M);
/// The same pair treated as independent unit exponentials.
double joint_cdf_independent(double x1, double x2);
double cdf_yk_approx(double y, double P, double t);
double cdf_y_upper(double y, double P, double t);
double expected_ln_y_lower(double P, double t);

// Equal feedback qualities.

double bound_rs_s_eq(double P, int M, double bits, double t, Regime regime);
/// High-SNR loss with t set by power_split_eq.
double bound_rs_s_eq_at_split(double P, int M, double bits);
/// Bits for a log2(delta) loss at ratio t. Throws InfeasibleError when no B >= -inf works.
double feedback_bits_rs_s_eq(double delta, double t, double P, int M, Regime regime);
double overhead_reduction_eq(double delta, int M);

// Alternating feedback qualities, tau = B_beta - B_alpha.

double theta(double tau, int M);
/// Average-bit threshold above which t = 1 is optimal.
double threshold_bits_rs(double P, int M, double theta_value);
/// delta above which power_split_rs_delta drops below 1.
double delta0(double theta_value);

double bound_rs_s_rs(double P, int M, double bits_alpha, double bits_beta, double t,
                     Regime regime);
/// High-SNR loss with t set by power_split_rs.
double bound_rs_s_rs_at_split(double P, int M, double bits_alpha, double bits_beta);
/// log2(eta Theta) + log2(e/2), eta = PM/(2(M-1)) 2^{-mean_bits/(M-1)}.
double bound_rs_s_rs_capped(double P, int M, double mean_bits, double tau);
double feedback_bits_rs_s_rs(double delta, double t, double tau, double P, int M,
                             Regime regime = Regime::kExact);

double bound_rs_st(double P, int M, double bits_alpha, double bits_beta, double t_alpha,
                   double t_beta, Regime regime);
/// log2(eta) + 2 + log2(e/2); does not depend on tau.
double bound_rs_st_capped(double P, int M, double mean_bits);

/// SNR advantage of the space-time scheme, 3 dB per bps/Hz.
double st_gain_db(double tau, int M);
double st_gain_db_large_tau(double tau, int M);
/// 2(M-1) log2((2^{-tau/(4(M-1))} + 2^{tau/(4(M-1))}) / 2) = (M-1) log2(Theta / 4)
double st_reduction_bits(double tau, int M);
double st_reduction_bits_large_tau(double tau, int M);
/// Average bits of the space-time scheme: the alternating-quality law at
/// power_split_rs_delta minus st_reduction_bits.
double feedback_bits_rs_st(double delta, double tau, double P, int M);

}  // namespace rsfb::analytics
