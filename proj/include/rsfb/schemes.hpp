#pragma once

#include <array>

#include "rsfb/channel.hpp"

namespace rsfb {

enum class PrecoderStrategy {
  kRandomNullspace,   // w_k isotropic in the other receiver's CSIT complement, w_c isotropic
  kPseudoInverseSvd,  // w_k from the ZF pseudo-inverse, w_c the dominant right-singular vector
};

/// Unit-norm beamformers of one channel use.
struct PrecoderSet {
  CVector common;
  std::array<CVector, 2> priv;
  PrecoderStrategy strategy = PrecoderStrategy::kRandomNullspace;
};

/// Builds the precoders of one channel use from the two CSIT reports.
///
/// Random-nullspace draws w_c from common_rng and each w_k from private_rng.
/// The pseudo-inverse/SVD strategy is deterministic and ignores both streams.
PrecoderSet build_precoders(const CsitReport& csit1, const CsitReport& csit2,
                            PrecoderStrategy strategy, RandomStream& common_rng,
                            RandomStream& private_rng);

/// Total power and its splitting ratio(s). Noise power is 1, so P is the SNR.
///
/// A single ratio t gives P_c = P(1 - t), P_1 = P_2 = P t / 2. A pair
/// t_alpha <= t_beta gives the space-time allocation with P(1 - t_beta) on
/// each per-use common message and P(t_beta - t_alpha) / 2 on c_0.
class PowerPolicy {
 public:
  static PowerPolicy single(double total_power, double t);
  static PowerPolicy pair(double total_power, double t_alpha, double t_beta);

  double total_power() const { return total_power_; }
  bool is_pair() const { return paired_; }
  double t() const { return t_beta_; }
  double t_alpha() const { return t_alpha_; }
  double t_beta() const { return t_beta_; }

  double common_power() const { return total_power_ * (1.0 - t_beta_); }
  double private_power() const { return 0.5 * total_power_ * t_beta_; }
  double c0_power() const { return 0.5 * total_power_ * (t_beta_ - t_alpha_); }
  double private_power_alpha() const { return 0.5 * total_power_ * t_alpha_; }
  double private_power_beta() const { return 0.5 * total_power_ * t_beta_; }

 private:
  PowerPolicy(double p, double ta, double tb, bool paired)
      : total_power_(p), t_alpha_(ta), t_beta_(tb), paired_(paired) {}

  double total_power_;
  double t_alpha_;
  double t_beta_;
  bool paired_;
};

/// Ratios are clamped to [kMinSplit, 1] before use; t = 0 is excluded.
inline constexpr double kMinSplit = 1e-9;

/// SINRs of the single-use scheme (common message on top of ZF privates).
struct RsSSinr {
  std::array<double, 2> common_at{};  // common-message SINR at receiver 1, 2
  double common = 0.0;                // min of the two
  std::array<double, 2> priv{};       // private SINR of receiver 1, 2
};

/// SINRs of the two-use space-time scheme. Message index 0 is c_0, 1 is c_1,
/// 2 is c_2. priv[k][l] is receiver k's private message in channel use l.
struct RsStSinr {
  std::array<std::array<double, 2>, 3> common_at{};  // [message][receiver]
  std::array<double, 3> common{};                    // min over receivers
  std::array<std::array<double, 2>, 2> priv{};       // [receiver][use]
};

/// Channels of the two-use scheme, indexed [use][receiver].
using StChannels = std::array<std::array<ChannelVector, 2>, 2>;
/// Precoders of use 1 and use 2. The c_0 beamformers are taken as
/// w_01 = uses[0].priv[0] and w_02 = uses[1].priv[1].
using StPrecoders = std::array<PrecoderSet, 2>;

/// Exact SINRs of the single-use scheme (no high-SNR approximation).
RsSSinr sinr_rs_s(const ChannelVector& h1, const ChannelVector& h2, const PrecoderSet& prec,
                  const PowerPolicy& pol);

/// Exact SINRs of the space-time scheme for both receivers.
RsStSinr sinr_rs_st(const StChannels& h, const StPrecoders& prec, const PowerPolicy& pol);

/// log2(1 + |h^H w|^2 P / 2).
double rate_zfbf_perfect(const ChannelVector& h, std::span<const cplx> w_perp, double P);

/// log2(1 + P max_k |h_k^H h_hat_k|^2): full power to the better beamformed user.
double rate_tdma(const ChannelVector& h1, const ChannelVector& h2, const CsitReport& csit1,
                 const CsitReport& csit2, double P);

/// Sum rate of ZF beamforming on quantized CSIT with P/2 per user.
double rate_zfbf_rvq(const ChannelVector& h1, const ChannelVector& h2, const PrecoderSet& prec,
                     double P);

/// Per-realization max of the TDMA rate and the two-user ZFBF sum rate.
double rate_sumu(const ChannelVector& h1, const ChannelVector& h2, const CsitReport& csit1,
                 const CsitReport& csit2, const PrecoderSet& prec, double P);

/// PM / (2(M-1)) 2^{-B/(M-1)}: mean residual ZF interference scale at full private power.
double interference_scale(double P, int M, double bits);

/// Closed-form ratio for equal feedback: 1 / (Lambda + 2 - e) below the
/// switching threshold, 1 above it.
double power_split_eq(double P, int M, double bits);
/// (M-1)[log2(PM / (2(M-1))) - log2(e-1)]
double threshold_bits_eq(double P, int M);

/// High-SNR ratio minimizing the feedback needed for a log2(delta) loss.
double power_split_eq_delta(double delta);

/// Closed-form ratio for alternating feedback qualities B_alpha <= B_beta.
double power_split_rs(double P, int M, double bits_alpha, double bits_beta);

/// Counterpart of power_split_eq_delta with a per-use bit discrepancy tau.
double power_split_rs_delta(double delta, double tau, int M);

struct SplitPair {
  double t_alpha;
  double t_beta;
};
/// t = min(1 / Lambda, 1) for each budget; keeps residual interference at noise level.
SplitPair power_split_st(double P, int M, double bits_alpha, double bits_beta);

}  // namespace rsfb
