#include "rsfb/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsfb/analytics.hpp"
#include "rsfb/error.hpp"
#include "rsfb/numerics.hpp"

namespace rsfb {
namespace {

using numerics::kE;

void require_power(double P) {
  if (!(P >= 0.0) || !std::isfinite(P)) throw DomainError("power must be finite and non-negative");
}

double clamp_split(double t) {
  if (!std::isfinite(t)) throw DomainError("power splitting ratio must be finite");
  return std::clamp(t, kMinSplit, 1.0);
}

void require_same_dim(const ChannelVector& h, const PrecoderSet& prec, const char* what) {
  const auto M = h.entries.size();
  if (prec.common.size() != M || prec.priv[0].size() != M || prec.priv[1].size() != M) {
    throw DomainError(std::string(what) + ": channel and precoder dimensions differ");
  }
}

void require_ordered_bits(double bits_alpha, double bits_beta, const char* what) {
  if (bits_alpha > bits_beta) {
    throw DomainError(std::string(what) + ": requires bits_alpha <= bits_beta");
  }
}

}  // namespace

PrecoderSet build_precoders(const CsitReport& csit1, const CsitReport& csit2,
                            PrecoderStrategy strategy, RandomStream& common_rng,
                            RandomStream& private_rng) {
  if (csit1.direction.size() != csit2.direction.size()) {
    throw DomainError("build_precoders: CSIT dimensions differ");
  }
  PrecoderSet set;
  set.strategy = strategy;
  if (strategy == PrecoderStrategy::kRandomNullspace) {
    set.common = sample_isotropic_unit(static_cast<int>(csit1.direction.size()), common_rng);
    set.priv[0] = sample_unit_in_nullspace(csit2.direction, private_rng);
    set.priv[1] = sample_unit_in_nullspace(csit1.direction, private_rng);
  } else {
    auto [w1, w2] = zf_pseudoinverse_precoders(csit1.direction, csit2.direction);
    set.priv[0] = std::move(w1);
    set.priv[1] = std::move(w2);
    set.common = dominant_right_singular(csit1.direction, csit2.direction);
  }
  return set;
}

PowerPolicy PowerPolicy::single(double total_power, double t) {
  require_power(total_power);
  const double ts = clamp_split(t);
  return PowerPolicy(total_power, ts, ts, false);
}

PowerPolicy PowerPolicy::pair(double total_power, double t_alpha, double t_beta) {
  require_power(total_power);
  if (t_alpha > t_beta) throw DomainError("PowerPolicy::pair: requires t_alpha <= t_beta");
  return PowerPolicy(total_power, clamp_split(t_alpha), clamp_split(t_beta), true);
}

RsSSinr sinr_rs_s(const ChannelVector& h1, const ChannelVector& h2, const PrecoderSet& prec,
                  const PowerPolicy& pol) {
  require_same_dim(h1, prec, "sinr_rs_s");
  require_same_dim(h2, prec, "sinr_rs_s");
  if (pol.is_pair()) throw DomainError("sinr_rs_s: needs a single-ratio power policy");
  const double pc = pol.common_power();
  const double pk = pol.private_power();
  RsSSinr out;
  const std::array<const ChannelVector*, 2> h{&h1, &h2};
  for (int k = 0; k < 2; ++k) {
    const int j = 1 - k;
    const auto& hk = h[k]->entries;
    const double x_common = gain(hk, prec.common);
    const double x_own = gain(hk, prec.priv[k]);
    const double x_other = gain(hk, prec.priv[j]);
    out.common_at[k] = x_common * pc / (1.0 + pk * (x_own + x_other));
    out.priv[k] = x_own * pk / (1.0 + x_other * pk);
  }
  out.common = std::min(out.common_at[0], out.common_at[1]);
  return out;
}

RsStSinr sinr_rs_st(const StChannels& h, const StPrecoders& prec, const PowerPolicy& pol) {
  for (int l = 0; l < 2; ++l) {
    for (int k = 0; k < 2; ++k) require_same_dim(h[l][k], prec[l], "sinr_rs_st");
  }
  if (!pol.is_pair()) throw DomainError("sinr_rs_st: needs a (t_alpha, t_beta) power policy");
  const double p_common = pol.common_power();
  const double p_c0 = pol.c0_power();
  // pp[use][receiver]: use 1 carries u11 at P t_a / 2 and u21 at P t_b / 2,
  // use 2 swaps them.
  const double pa = pol.private_power_alpha();
  const double pb = pol.private_power_beta();
  const std::array<std::array<double, 2>, 2> pp{{{pa, pb}, {pb, pa}}};
  // c_0 rides on w_11 in use 1 and on w_22 in use 2.
  const std::array<const CVector*, 2> w0{&prec[0].priv[0], &prec[1].priv[1]};

  RsStSinr out;
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) {
      const auto& hkl = h[l][k].entries;
      const double x_common = gain(hkl, prec[l].common);
      const double x_own = gain(hkl, prec[l].priv[k]);
      const double x_other = gain(hkl, prec[l].priv[1 - k]);
      const double private_interf = x_own * pp[l][k] + x_other * pp[l][1 - k];
      const int msg = l + 1;
      if (l == k) {
        // Receiver k decodes c_l and then c_0 in the use where c_0 reaches it.
        const double x_c0 = gain(hkl, *w0[l]);
        out.common_at[msg][k] = x_common * p_common / (1.0 + x_c0 * p_c0 + private_interf);
        out.common_at[0][k] = x_c0 * p_c0 / (1.0 + private_interf);
      } else {
        // c_0 is already known and removed.
        out.common_at[msg][k] = x_common * p_common / (1.0 + private_interf);
      }
      out.priv[k][l] = x_own * pp[l][k] / (1.0 + x_other * pp[l][1 - k]);
    }
  }
  for (int m = 0; m < 3; ++m) out.common[m] = std::min(out.common_at[m][0], out.common_at[m][1]);
  return out;
}

double rate_zfbf_perfect(const ChannelVector& h, std::span<const cplx> w_perp, double P) {
  require_power(P);
  if (w_perp.size() != h.entries.size()) throw DomainError("rate_zfbf_perfect: dimension mismatch");
  return std::log2(1.0 + gain(h.entries, w_perp) * P / 2.0);
}

double rate_tdma(const ChannelVector& h1, const ChannelVector& h2, const CsitReport& csit1,
                 const CsitReport& csit2, double P) {
  require_power(P);
  if (csit1.direction.size() != h1.entries.size() || csit2.direction.size() != h2.entries.size()) {
    throw DomainError("rate_tdma: dimension mismatch");
  }
  const double best = std::max(gain(h1.entries, csit1.direction), gain(h2.entries, csit2.direction));
  return std::log2(1.0 + P * best);
}

double rate_zfbf_rvq(const ChannelVector& h1, const ChannelVector& h2, const PrecoderSet& prec,
                     double P) {
  const auto sinr = sinr_rs_s(h1, h2, prec, PowerPolicy::single(P, 1.0));
  return std::log2(1.0 + sinr.priv[0]) + std::log2(1.0 + sinr.priv[1]);
}

double rate_sumu(const ChannelVector& h1, const ChannelVector& h2, const CsitReport& csit1,
                 const CsitReport& csit2, const PrecoderSet& prec, double P) {
  return std::max(rate_tdma(h1, h2, csit1, csit2, P), rate_zfbf_rvq(h1, h2, prec, P));
}

double interference_scale(double P, int M, double bits) {
  if (M < 2) throw DomainError("interference_scale: M must be at least 2");
  return P * M / (2.0 * (M - 1)) * std::exp2(-bits / (M - 1));
}

double threshold_bits_eq(double P, int M) {
  if (!(P > 0.0)) throw DomainError("threshold_bits_eq: P must be positive");
  if (M < 2) throw DomainError("threshold_bits_eq: M must be at least 2");
  return (M - 1) * (std::log2(P * M / (2.0 * (M - 1))) - std::log2(kE - 1.0));
}

double power_split_eq(double P, int M, double bits) {
  if (!(P > 0.0)) throw DomainError("power_split_eq: P must be positive");
  if (bits < 0.0) throw DomainError("power_split_eq: bits must be non-negative");
  if (bits > threshold_bits_eq(P, M)) return 1.0;
  return std::min(1.0, 1.0 / (interference_scale(P, M, bits) + 2.0 - kE));
}

double power_split_eq_delta(double delta) {
  if (!(delta > 1.0)) throw DomainError("power_split_eq_delta: delta must exceed 1");
  if (delta < kE * kE) return 1.0;
  return std::min(1.0, 1.0 / (delta / (2.0 * kE) - kE / 2.0 + 1.0));
}

double power_split_rs(double P, int M, double bits_alpha, double bits_beta) {
  require_ordered_bits(bits_alpha, bits_beta, "power_split_rs");
  if (bits_alpha == bits_beta) return power_split_eq(P, M, bits_alpha);
  if (!(P > 0.0)) throw DomainError("power_split_rs: P must be positive");
  const double mean_bits = 0.5 * (bits_alpha + bits_beta);
  const double th = analytics::theta(bits_beta - bits_alpha, M);
  if (mean_bits >= analytics::threshold_bits_rs(P, M, th)) return 1.0;
  const double c = (kE - 2.0) / 2.0;
  const double la = interference_scale(P, M, bits_alpha);
  const double lb = interference_scale(P, M, bits_beta);
  const double r = std::sqrt((la - c) * (lb - c)) - c;
  return std::min(1.0, 1.0 / r);
}

double power_split_rs_delta(double delta, double tau, int M) {
  if (!(delta > 1.0)) throw DomainError("power_split_rs_delta: delta must exceed 1");
  if (tau < 0.0) throw DomainError("power_split_rs_delta: tau must be non-negative");
  const double th = analytics::theta(tau, M);
  if (delta <= analytics::delta0(th)) return 1.0;
  // Positive root of (Th^2 - 4Th) r^2 + (8 delta / e) r - q = 0, written so the
  // Th -> 4 limit is exact.
  const double a = th * th - 4.0 * th;
  const double p = 8.0 * delta / kE;
  const double q =
      4.0 * delta * delta / (kE * kE) - (th - 2.0) * (th - 2.0) * delta * (1.0 - 2.0 / kE);
  const double r = 2.0 * q / (p + std::sqrt(p * p + 4.0 * a * q));
  return std::min(1.0, 1.0 / r);
}

SplitPair power_split_st(double P, int M, double bits_alpha, double bits_beta) {
  require_ordered_bits(bits_alpha, bits_beta, "power_split_st");
  if (!(P > 0.0)) throw DomainError("power_split_st: P must be positive");
  const double la = interference_scale(P, M, bits_alpha);
  const double lb = interference_scale(P, M, bits_beta);
  return {std::min(1.0 / la, 1.0), std::min(1.0 / lb, 1.0)};
}

}  // namespace rsfb
