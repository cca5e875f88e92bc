#include "rsfb/channel.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "rsfb/error.hpp"

namespace rsfb {
namespace {

void require_dim(int M, const char* what) {
  if (M < 2) throw DomainError(std::string(what) + ": dimension must be at least 2");
}

void require_same_length(std::span<const cplx> a, std::span<const cplx> b, const char* what) {
  if (a.size() != b.size()) throw DomainError(std::string(what) + ": dimension mismatch");
}

}  // namespace

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm_sq(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& x : v) acc += std::norm(x);
  return acc;
}

double gain(std::span<const cplx> a, std::span<const cplx> b) { return std::norm(inner(a, b)); }

CVector normalized(std::span<const cplx> v) {
  const double n = std::sqrt(norm_sq(v));
  if (!(n > 0.0)) throw DomainError("normalized: zero vector");
  CVector out(v.begin(), v.end());
  for (auto& x : out) x /= n;
  return out;
}

void apply_phase_convention(CVector& v) {
  for (const auto& x : v) {
    const double mag = std::abs(x);
    if (mag > 0.0) {
      const cplx rot = std::conj(x) / mag;
      for (auto& y : v) y *= rot;
      // The pivot itself is made exactly real.
      for (auto& y : v) {
        if (std::abs(y) > 0.0) {
          y = cplx(std::abs(y), 0.0);
          break;
        }
      }
      return;
    }
  }
}

ChannelVector sample_channel(int M, RandomStream& rng) {
  require_dim(M, "sample_channel");
  ChannelVector h;
  h.entries.resize(static_cast<std::size_t>(M));
  for (auto& x : h.entries) x = rng.complex_normal();
  return h;
}

CVector sample_isotropic_unit(int M, RandomStream& rng) {
  require_dim(M, "sample_isotropic_unit");
  CVector v(static_cast<std::size_t>(M));
  double n2 = 0.0;
  do {
    for (auto& x : v) x = rng.complex_normal();
    n2 = norm_sq(v);
  } while (!(n2 > 1e-24));
  const double n = std::sqrt(n2);
  for (auto& x : v) x /= n;
  return v;
}

CVector sample_unit_in_nullspace(std::span<const cplx> v, RandomStream& rng) {
  require_dim(static_cast<int>(v.size()), "sample_unit_in_nullspace");
  const double vv = norm_sq(v);
  if (!(vv > 0.0)) throw DomainError("sample_unit_in_nullspace: zero reference vector");
  CVector w(v.size());
  while (true) {
    for (auto& x : w) x = rng.complex_normal();
    const cplx proj = inner(v, w) / vv;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * v[i];
    const double n2 = norm_sq(w);
    if (n2 >= 1e-24) {
      const double n = std::sqrt(n2);
      for (auto& x : w) x /= n;
      return w;
    }
  }
}

double sample_quantization_error(int M, double bits, RandomStream& rng) {
  require_dim(M, "sample_quantization_error");
  if (!(bits >= 0.0) || !std::isfinite(bits)) {
    throw DomainError("sample_quantization_error: bits must be finite and non-negative");
  }
  const double u = rng.uniform();
  // 1 - (1 - u)^{2^-B}, kept accurate for large B.
  const double q = -std::expm1(std::log1p(-u) * std::exp2(-bits));
  return std::pow(q, 1.0 / (M - 1));
}

CsitReport quantize_rvq(const ChannelVector& h, double bits, QuantizerMode mode,
                        RandomStream& rng) {
  const int M = h.dim();
  require_dim(M, "quantize_rvq");
  if (!(bits >= 0.0) || !std::isfinite(bits)) {
    throw DomainError("quantize_rvq: bits must be finite and non-negative");
  }
  if (!(norm_sq(h.entries) > 0.0)) throw DomainError("quantize_rvq: zero channel vector");
  const CVector hbar = h.direction();

  CsitReport report;
  report.bits = bits;
  if (mode == QuantizerMode::kStatistical) {
    const double z = sample_quantization_error(M, bits, rng);
    const CVector e = sample_unit_in_nullspace(hbar, rng);
    const double c = std::sqrt(1.0 - z);
    const double s = std::sqrt(z);
    report.direction.resize(hbar.size());
    for (std::size_t i = 0; i < hbar.size(); ++i) report.direction[i] = c * hbar[i] + s * e[i];
    report.sin2_error = z;
  } else {
    if (bits != std::floor(bits) || bits > 30.0) {
      throw DomainError("quantize_rvq: explicit codebooks need an integer bit count <= 30");
    }
    const std::uint64_t codewords = std::uint64_t{1} << static_cast<unsigned>(bits);
    CVector candidate(hbar.size());
    CVector best;
    double best_cos2 = -1.0;
    for (std::uint64_t i = 0; i < codewords; ++i) {
      for (auto& x : candidate) x = rng.complex_normal();
      const double n2 = norm_sq(candidate);
      if (!(n2 > 0.0)) continue;
      const double cos2 = gain(hbar, candidate) / n2;
      if (cos2 > best_cos2) {
        best_cos2 = cos2;
        best = candidate;
      }
    }
    report.direction = normalized(best);
    report.sin2_error = std::max(0.0, 1.0 - gain(hbar, report.direction));
  }
  apply_phase_convention(report.direction);
  return report;
}

std::pair<CVector, CVector> zf_pseudoinverse_precoders(std::span<const cplx> h1_hat,
                                                      std::span<const cplx> h2_hat) {
  require_same_length(h1_hat, h2_hat, "zf_pseudoinverse_precoders");
  require_dim(static_cast<int>(h1_hat.size()), "zf_pseudoinverse_precoders");
  const double g11 = norm_sq(h1_hat);
  const double g22 = norm_sq(h2_hat);
  if (!(g11 > 0.0) || !(g22 > 0.0)) {
    throw DegenerateGeometryError("zf_pseudoinverse_precoders: zero input direction");
  }
  const cplx g12 = inner(h1_hat, h2_hat);
  const double coherence = std::abs(g12) / std::sqrt(g11 * g22);
  if (coherence > 1.0 - 1e-10) {
    throw DegenerateGeometryError("zf_pseudoinverse_precoders: quantized directions are collinear");
  }
  // Columns of H^H G^{-1}; the common 1/det factor drops out on normalization.
  CVector p1(h1_hat.size());
  CVector p2(h1_hat.size());
  for (std::size_t i = 0; i < h1_hat.size(); ++i) {
    p1[i] = h1_hat[i] * g22 - h2_hat[i] * std::conj(g12);
    p2[i] = h2_hat[i] * g11 - h1_hat[i] * g12;
  }
  CVector w1 = normalized(p1);
  CVector w2 = normalized(p2);
  apply_phase_convention(w1);
  apply_phase_convention(w2);
  return {std::move(w1), std::move(w2)};
}

CVector dominant_right_singular(std::span<const cplx> h1_hat, std::span<const cplx> h2_hat) {
  require_same_length(h1_hat, h2_hat, "dominant_right_singular");
  const double g11 = norm_sq(h1_hat);
  const double g22 = norm_sq(h2_hat);
  if (!(g11 > 0.0) && !(g22 > 0.0)) throw DomainError("dominant_right_singular: both inputs zero");
  const cplx g12 = inner(h1_hat, h2_hat);
  const double half_gap = 0.5 * (g11 - g22);
  const double lambda = 0.5 * (g11 + g22) + std::sqrt(half_gap * half_gap + std::norm(g12));

  // Two algebraically equivalent eigenvector forms; keep the better conditioned.
  cplx u1{1.0, 0.0};
  cplx u2{0.0, 0.0};
  const cplx a1 = g12;
  const cplx a2 = lambda - g11;
  const cplx b1 = lambda - g22;
  const cplx b2 = std::conj(g12);
  const double na = std::norm(a1) + std::norm(a2);
  const double nb = std::norm(b1) + std::norm(b2);
  const double scale = 1e-24 * lambda * lambda;
  if (std::max(na, nb) > scale) {
    if (na >= nb) {
      u1 = a1;
      u2 = a2;
    } else {
      u1 = b1;
      u2 = b2;
    }
  } else if (g22 > g11) {
    u1 = 0.0;
    u2 = 1.0;
  }
  CVector v(h1_hat.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = h1_hat[i] * u1 + h2_hat[i] * u2;
  CVector out = normalized(v);
  apply_phase_convention(out);
  return out;
}

}  // namespace rsfb
