#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "rsfb/rng.hpp"

namespace rsfb {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

// Small dense complex-vector helpers. Lengths must match; callers check.

/// a^H b
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm_sq(std::span<const cplx> v);
/// |a^H b|^2
double gain(std::span<const cplx> a, std::span<const cplx> b);
CVector normalized(std::span<const cplx> v);
/// Rotates v so its first nonzero entry is real and positive.
void apply_phase_convention(CVector& v);

/// One receiver's fading realization: M i.i.d. CN(0, 1) entries.
struct ChannelVector {
  CVector entries;

  int dim() const { return static_cast<int>(entries.size()); }
  /// Unit-norm direction h / ||h||.
  CVector direction() const { return normalized(entries); }
};

enum class QuantizerMode { kExplicit, kStatistical };

/// Quantized channel direction reported over the feedback link.
struct CsitReport {
  CVector direction;  // unit norm
  double bits = 0.0;
  double sin2_error = 0.0;  // sin^2 of the angle between h and direction
};

ChannelVector sample_channel(int M, RandomStream& rng);

/// Uniform on the complex unit sphere in C^M.
CVector sample_isotropic_unit(int M, RandomStream& rng);

/// Isotropic unit vector in the orthogonal complement of the unit vector v.
CVector sample_unit_in_nullspace(std::span<const cplx> v, RandomStream& rng);

/// Draws min over 2^bits codewords of the per-codeword quantization error,
/// whose law is P(sin^2 <= z) = z^{M-1}, by inverting the CDF of the minimum.
double sample_quantization_error(int M, double bits, RandomStream& rng);

/// Random vector quantization of h's direction with 2^bits codewords.
///
/// Explicit mode streams the codebook from rng and keeps the best codeword
/// (first one wins ties), so memory does not grow with bits; bits must be an
/// integer no larger than 30. Statistical mode samples the minimum error
/// directly and places the codeword at that angle from h, isotropically in
/// h's complement; any real bits >= 0 is accepted.
CsitReport quantize_rvq(const ChannelVector& h, double bits, QuantizerMode mode,
                        RandomStream& rng);

/// Normalized columns of the pseudo-inverse of [h1_hat, h2_hat]^H.
///
/// Uses the closed-form inverse of the 2x2 Gram matrix. Throws
/// DegenerateGeometryError when the inputs are (numerically) collinear.
std::pair<CVector, CVector> zf_pseudoinverse_precoders(std::span<const cplx> h1_hat,
                                                      std::span<const cplx> h2_hat);

/// Top right-singular vector of [h1_hat, h2_hat]^H via the 2x2 Gram matrix.
/// On an eigenvalue tie the eigenvector on h1_hat's index wins.
CVector dominant_right_singular(std::span<const cplx> h1_hat, std::span<const cplx> h2_hat);

}  // namespace rsfb
