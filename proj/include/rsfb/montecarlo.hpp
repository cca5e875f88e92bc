#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rsfb/channel.hpp"
#include "rsfb/schemes.hpp"

namespace rsfb::mc {

enum class Scheme { kZfbfPerfect, kZfbfRvq, kTdma, kSumu, kRsS, kRsSt };

const char* scheme_tag(Scheme s);
/// Throws ConfigError on an unknown tag.
Scheme parse_scheme(const std::string& tag);

/// Feedback budget: none needed (perfect CSIT), one B for both receivers, or
/// alternating qualities where receiver 1 reports B_beta bits in use 1 and
/// B_alpha in use 2 while receiver 2 does the opposite.
struct FeedbackSpec {
  enum class Kind { kPerfect, kEqual, kAlternating };
  Kind kind = Kind::kPerfect;
  double bits_alpha = 0.0;
  double bits_beta = 0.0;

  static FeedbackSpec perfect() { return {}; }
  static FeedbackSpec equal(double bits) { return {Kind::kEqual, bits, bits}; }
  static FeedbackSpec alternating(double bits_alpha, double bits_beta) {
    return {Kind::kAlternating, bits_alpha, bits_beta};
  }
  double mean_bits() const { return 0.5 * (bits_alpha + bits_beta); }
  int channel_uses() const { return kind == Kind::kAlternating ? 2 : 1; }
};

struct SplitPolicy {
  enum class Kind { kClosedForm, kFixed, kGridSearch };
  Kind kind = Kind::kClosedForm;
  double t_alpha = 1.0;  // fixed ratios; a single-ratio scheme uses t_beta
  double t_beta = 1.0;
  double resolution = 0.01;

  static SplitPolicy closed_form() { return {}; }
  static SplitPolicy fixed(double t) { return {Kind::kFixed, t, t, 0.01}; }
  static SplitPolicy fixed_pair(double ta, double tb) { return {Kind::kFixed, ta, tb, 0.01}; }
  static SplitPolicy grid(double resolution) { return {Kind::kGridSearch, 1.0, 1.0, resolution}; }
};

/// kAuto picks explicit codebooks for integer B <= kAutoExplicitMaxBits and
/// statistical sampling otherwise.
enum class QuantizerChoice { kAuto, kExplicit, kStatistical };
inline constexpr double kAutoExplicitMaxBits = 12.0;

struct ExperimentSpec {
  Scheme scheme = Scheme::kRsS;
  int M = 4;
  std::vector<double> snr_db{30.0};
  FeedbackSpec feedback = FeedbackSpec::equal(10.0);
  SplitPolicy split;
  QuantizerChoice quantizer = QuantizerChoice::kAuto;
  PrecoderStrategy precoder = PrecoderStrategy::kRandomNullspace;
  std::int64_t trials = 20000;
  std::uint64_t master_seed = 1;
  int workers = 1;  // 0 means one per hardware thread; never changes results

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
  QuantizerMode resolved_quantizer() const;
};

struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  double common = 0.0;
  double private1 = 0.0;
  double private2 = 0.0;
};

/// One evaluated grid point.
struct PointResult {
  double snr_db = 0.0;
  double t_alpha = 1.0;
  double t_beta = 1.0;
  RateEstimate estimate;
};

double db_to_linear(double db);

/// Ratios the split policy resolves to at linear SNR P. Grid search is not
/// resolved here; it yields (1, 1).
SplitPair resolve_split(const ExperimentSpec& spec, double P);

/// Sum rate at one SNR (dB). Uses the first entry of spec.snr_db only for
/// validation; snr_db_point is the point evaluated.
PointResult estimate_ergodic_rates(const ExperimentSpec& spec, double snr_db_point);

/// Paired loss relative to ZFBF with perfect CSIT on the same realizations.
/// The breakdown holds per-message differences, so common is minus the common rate.
PointResult estimate_rate_loss(const ExperimentSpec& spec, double snr_db_point);

struct GridSearchResult {
  double t = 1.0;
  std::vector<double> grid;
  std::vector<double> mean_rates;  // one per grid entry
  PointResult best;
};

/// Exhaustive search over t = resolution, 2 resolution, ..., 1 with common
/// random numbers across t. Single-ratio schemes only. Ties go to the smaller t.
GridSearchResult grid_search_t(const ExperimentSpec& spec, double snr_db_point, double resolution);

/// Beamforming gains of the first channel use: common[k] = |h_k^H w_c|^2 and
/// own[k] = |h_k^H w_k|^2. One entry per trial, drawn as in the rate estimators.
struct GainSample {
  std::array<double, 2> common{};
  std::array<double, 2> own{};
};
std::vector<GainSample> sample_gains(const ExperimentSpec& spec);

/// All points of spec.snr_db. Realizations are shared across points, so
/// neighbouring SNR values are compared on common random numbers.
std::vector<PointResult> sweep(const ExperimentSpec& spec);
/// Same as sweep, reporting paired losses.
std::vector<PointResult> sweep_loss(const ExperimentSpec& spec);

}  // namespace rsfb::mc
