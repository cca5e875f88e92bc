#include "rsfb/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "rsfb/error.hpp"

namespace rsfb::mc {
namespace {

// ---- trial realizations ----------------------------------------------------

struct Realization {
  int uses = 1;
  std::array<std::array<ChannelVector, 2>, 2> h;  // [use][receiver]
  std::array<std::array<CsitReport, 2>, 2> csit;
  StPrecoders prec;
  std::array<std::array<CVector, 2>, 2> perfect_w;  // ZF on the true channels
};

double bits_for(const FeedbackSpec& fb, int use, int rx) {
  if (fb.kind != FeedbackSpec::Kind::kAlternating) return fb.bits_beta;
  // Use 1: receiver 1 has B_beta, receiver 2 B_alpha. Use 2 swaps.
  return (use == rx) ? fb.bits_beta : fb.bits_alpha;
}

Realization build_realization(const ExperimentSpec& spec, QuantizerMode mode, std::int64_t trial) {
  const auto tr = static_cast<std::uint64_t>(trial);
  Realization r;
  r.uses = spec.feedback.channel_uses();
  auto channel_rng = derive_stream(spec.master_seed, tr, StreamRole::kChannel);
  for (int u = 0; u < r.uses; ++u) {
    for (int k = 0; k < 2; ++k) r.h[u][k] = sample_channel(spec.M, channel_rng);
  }
  for (int u = 0; u < r.uses; ++u) {
    auto perfect_rng = derive_stream(spec.master_seed, tr, StreamRole::kPerfectPrecoder,
                                     static_cast<std::uint32_t>(u));
    const CVector d1 = r.h[u][0].direction();
    const CVector d2 = r.h[u][1].direction();
    r.perfect_w[u][0] = sample_unit_in_nullspace(d2, perfect_rng);
    r.perfect_w[u][1] = sample_unit_in_nullspace(d1, perfect_rng);
  }
  if (spec.feedback.kind == FeedbackSpec::Kind::kPerfect) return r;

  for (int u = 0; u < r.uses; ++u) {
    for (int k = 0; k < 2; ++k) {
      auto q_rng = derive_stream(spec.master_seed, tr, StreamRole::kQuantizer,
                                 static_cast<std::uint32_t>(2 * u + k));
      r.csit[u][k] = quantize_rvq(r.h[u][k], bits_for(spec.feedback, u, k), mode, q_rng);
    }
    auto common_rng = derive_stream(spec.master_seed, tr, StreamRole::kCommonPrecoder,
                                    static_cast<std::uint32_t>(u));
    auto private_rng = derive_stream(spec.master_seed, tr, StreamRole::kPrivatePrecoder,
                                     static_cast<std::uint32_t>(u));
    r.prec[u] = build_precoders(r.csit[u][0], r.csit[u][1], spec.precoder, common_rng, private_rng);
  }
  return r;
}

// ---- per-realization rates -------------------------------------------------

struct Parts {
  double common = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double sum() const { return common + p1 + p2; }
};

Parts reference_parts(const Realization& r, int u, double P) {
  return {0.0, rate_zfbf_perfect(r.h[u][0], r.perfect_w[u][0], P),
          rate_zfbf_perfect(r.h[u][1], r.perfect_w[u][1], P)};
}

Parts zfbf_rvq_parts(const Realization& r, int u, double P) {
  const auto s = sinr_rs_s(r.h[u][0], r.h[u][1], r.prec[u], PowerPolicy::single(P, 1.0));
  return {0.0, std::log2(1.0 + s.priv[0]), std::log2(1.0 + s.priv[1])};
}

Parts tdma_parts(const Realization& r, int u, double P) {
  const double rate = rate_tdma(r.h[u][0], r.h[u][1], r.csit[u][0], r.csit[u][1], P);
  const double g1 = gain(r.h[u][0].entries, r.csit[u][0].direction);
  const double g2 = gain(r.h[u][1].entries, r.csit[u][1].direction);
  return g1 >= g2 ? Parts{0.0, rate, 0.0} : Parts{0.0, 0.0, rate};
}

Parts use_parts(Scheme scheme, const Realization& r, int u, double P, double t) {
  switch (scheme) {
    case Scheme::kZfbfPerfect:
      return reference_parts(r, u, P);
    case Scheme::kZfbfRvq:
      return zfbf_rvq_parts(r, u, P);
    case Scheme::kTdma:
      return tdma_parts(r, u, P);
    case Scheme::kSumu: {
      const Parts td = tdma_parts(r, u, P);
      const Parts zf = zfbf_rvq_parts(r, u, P);
      return td.sum() >= zf.sum() ? td : zf;
    }
    case Scheme::kRsS: {
      const auto s = sinr_rs_s(r.h[u][0], r.h[u][1], r.prec[u], PowerPolicy::single(P, t));
      return {std::log2(1.0 + s.common), std::log2(1.0 + s.priv[0]), std::log2(1.0 + s.priv[1])};
    }
    case Scheme::kRsSt:
      break;
  }
  throw ConfigError("use_parts: scheme evaluated per realization only");
}

Parts scheme_parts(Scheme scheme, const Realization& r, double P, SplitPair t) {
  if (scheme == Scheme::kRsSt) {
    const auto s = sinr_rs_st(r.h, r.prec, PowerPolicy::pair(P, t.t_alpha, t.t_beta));
    Parts out;
    for (double c : s.common) out.common += std::log2(1.0 + c);
    out.p1 = std::log2(1.0 + s.priv[0][0]) + std::log2(1.0 + s.priv[0][1]);
    out.p2 = std::log2(1.0 + s.priv[1][0]) + std::log2(1.0 + s.priv[1][1]);
    out.common *= 0.5;
    out.p1 *= 0.5;
    out.p2 *= 0.5;
    return out;
  }
  Parts acc;
  for (int u = 0; u < r.uses; ++u) {
    const Parts p = use_parts(scheme, r, u, P, t.t_beta);
    acc.common += p.common;
    acc.p1 += p.p1;
    acc.p2 += p.p2;
  }
  const double inv = 1.0 / r.uses;
  return {acc.common * inv, acc.p1 * inv, acc.p2 * inv};
}

Parts averaged_reference(const Realization& r, double P) {
  Parts acc;
  for (int u = 0; u < r.uses; ++u) {
    const Parts p = reference_parts(r, u, P);
    acc.p1 += p.p1;
    acc.p2 += p.p2;
  }
  return {0.0, acc.p1 / r.uses, acc.p2 / r.uses};
}

// ---- parallel trial loop ---------------------------------------------------

int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Calls fn(trial) for every trial. Each call writes only its own output slot,
// so the schedule cannot influence results. The error of the lowest failing
// trial is rethrown.
template <class Fn>
void for_each_trial(std::int64_t n, int workers, Fn&& fn) {
  const int w = static_cast<int>(std::min<std::int64_t>(resolve_workers(workers), n));
  if (w <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  constexpr std::int64_t kChunk = 64;
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mu;
  std::int64_t failed_trial = n;
  std::exception_ptr error;
  auto body = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::int64_t begin = next.fetch_add(kChunk);
      if (begin >= n) return;
      const std::int64_t end = std::min(n, begin + kChunk);
      for (std::int64_t i = begin; i < end; ++i) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (i < failed_trial) {
            failed_trial = i;
            error = std::current_exception();
          }
          failed.store(true);
          return;
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w - 1));
  for (int i = 0; i < w - 1; ++i) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Samples are laid out [trial][point][field].
enum Field { kSum, kCommon, kP1, kP2, kFields };

struct Sample {
  std::vector<double> data;
  std::int64_t trials = 0;
  std::size_t points = 0;

  double at(std::int64_t trial, std::size_t point, int field) const {
    return data[(static_cast<std::size_t>(trial) * points + point) * kFields +
                static_cast<std::size_t>(field)];
  }
};

double sample_mean(const Sample& s, std::size_t point, int field) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < s.trials; ++i) acc += s.at(i, point, field);
  return acc / static_cast<double>(s.trials);
}

RateEstimate reduce(const Sample& s, std::size_t point) {
  RateEstimate e;
  e.trials = s.trials;
  e.mean = sample_mean(s, point, kSum);
  if (s.trials > 1) {
    double ss = 0.0;
    for (std::int64_t i = 0; i < s.trials; ++i) {
      const double d = s.at(i, point, kSum) - e.mean;
      ss += d * d;
    }
    e.std_error = std::sqrt(ss / static_cast<double>(s.trials - 1) / static_cast<double>(s.trials));
  }
  e.common = sample_mean(s, point, kCommon);
  e.private1 = sample_mean(s, point, kP1);
  e.private2 = sample_mean(s, point, kP2);
  return e;
}

struct EvalPoint {
  double P;
  SplitPair t;
};

// Runs every trial once and evaluates each point on the same realization.
Sample run(const ExperimentSpec& spec, const std::vector<EvalPoint>& points, bool loss) {
  const QuantizerMode mode = spec.resolved_quantizer();
  Sample s;
  s.trials = spec.trials;
  s.points = points.size();
  s.data.assign(static_cast<std::size_t>(spec.trials) * points.size() * kFields, 0.0);
  for_each_trial(spec.trials, spec.workers, [&](std::int64_t trial) {
    const Realization r = build_realization(spec, mode, trial);
    double* out = s.data.data() + static_cast<std::size_t>(trial) * points.size() * kFields;
    for (std::size_t j = 0; j < points.size(); ++j, out += kFields) {
      Parts p = scheme_parts(spec.scheme, r, points[j].P, points[j].t);
      if (loss) {
        const Parts ref = averaged_reference(r, points[j].P);
        if (spec.scheme == Scheme::kZfbfPerfect) {
          p = Parts{};
        } else {
          p = Parts{-p.common, ref.p1 - p.p1, ref.p2 - p.p2};
        }
      }
      out[kSum] = p.common + p.p1 + p.p2;
      out[kCommon] = p.common;
      out[kP1] = p.p1;
      out[kP2] = p.p2;
    }
  });
  return s;
}

std::vector<double> split_grid(double resolution) {
  std::vector<double> grid;
  const auto n = static_cast<int>(std::floor(1.0 / resolution + 1e-9));
  for (int i = 1; i <= n; ++i) grid.push_back(std::min(1.0, i * resolution));
  if (grid.empty() || grid.back() < 1.0 - 1e-12) grid.push_back(1.0);
  return grid;
}

template <class Fn>
auto with_point_context(double snr_db, Fn&& fn) -> decltype(fn()) {
  auto where = [snr_db](const std::exception& e) {
    std::ostringstream msg;
    msg << "at snr_db=" << snr_db << ": " << e.what();
    return msg.str();
  };
  try {
    return fn();
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(e.subexpression(), where(e));
  } catch (const DegenerateGeometryError& e) {
    throw DegenerateGeometryError(where(e));
  } catch (const PrecisionError& e) {
    throw PrecisionError(where(e));
  } catch (const ConfigError& e) {
    throw ConfigError(where(e));
  } catch (const DomainError& e) {
    throw DomainError(where(e));
  }
}

std::vector<PointResult> sweep_impl(const ExperimentSpec& spec, bool loss) {
  spec.validate();
  std::vector<PointResult> rows(spec.snr_db.size());
  std::vector<EvalPoint> points;
  std::vector<std::size_t> index;
  for (std::size_t j = 0; j < spec.snr_db.size(); ++j) {
    const double db = spec.snr_db[j];
    rows[j].snr_db = db;
    if (spec.split.kind == SplitPolicy::Kind::kGridSearch && spec.scheme == Scheme::kRsS) {
      // The search point is chosen on sum rate; losses are then read at t*.
      with_point_context(db, [&] {
        const auto g = grid_search_t(spec, db, spec.split.resolution);
        rows[j] = loss ? estimate_rate_loss(
                             [&] {
                               ExperimentSpec fixed = spec;
                               fixed.split = SplitPolicy::fixed(g.t);
                               return fixed;
                             }(),
                             db)
                       : g.best;
        return 0;
      });
      continue;
    }
    const double P = db_to_linear(db);
    const SplitPair t = with_point_context(db, [&] { return resolve_split(spec, P); });
    rows[j].t_alpha = t.t_alpha;
    rows[j].t_beta = t.t_beta;
    points.push_back({P, t});
    index.push_back(j);
  }
  if (!points.empty()) {
    const Sample s = run(spec, points, loss);
    for (std::size_t k = 0; k < points.size(); ++k) rows[index[k]].estimate = reduce(s, k);
  }
  return rows;
}

bool uses_t(Scheme s) { return s == Scheme::kRsS || s == Scheme::kRsSt; }

}  // namespace

const char* scheme_tag(Scheme s) {
  switch (s) {
    case Scheme::kZfbfPerfect: return "zfbf-perfect";
    case Scheme::kZfbfRvq: return "zfbf-rvq";
    case Scheme::kTdma: return "tdma";
    case Scheme::kSumu: return "sumu";
    case Scheme::kRsS: return "rs-s";
    case Scheme::kRsSt: return "rs-st";
  }
  return "?";
}

Scheme parse_scheme(const std::string& tag) {
  for (Scheme s : {Scheme::kZfbfPerfect, Scheme::kZfbfRvq, Scheme::kTdma, Scheme::kSumu,
                   Scheme::kRsS, Scheme::kRsSt}) {
    if (tag == scheme_tag(s)) return s;
  }
  throw ConfigError("unknown scheme '" + tag +
                    "' (expected zfbf-perfect, zfbf-rvq, tdma, sumu, rs-s or rs-st)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

void ExperimentSpec::validate() const {
  if (M < 2 || M > 64) throw ConfigError("M must be in [2, 64]");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  if (snr_db.empty()) throw ConfigError("SNR grid is empty");
  for (double db : snr_db) {
    if (!std::isfinite(db)) throw ConfigError("SNR values must be finite");
  }
  const bool perfect = feedback.kind == FeedbackSpec::Kind::kPerfect;
  if (perfect && scheme != Scheme::kZfbfPerfect) {
    throw ConfigError(std::string(scheme_tag(scheme)) + " needs a feedback bit budget");
  }
  if (!perfect) {
    for (double b : {feedback.bits_alpha, feedback.bits_beta}) {
      if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("feedback bits must be finite and >= 0");
    }
    if (feedback.bits_alpha > feedback.bits_beta) {
      throw ConfigError("bit pair must be ordered B_alpha <= B_beta");
    }
  }
  if (scheme == Scheme::kRsSt && feedback.kind != FeedbackSpec::Kind::kAlternating) {
    throw ConfigError("rs-st needs a pair of bit budgets B_alpha,B_beta");
  }
  if (!perfect && resolved_quantizer() == QuantizerMode::kExplicit) {
    for (double b : {feedback.bits_alpha, feedback.bits_beta}) {
      if (b != std::floor(b) || b > 30.0) {
        throw ConfigError("explicit quantizer needs integer bit budgets <= 30");
      }
    }
  }
  if (uses_t(scheme)) {
    switch (split.kind) {
      case SplitPolicy::Kind::kClosedForm:
        break;
      case SplitPolicy::Kind::kFixed:
        if (!(split.t_alpha > 0.0 && split.t_alpha <= 1.0) ||
            !(split.t_beta > 0.0 && split.t_beta <= 1.0)) {
          throw ConfigError("fixed power split must lie in (0, 1]");
        }
        if (split.t_alpha > split.t_beta) throw ConfigError("fixed split needs t_alpha <= t_beta");
        break;
      case SplitPolicy::Kind::kGridSearch:
        if (scheme != Scheme::kRsS) throw ConfigError("grid search is available for rs-s only");
        if (!(split.resolution > 0.0 && split.resolution <= 0.5)) {
          throw ConfigError("grid resolution must lie in (0, 0.5]");
        }
        break;
    }
  }
}

QuantizerMode ExperimentSpec::resolved_quantizer() const {
  switch (quantizer) {
    case QuantizerChoice::kExplicit: return QuantizerMode::kExplicit;
    case QuantizerChoice::kStatistical: return QuantizerMode::kStatistical;
    case QuantizerChoice::kAuto: break;
  }
  for (double b : {feedback.bits_alpha, feedback.bits_beta}) {
    if (b != std::floor(b) || b > kAutoExplicitMaxBits) return QuantizerMode::kStatistical;
  }
  return QuantizerMode::kExplicit;
}

SplitPair resolve_split(const ExperimentSpec& spec, double P) {
  if (!uses_t(spec.scheme)) return {1.0, 1.0};
  if (spec.split.kind == SplitPolicy::Kind::kFixed) {
    if (spec.scheme == Scheme::kRsS) return {spec.split.t_beta, spec.split.t_beta};
    return {spec.split.t_alpha, spec.split.t_beta};
  }
  if (spec.split.kind == SplitPolicy::Kind::kGridSearch) return {1.0, 1.0};
  const auto& fb = spec.feedback;
  if (spec.scheme == Scheme::kRsSt) return power_split_st(P, spec.M, fb.bits_alpha, fb.bits_beta);
  const double t = fb.kind == FeedbackSpec::Kind::kAlternating
                       ? power_split_rs(P, spec.M, fb.bits_alpha, fb.bits_beta)
                       : power_split_eq(P, spec.M, fb.bits_beta);
  return {t, t};
}

PointResult estimate_ergodic_rates(const ExperimentSpec& spec, double snr_db_point) {
  ExperimentSpec one = spec;
  one.snr_db = {snr_db_point};
  return sweep_impl(one, false).front();
}

PointResult estimate_rate_loss(const ExperimentSpec& spec, double snr_db_point) {
  ExperimentSpec one = spec;
  one.snr_db = {snr_db_point};
  return sweep_impl(one, true).front();
}

GridSearchResult grid_search_t(const ExperimentSpec& spec, double snr_db_point, double resolution) {
  ExperimentSpec fixed = spec;
  fixed.snr_db = {snr_db_point};
  fixed.split = SplitPolicy::fixed(1.0);
  fixed.validate();
  if (spec.scheme != Scheme::kRsS) throw ConfigError("grid search is available for rs-s only");
  if (!(resolution > 0.0 && resolution <= 0.5)) {
    throw ConfigError("grid resolution must lie in (0, 0.5]");
  }
  GridSearchResult out;
  out.grid = split_grid(resolution);
  const double P = db_to_linear(snr_db_point);
  std::vector<EvalPoint> points;
  for (double t : out.grid) points.push_back({P, {t, t}});
  const Sample s = run(fixed, points, false);
  std::size_t best = 0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    out.mean_rates.push_back(sample_mean(s, j, kSum));
    if (out.mean_rates[j] > out.mean_rates[best]) best = j;
  }
  out.t = out.grid[best];
  out.best.snr_db = snr_db_point;
  out.best.t_alpha = out.t;
  out.best.t_beta = out.t;
  out.best.estimate = reduce(s, best);
  return out;
}

std::vector<GainSample> sample_gains(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.feedback.kind == FeedbackSpec::Kind::kPerfect) {
    throw ConfigError("sample_gains needs quantized feedback");
  }
  const QuantizerMode mode = spec.resolved_quantizer();
  std::vector<GainSample> out(static_cast<std::size_t>(spec.trials));
  for_each_trial(spec.trials, spec.workers, [&](std::int64_t trial) {
    const Realization r = build_realization(spec, mode, trial);
    auto& g = out[static_cast<std::size_t>(trial)];
    for (int k = 0; k < 2; ++k) {
      g.common[k] = gain(r.h[0][k].entries, r.prec[0].common);
      g.own[k] = gain(r.h[0][k].entries, r.prec[0].priv[k]);
    }
  });
  return out;
}

std::vector<PointResult> sweep(const ExperimentSpec& spec) { return sweep_impl(spec, false); }

std::vector<PointResult> sweep_loss(const ExperimentSpec& spec) { return sweep_impl(spec, true); }

}  // namespace rsfb::mc
