#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "rsfb/analytics.hpp"
#include "rsfb/error.hpp"

#ifndef RSFB_VERSION
#define RSFB_VERSION "dev"
#endif

namespace rsfb::cli {
namespace {

using analytics::Regime;
using Json = nlohmann::ordered_json;

constexpr double kDelta = 64.0;  // log2(delta) = 6 bps/Hz loss target

struct Axis {
  std::string label;
  std::string unit;
};

class Figure {
 public:
  Figure(const FigureOptions& opt, std::string title, Axis x, Axis y)
      : opt_(opt), title_(std::move(title)), x_(std::move(x)), y_(std::move(y)) {
    data_.columns = {"curve", "kind", "x", "y", "stderr", "t_alpha", "t_beta", "bits_alpha",
                     "bits_beta"};
  }

  void param(const std::string& key, Json value) { params_[key] = std::move(value); }

  mc::ExperimentSpec spec(mc::Scheme scheme, int M) const {
    mc::ExperimentSpec s;
    s.scheme = scheme;
    s.M = M;
    s.quantizer = parse_quantizer(opt_.quantizer);
    s.trials = opt_.trials;
    s.master_seed = opt_.seed;
    s.workers = opt_.workers;
    return s;
  }

  void add_points(const std::string& curve, const mc::ExperimentSpec& s,
                  const std::vector<mc::PointResult>& pts) {
    for (const auto& p : pts) {
      data_.rows.push_back({curve, std::string("sim"), p.snr_db, p.estimate.mean,
                            p.estimate.std_error, p.t_alpha, p.t_beta, bits(s, true),
                            bits(s, false)});
    }
  }

  void simulated(const std::string& curve, const std::string& description,
                 const mc::ExperimentSpec& s, bool loss) {
    describe(curve, "sim", description);
    add_points(curve, s, loss ? mc::sweep_loss(s) : mc::sweep(s));
  }

  // Points whose closed form is infeasible are left out of the curve.
  void analytic(const std::string& curve, const std::string& description,
                const std::vector<double>& xs, const std::function<double(double)>& f) {
    describe(curve, "analytic", description);
    for (double x : xs) {
      double y;
      try {
        y = f(x);
      } catch (const InfeasibleError&) {
        continue;
      } catch (const PrecisionError&) {
        continue;
      }
      data_.rows.push_back({curve, std::string("analytic"), x, y, std::monostate{},
                            std::monostate{}, std::monostate{}, std::monostate{},
                            std::monostate{}});
    }
  }

  void empirical(const std::string& curve, const std::string& description, double x, double p,
                 std::int64_t n) {
    if (!described(curve)) describe(curve, "sim", description);
    data_.rows.push_back({curve, std::string("sim"), x, p,
                          std::sqrt(p * (1.0 - p) / static_cast<double>(n)), std::monostate{},
                          std::monostate{}, std::monostate{}, std::monostate{}});
  }

  void describe(const std::string& curve, const char* kind, const std::string& description) {
    curves_.push_back({{"name", curve}, {"kind", kind}, {"description", description}});
  }

  bool described(const std::string& curve) const {
    return std::any_of(curves_.begin(), curves_.end(),
                       [&](const Json& c) { return c["name"] == curve; });
  }

  FigureFiles finish(const std::string& command) {
    Json m;
    m["tool"] = "rsfb";
    m["version"] = RSFB_VERSION;
    m["command"] = command;
    m["seed"] = std::to_string(opt_.seed);
    m["preset"] = opt_.preset;
    m["title"] = title_;
    m["x_axis"] = {{"label", x_.label}, {"unit", x_.unit}};
    m["y_axis"] = {{"label", y_.label}, {"unit", y_.unit}};
    m["parameters"] = params_;
    m["curves"] = curves_;
    return {std::move(data_), m.dump(2) + "\n"};
  }

 private:
  static Cell bits(const mc::ExperimentSpec& s, bool alpha) {
    if (s.feedback.kind == mc::FeedbackSpec::Kind::kPerfect) return std::monostate{};
    return alpha ? s.feedback.bits_alpha : s.feedback.bits_beta;
  }

  const FigureOptions& opt_;
  std::string title_;
  Axis x_;
  Axis y_;
  Table data_;
  Json params_ = Json::object();
  Json curves_ = Json::array();
};

std::vector<double> grid(double a, double step, double b) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::floor((b - a) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(a + i * step);
  return v;
}

double lin(double db) { return mc::db_to_linear(db); }

const Axis kSnr{"SNR", "dB"};
const Axis kRate{"sum rate", "bps/Hz"};
const Axis kLoss{"sum rate loss", "bps/Hz"};
const Axis kBits{"feedback bits per receiver", "bits"};

// ---- presets ----------------------------------------------------------------

FigureFiles cdf_joint(const FigureOptions& opt, const std::string& cmd) {
  Figure f(opt, "Joint CDF of common and private beamforming gains on the diagonal x1 = x2",
           {"x", ""}, {"F(x, x)", ""});
  const auto xs = grid(0.0, 0.1, 5.0);
  f.param("M", Json::array({2, 4, 8}));
  f.analytic("independent", "product of two unit-exponential CDFs", xs,
             [](double x) { return analytics::joint_cdf_independent(x, x); });
  for (int M : {2, 4, 8}) {
    const std::string tag = "M" + std::to_string(M);
    f.analytic("exact-" + tag, "exact joint CDF", xs,
               [M](double x) { return analytics::joint_cdf(x, x, M); });
    auto s = f.spec(mc::Scheme::kRsS, M);
    const auto g = mc::sample_gains(s);
    for (double x : xs) {
      std::int64_t hits = 0;
      for (const auto& v : g) hits += v.common[0] <= x && v.own[0] <= x;
      f.empirical("empirical-" + tag, "Monte Carlo with random common and nullspace private beams",
                  x, static_cast<double>(hits) / static_cast<double>(g.size()), s.trials);
    }
  }
  return f.finish(cmd);
}

FigureFiles cdf_yk(const FigureOptions& opt, const std::string& cmd) {
  constexpr double kDb = 30.0;
  constexpr double kT = 0.2;
  Figure f(opt, "CDF of the common-message SINR factor Y_k and of Y = min(Y_1, Y_2)", {"y", ""},
           {"CDF", ""});
  f.param("M", 4);
  f.param("snr_db", kDb);
  f.param("t", kT);
  f.param("bits", 10);
  const double P = lin(kDb);
  const auto ys = grid(0.0, 0.001, 0.05);
  auto s = f.spec(mc::Scheme::kRsS, 4);
  s.feedback = mc::FeedbackSpec::equal(10.0);
  const auto g = mc::sample_gains(s);
  const double c = P * kT / 2.0;
  for (double y : ys) {
    std::int64_t hk = 0;
    std::int64_t hmin = 0;
    for (const auto& v : g) {
      const double y1 = v.common[0] / (1.0 + c * v.own[0]);
      const double y2 = v.common[1] / (1.0 + c * v.own[1]);
      hk += y1 <= y;
      hmin += std::min(y1, y2) <= y;
    }
    const double n = static_cast<double>(g.size());
    f.empirical("empirical-yk", "Monte Carlo CDF of Y_1", y, static_cast<double>(hk) / n, s.trials);
    f.empirical("empirical-y", "Monte Carlo CDF of Y", y, static_cast<double>(hmin) / n, s.trials);
  }
  f.analytic("approx-yk", "CDF of Y_k with independent exponential gains", ys,
             [P](double y) { return analytics::cdf_yk_approx(y, P, kT); });
  f.analytic("upper-y", "approximate upper bound on the CDF of Y", ys,
             [P](double y) { return analytics::cdf_y_upper(y, P, kT); });
  return f.finish(cmd);
}

FigureFiles rateloss_eq(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  constexpr double B = 10.0;
  Figure f(opt, "Sum rate loss against ZFBF with perfect CSIT, equal feedback", kSnr, kLoss);
  f.param("M", M);
  f.param("bits", B);
  const auto xs = grid(0.0, 5.0, 40.0);
  auto zf = f.spec(mc::Scheme::kZfbfRvq, M);
  zf.snr_db = xs;
  zf.feedback = mc::FeedbackSpec::equal(B);
  f.simulated("zfbf-rvq", "ZFBF with RVQ feedback", zf, true);
  f.analytic("zfbf-rvq-bound", "loss bound at t = 1", xs, [](double db) {
    return analytics::bound_rs_s_eq(lin(db), M, B, 1.0, Regime::kExact);
  });
  auto rs = zf;
  rs.scheme = mc::Scheme::kRsS;
  f.simulated("rs-s", "RS-S with the closed-form split", rs, true);
  f.analytic("rs-s-bound", "loss bound at the closed-form split", xs, [](double db) {
    const double P = lin(db);
    return analytics::bound_rs_s_eq(P, M, B, power_split_eq(P, M, B), Regime::kExact);
  });
  return f.finish(cmd);
}

FigureFiles sumrate_eq(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  Figure f(opt, "Sum rate with equal feedback", kSnr, kRate);
  f.param("M", M);
  f.param("bits", Json::array({10, 15}));
  f.param("grid_resolution", 0.01);
  const auto xs = grid(0.0, 5.0, 40.0);
  auto pf = f.spec(mc::Scheme::kZfbfPerfect, M);
  pf.snr_db = xs;
  pf.feedback = mc::FeedbackSpec::perfect();
  f.simulated("zfbf-perfect", "ZFBF with perfect CSIT", pf, false);
  for (double B : {10.0, 15.0}) {
    const std::string tag = "-b" + format_number(B);
    auto s = pf;
    s.feedback = mc::FeedbackSpec::equal(B);
    s.scheme = mc::Scheme::kZfbfRvq;
    f.simulated("zfbf-rvq" + tag, "ZFBF with RVQ feedback", s, false);
    s.scheme = mc::Scheme::kRsS;
    f.simulated("rs-s" + tag, "RS-S with the closed-form split", s, false);
  }
  auto gs = pf;
  gs.scheme = mc::Scheme::kRsS;
  gs.feedback = mc::FeedbackSpec::equal(10.0);
  gs.split = mc::SplitPolicy::grid(0.01);
  f.simulated("rs-s-search-b10", "RS-S with the split found by exhaustive search", gs, false);
  return f.finish(cmd);
}

FigureFiles overhead_eq(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  Figure f(opt, "Feedback bits needed for a 6 bps/Hz loss, equal feedback", kSnr, kBits);
  f.param("M", M);
  f.param("delta", kDelta);
  const auto xs = grid(0.0, 5.0, 60.0);
  const double t2 = power_split_eq_delta(kDelta);
  for (Regime r : {Regime::kExact, Regime::kHighSnr}) {
    const std::string suffix = r == Regime::kExact ? "" : "-high-snr";
    f.analytic("zfbf-rvq" + suffix, "bits at t = 1", xs, [r](double db) {
      return analytics::feedback_bits_rs_s_eq(kDelta, 1.0, lin(db), M, r);
    });
    f.analytic("rs-s" + suffix, "bits at the high-SNR split", xs, [r, t2](double db) {
      return analytics::feedback_bits_rs_s_eq(kDelta, t2, lin(db), M, r);
    });
  }
  return f.finish(cmd);
}

// One simulated point per SNR, each with its own feedback budget.
template <class Setup>
void scaled_curve(Figure& f, const std::string& curve, const std::string& description,
                  const std::vector<double>& xs, mc::Scheme scheme, int M, Setup setup) {
  f.describe(curve, "sim", description);
  for (double db : xs) {
    auto s = f.spec(scheme, M);
    s.snr_db = {db};
    try {
      if (!setup(s, lin(db))) continue;
    } catch (const InfeasibleError&) {
      continue;
    }
    f.add_points(curve, s, mc::sweep(s));
  }
}

FigureFiles sumrate_scaled_eq(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  Figure f(opt, "Sum rate with feedback scaled for a 6 bps/Hz loss, equal feedback", kSnr, kRate);
  f.param("M", M);
  f.param("delta", kDelta);
  const auto xs = grid(10.0, 5.0, 40.0);
  const double t2 = power_split_eq_delta(kDelta);
  auto pf = f.spec(mc::Scheme::kZfbfPerfect, M);
  pf.snr_db = xs;
  pf.feedback = mc::FeedbackSpec::perfect();
  f.simulated("zfbf-perfect", "ZFBF with perfect CSIT", pf, false);
  scaled_curve(f, "zfbf-rvq", "ZFBF at the t = 1 feedback law", xs, mc::Scheme::kZfbfRvq, M,
               [](mc::ExperimentSpec& s, double P) {
                 const double b = analytics::feedback_bits_rs_s_eq(kDelta, 1.0, P, M, Regime::kExact);
                 s.feedback = mc::FeedbackSpec::equal(std::max(0.0, b));
                 return true;
               });
  scaled_curve(f, "rs-s", "RS-S at the high-SNR split and its feedback law", xs, mc::Scheme::kRsS, M,
               [t2](mc::ExperimentSpec& s, double P) {
                 const double b = analytics::feedback_bits_rs_s_eq(kDelta, t2, P, M, Regime::kExact);
                 s.feedback = mc::FeedbackSpec::equal(std::max(0.0, b));
                 s.split = mc::SplitPolicy::fixed(t2);
                 return true;
               });
  return f.finish(cmd);
}

FigureFiles overhead_vs_tau(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  constexpr double kDb = 30.0;
  Figure f(opt, "Average feedback bits for a 6 bps/Hz loss against the quality gap",
           {"tau", "bits"}, kBits);
  f.param("M", M);
  f.param("snr_db", kDb);
  f.param("delta", kDelta);
  const auto taus = grid(0.0, 1.0, 20.0);
  const double P = lin(kDb);
  f.analytic("zfbf-rvq", "average bits at t = 1", taus, [P](double tau) {
    return analytics::feedback_bits_rs_s_rs(kDelta, 1.0, tau, P, M);
  });
  f.analytic("rs-s", "average bits at the high-SNR split", taus, [P](double tau) {
    return analytics::feedback_bits_rs_s_rs(kDelta, power_split_rs_delta(kDelta, tau, M), tau, P, M);
  });
  return f.finish(cmd);
}

// Keeps the average when the low budget would go negative.
mc::FeedbackSpec around(double bbar, double tau) {
  bbar = std::max(0.0, bbar);
  const double lo = bbar - 0.5 * tau;
  if (lo < 0.0) return mc::FeedbackSpec::alternating(0.0, 2.0 * bbar);
  return mc::FeedbackSpec::alternating(lo, bbar + 0.5 * tau);
}

FigureFiles rateloss_rs(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 2;
  constexpr double kTau = 6.0;
  Figure f(opt, "Sum rate loss with alternating feedback qualities", kSnr, kLoss);
  f.param("M", M);
  f.param("bbar", opt.bbar);
  f.param("tau", kTau);
  const auto xs = grid(0.0, 5.0, 40.0);
  const auto fb = around(opt.bbar, kTau);
  const double ba = fb.bits_alpha;
  const double bb = fb.bits_beta;
  auto s = f.spec(mc::Scheme::kZfbfRvq, M);
  s.snr_db = xs;
  s.feedback = fb;
  f.simulated("zfbf-rvq", "ZFBF with RVQ feedback", s, true);
  f.analytic("zfbf-rvq-bound", "loss bound at t = 1", xs, [ba, bb](double db) {
    return analytics::bound_rs_s_rs(lin(db), M, ba, bb, 1.0, Regime::kExact);
  });
  s.scheme = mc::Scheme::kRsS;
  f.simulated("rs-s", "RS-S with the closed-form split", s, true);
  f.analytic("rs-s-bound", "loss bound at the closed-form split", xs, [ba, bb](double db) {
    const double P = lin(db);
    return analytics::bound_rs_s_rs(P, M, ba, bb, power_split_rs(P, M, ba, bb), Regime::kExact);
  });
  s.scheme = mc::Scheme::kRsSt;
  f.simulated("rs-st", "RS-ST with the closed-form split pair", s, true);
  f.analytic("rs-st-bound", "loss bound at the closed-form split pair", xs, [ba, bb](double db) {
    const double P = lin(db);
    const auto t = power_split_st(P, M, ba, bb);
    return analytics::bound_rs_st(P, M, ba, bb, t.t_alpha, t.t_beta, Regime::kExact);
  });
  return f.finish(cmd);
}

FigureFiles sumrate_rs(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 2;
  Figure f(opt, "Sum rate with alternating feedback qualities", kSnr, kRate);
  f.param("M", M);
  f.param("bbar", opt.bbar);
  f.param("tau", Json::array({6, 10}));
  const auto xs = grid(0.0, 5.0, 60.0);
  auto pf = f.spec(mc::Scheme::kZfbfPerfect, M);
  pf.snr_db = xs;
  pf.feedback = mc::FeedbackSpec::perfect();
  f.simulated("zfbf-perfect", "ZFBF with perfect CSIT", pf, false);
  for (double tau : {6.0, 10.0}) {
    const std::string tag = "-tau" + format_number(tau);
    auto s = pf;
    s.feedback = around(opt.bbar, tau);
    s.scheme = mc::Scheme::kZfbfRvq;
    f.simulated("zfbf-rvq" + tag, "ZFBF with RVQ feedback", s, false);
    s.scheme = mc::Scheme::kRsS;
    f.simulated("rs-s" + tag, "RS-S with the closed-form split", s, false);
    s.scheme = mc::Scheme::kRsSt;
    f.simulated("rs-st" + tag, "RS-ST with the closed-form split pair", s, false);
  }
  return f.finish(cmd);
}

FigureFiles overhead_st(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  constexpr double kTau = 14.0;
  Figure f(opt, "Average feedback bits for a 6 bps/Hz loss with a quality gap of 14 bits", kSnr,
           kBits);
  f.param("M", M);
  f.param("tau", kTau);
  f.param("delta", kDelta);
  const auto xs = grid(0.0, 5.0, 60.0);
  const double t2 = power_split_rs_delta(kDelta, kTau, M);
  f.analytic("zfbf-rvq", "average bits at t = 1", xs, [](double db) {
    return analytics::feedback_bits_rs_s_rs(kDelta, 1.0, kTau, lin(db), M);
  });
  f.analytic("rs-s", "average bits at the high-SNR split", xs, [t2](double db) {
    return analytics::feedback_bits_rs_s_rs(kDelta, t2, kTau, lin(db), M);
  });
  f.analytic("rs-st", "average bits of the space-time scheme", xs, [](double db) {
    return analytics::feedback_bits_rs_st(kDelta, kTau, lin(db), M);
  });
  return f.finish(cmd);
}

FigureFiles sumrate_scaled_st(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  constexpr double kTau = 14.0;
  Figure f(opt, "Sum rate with feedback scaled for a 6 bps/Hz loss, quality gap of 14 bits", kSnr,
           kRate);
  f.param("M", M);
  f.param("tau", kTau);
  f.param("delta", kDelta);
  const auto xs = grid(10.0, 5.0, 40.0);
  const double t2 = power_split_rs_delta(kDelta, kTau, M);
  auto pf = f.spec(mc::Scheme::kZfbfPerfect, M);
  pf.snr_db = xs;
  pf.feedback = mc::FeedbackSpec::perfect();
  f.simulated("zfbf-perfect", "ZFBF with perfect CSIT", pf, false);
  scaled_curve(f, "zfbf-rvq", "ZFBF at the t = 1 feedback law", xs, mc::Scheme::kZfbfRvq, M,
               [](mc::ExperimentSpec& s, double P) {
                 s.feedback = around(analytics::feedback_bits_rs_s_rs(kDelta, 1.0, kTau, P, M), kTau);
                 return true;
               });
  scaled_curve(f, "rs-s", "RS-S at the high-SNR split and its feedback law", xs, mc::Scheme::kRsS, M,
               [t2](mc::ExperimentSpec& s, double P) {
                 s.feedback = around(analytics::feedback_bits_rs_s_rs(kDelta, t2, kTau, P, M), kTau);
                 s.split = mc::SplitPolicy::fixed(t2);
                 return true;
               });
  scaled_curve(f, "rs-st", "RS-ST at its feedback law", xs, mc::Scheme::kRsSt, M,
               [](mc::ExperimentSpec& s, double P) {
                 s.feedback = around(analytics::feedback_bits_rs_st(kDelta, kTau, P, M), kTau);
                 return true;
               });
  return f.finish(cmd);
}

FigureFiles compare_sumu_eq(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  Figure f(opt, "RS-S against SU/MU mode switching, pseudo-inverse precoders", kSnr, kRate);
  f.param("M", M);
  f.param("bits", Json::array({10, 15}));
  f.param("precoder", "pinv");
  const auto xs = grid(0.0, 5.0, 40.0);
  for (double B : {10.0, 15.0}) {
    const std::string tag = "-b" + format_number(B);
    auto s = f.spec(mc::Scheme::kRsS, M);
    s.snr_db = xs;
    s.feedback = mc::FeedbackSpec::equal(B);
    s.precoder = PrecoderStrategy::kPseudoInverseSvd;
    f.simulated("rs-s" + tag, "RS-S with the closed-form split", s, false);
    s.scheme = mc::Scheme::kSumu;
    f.simulated("sumu" + tag, "per-realization switch between TDMA and ZFBF", s, false);
  }
  return f.finish(cmd);
}

FigureFiles compare_sumu_rs(const FigureOptions& opt, const std::string& cmd) {
  constexpr int M = 4;
  constexpr double kTau = 18.0;
  Figure f(opt, "RS-S and RS-ST against SU/MU mode switching, pseudo-inverse precoders", kSnr,
           kRate);
  f.param("M", M);
  f.param("bbar", opt.bbar);
  f.param("tau", kTau);
  f.param("precoder", "pinv");
  const auto xs = grid(0.0, 5.0, 40.0);
  auto s = f.spec(mc::Scheme::kRsS, M);
  s.snr_db = xs;
  s.feedback = around(opt.bbar, kTau);
  s.precoder = PrecoderStrategy::kPseudoInverseSvd;
  f.simulated("rs-s", "RS-S with the closed-form split", s, false);
  s.scheme = mc::Scheme::kRsSt;
  f.simulated("rs-st", "RS-ST with the closed-form split pair", s, false);
  s.scheme = mc::Scheme::kSumu;
  f.simulated("sumu", "per-realization switch between TDMA and ZFBF", s, false);
  return f.finish(cmd);
}

using Builder = FigureFiles (*)(const FigureOptions&, const std::string&);

struct Preset {
  const char* name;
  Builder build;
};

constexpr Preset kPresets[] = {
    {"cdf-joint", cdf_joint},
    {"cdf-yk", cdf_yk},
    {"rateloss-eq", rateloss_eq},
    {"sumrate-eq", sumrate_eq},
    {"overhead-eq", overhead_eq},
    {"sumrate-scaled-eq", sumrate_scaled_eq},
    {"overhead-vs-tau", overhead_vs_tau},
    {"rateloss-rs", rateloss_rs},
    {"sumrate-rs", sumrate_rs},
    {"overhead-st", overhead_st},
    {"sumrate-scaled-st", sumrate_scaled_st},
    {"compare-sumu-eq", compare_sumu_eq},
    {"compare-sumu-rs", compare_sumu_rs},
};

}  // namespace

std::vector<std::string> figure_presets() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

FigureFiles figure_files(const FigureOptions& opt, const std::string& command) {
  if (opt.trials < 1) throw ConfigError("--trials must be at least 1");
  if (!(opt.bbar >= 0.0) || !std::isfinite(opt.bbar)) throw ConfigError("--bbar must be >= 0");
  for (const auto& p : kPresets) {
    if (opt.preset == p.name) return p.build(opt, command);
  }
  std::string list;
  for (const auto& p : kPresets) list += std::string(list.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + opt.preset + "'; available: " + list);
}

}  // namespace rsfb::cli
