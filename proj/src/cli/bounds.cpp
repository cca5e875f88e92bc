#include <cmath>
#include <limits>
#include <string>

#include "commands.hpp"
#include "rsfb/analytics.hpp"
#include "rsfb/error.hpp"

namespace rsfb::cli {
namespace {

using analytics::Regime;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Row {
  double P = kUnset;
  double snr_db = kUnset;
  double ba = kUnset;
  double bb = kUnset;
  double tau = kUnset;
  double delta = kUnset;
  double ta = kUnset;
  double tb = kUnset;
};

Cell opt_cell(double v) {
  if (std::isnan(v)) return std::monostate{};
  return v;
}

struct FormulaInfo {
  bool snr;
  bool tau;
  bool delta;
};

FormulaInfo info_for(const std::string& f) {
  if (f == "prop1") return {true, false, false};
  if (f == "prop2") return {true, false, true};
  if (f == "prop3" || f == "prop5") return {true, true, false};
  if (f == "prop4" || f == "bst") return {true, true, true};
  if (f == "theta" || f == "delta0" || f == "st-gain") return {false, true, false};
  throw ConfigError("unknown formula '" + f +
                    "' (expected prop1..prop5, theta, delta0, st-gain or bst)");
}

void require_variant(const std::string& variant, std::initializer_list<const char*> allowed,
                     const std::string& formula) {
  if (variant.empty()) return;
  for (const char* a : allowed) {
    if (variant == a) return;
  }
  throw ConfigError("--variant '" + variant + "' does not apply to " + formula);
}

double evaluate(const BoundsOptions& opt, Regime regime, Row& r) {
  const std::string& f = opt.formula;
  const int M = opt.M;
  const bool auto_t = opt.t == "auto";
  auto single_t = [&]() {
    if (opt.t.find(',') != std::string::npos) throw ConfigError(f + " takes a single --t value");
    return parse_range(opt.t).front();
  };

  if (f == "prop1") {
    r.ta = r.tb = auto_t ? power_split_eq(r.P, M, r.bb) : single_t();
    if (opt.variant == "at-split") {
      r.ta = r.tb = power_split_eq(r.P, M, r.bb);
      return analytics::bound_rs_s_eq_at_split(r.P, M, r.bb);
    }
    return analytics::bound_rs_s_eq(r.P, M, r.bb, r.tb, regime);
  }
  if (f == "prop2") {
    r.ta = r.tb = auto_t ? power_split_eq_delta(r.delta) : single_t();
    return analytics::feedback_bits_rs_s_eq(r.delta, r.tb, r.P, M, regime);
  }
  if (f == "prop3") {
    if (opt.variant == "capped") {
      return analytics::bound_rs_s_rs_capped(r.P, M, 0.5 * (r.ba + r.bb), r.bb - r.ba);
    }
    r.ta = r.tb = auto_t || opt.variant == "at-split" ? power_split_rs(r.P, M, r.ba, r.bb)
                                                     : single_t();
    if (opt.variant == "at-split") return analytics::bound_rs_s_rs_at_split(r.P, M, r.ba, r.bb);
    return analytics::bound_rs_s_rs(r.P, M, r.ba, r.bb, r.tb, regime);
  }
  if (f == "prop4") {
    r.ta = r.tb = auto_t ? power_split_rs_delta(r.delta, r.tau, M) : single_t();
    return analytics::feedback_bits_rs_s_rs(r.delta, r.tb, r.tau, r.P, M, regime);
  }
  if (f == "prop5") {
    if (opt.variant == "capped") return analytics::bound_rs_st_capped(r.P, M, 0.5 * (r.ba + r.bb));
    if (auto_t) {
      const auto s = power_split_st(r.P, M, r.ba, r.bb);
      r.ta = s.t_alpha;
      r.tb = s.t_beta;
    } else {
      const auto v = parse_range(opt.t);
      if (v.size() != 2) throw ConfigError("prop5 takes --t ta,tb");
      r.ta = v[0];
      r.tb = v[1];
    }
    return analytics::bound_rs_st(r.P, M, r.ba, r.bb, r.ta, r.tb, regime);
  }
  if (f == "theta") return analytics::theta(r.tau, M);
  if (f == "delta0") return analytics::delta0(analytics::theta(r.tau, M));
  if (f == "st-gain") {
    return regime == Regime::kExact ? analytics::st_gain_db(r.tau, M)
                                    : analytics::st_gain_db_large_tau(r.tau, M);
  }
  // bst
  if (opt.variant == "reduction") {
    return regime == Regime::kExact ? analytics::st_reduction_bits(r.tau, M)
                                    : analytics::st_reduction_bits_large_tau(r.tau, M);
  }
  r.ta = r.tb = power_split_rs_delta(r.delta, r.tau, M);
  return analytics::feedback_bits_rs_st(r.delta, r.tau, r.P, M);
}

}  // namespace

Table bounds_table(const BoundsOptions& opt, std::size_t& failed_rows) {
  const FormulaInfo info = info_for(opt.formula);
  if (opt.M < 2 || opt.M > 64) throw ConfigError("M must be in [2, 64]");
  Regime regime;
  if (opt.regime == "exact") {
    regime = Regime::kExact;
  } else if (opt.regime == "high-snr") {
    regime = Regime::kHighSnr;
  } else {
    throw ConfigError("--regime takes exact or high-snr");
  }
  if (opt.formula == "prop1") require_variant(opt.variant, {"at-split"}, opt.formula);
  else if (opt.formula == "prop3") require_variant(opt.variant, {"at-split", "capped"}, opt.formula);
  else if (opt.formula == "prop5") require_variant(opt.variant, {"capped"}, opt.formula);
  else if (opt.formula == "bst") require_variant(opt.variant, {"reduction"}, opt.formula);
  else require_variant(opt.variant, {}, opt.formula);

  const bool needs_bits = opt.formula == "prop1" || opt.formula == "prop3" || opt.formula == "prop5";
  std::vector<double> taus = info.tau ? parse_range(opt.tau) : std::vector<double>{kUnset};
  double fixed_ba = kUnset;
  double fixed_bb = kUnset;
  if (needs_bits) {
    if (!opt.bits.empty()) {
      const auto fb = parse_bits(opt.bits);
      if (fb.kind == mc::FeedbackSpec::Kind::kPerfect) throw ConfigError("bounds need finite --bits");
      if (opt.formula == "prop1" && fb.kind == mc::FeedbackSpec::Kind::kAlternating) {
        throw ConfigError("prop1 takes a single --bits value");
      }
      fixed_ba = fb.bits_alpha;
      fixed_bb = fb.bits_beta;
      if (info.tau) taus = {fixed_bb - fixed_ba};
    } else if (opt.bbar.empty() || opt.formula == "prop1") {
      throw ConfigError(opt.formula + " needs --bits (or --bbar with --tau)");
    }
  }
  const std::vector<double> snrs = info.snr ? parse_range(opt.snr_db) : std::vector<double>{kUnset};
  const std::vector<double> deltas = info.delta ? parse_range(opt.delta) : std::vector<double>{kUnset};
  const double bbar = opt.bbar.empty() ? kUnset : parse_range(opt.bbar).front();

  Table t;
  t.columns = {"formula", "regime", "variant", "M", "snr_db", "bits_alpha", "bits_beta",
               "tau", "delta", "t_alpha", "t_beta", "value", "status"};
  failed_rows = 0;
  for (double db : snrs) {
    for (double tau : taus) {
      for (double delta : deltas) {
        Row r;
        r.snr_db = db;
        r.P = std::isnan(db) ? kUnset : std::pow(10.0, db / 10.0);
        r.tau = tau;
        r.delta = delta;
        if (needs_bits) {
          if (!std::isnan(fixed_ba)) {
            r.ba = fixed_ba;
            r.bb = fixed_bb;
          } else {
            r.ba = bbar - 0.5 * tau;
            r.bb = bbar + 0.5 * tau;
          }
        }
        Cell value = std::monostate{};
        std::string status = "ok";
        try {
          value = evaluate(opt, regime, r);
        } catch (const InfeasibleError& e) {
          status = "infeasible: " + e.subexpression();
          ++failed_rows;
        } catch (const PrecisionError& e) {
          status = std::string("precision: ") + e.what();
          ++failed_rows;
        } catch (const DomainError& e) {
          status = std::string("domain: ") + e.what();
          ++failed_rows;
        }
        t.rows.push_back({opt.formula, std::string(analytics::regime_name(regime)),
                          opt.variant.empty() ? Cell{std::monostate{}} : Cell{opt.variant},
                          std::int64_t{opt.M}, opt_cell(db), opt_cell(r.ba), opt_cell(r.bb),
                          opt_cell(tau), opt_cell(delta), opt_cell(r.ta), opt_cell(r.tb), value,
                          status});
      }
    }
  }
  return t;
}

}  // namespace rsfb::cli
