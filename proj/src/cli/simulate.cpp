#include "commands.hpp"

#include "rsfb/error.hpp"

namespace rsfb::cli {

namespace {

Cell bits_cell(const mc::FeedbackSpec& fb) {
  switch (fb.kind) {
    case mc::FeedbackSpec::Kind::kPerfect:
      return std::string("perfect");
    case mc::FeedbackSpec::Kind::kEqual:
      return fb.bits_beta;
    case mc::FeedbackSpec::Kind::kAlternating:
      return format_number(fb.bits_alpha) + "," + format_number(fb.bits_beta);
  }
  return std::monostate{};
}

}  // namespace

Table simulate_table(const SimulateOptions& opt) {
  mc::ExperimentSpec spec;
  spec.scheme = mc::parse_scheme(opt.scheme);
  spec.M = opt.M;
  spec.snr_db = parse_range(opt.snr_db);
  spec.feedback = parse_bits(opt.bits);
  spec.split = parse_split(opt.split);
  spec.quantizer = parse_quantizer(opt.quantizer);
  spec.precoder = parse_precoder(opt.precoder);
  spec.trials = opt.trials;
  spec.master_seed = opt.seed;
  spec.workers = opt.workers;
  if (opt.metric != "rate" && opt.metric != "loss") throw ConfigError("--metric takes rate or loss");
  const bool loss = opt.metric == "loss";
  spec.validate();

  const auto rows = loss ? mc::sweep_loss(spec) : mc::sweep(spec);
  const bool pair = spec.scheme == mc::Scheme::kRsSt;

  Table t;
  t.columns = {"scheme", "M", "snr_db", "bits"};
  if (pair) {
    t.columns.insert(t.columns.end(), {"t_alpha", "t_beta"});
  } else {
    t.columns.push_back("t");
  }
  t.columns.insert(t.columns.end(), {loss ? "rate_loss" : "sum_rate", "stderr", "rate_common",
                                     "rate_private_1", "rate_private_2", "trials", "seed"});
  for (const auto& r : rows) {
    std::vector<Cell> row{std::string(mc::scheme_tag(spec.scheme)), std::int64_t{spec.M}, r.snr_db,
                          bits_cell(spec.feedback)};
    if (pair) {
      row.push_back(r.t_alpha);
      row.push_back(r.t_beta);
    } else {
      row.push_back(r.t_beta);
    }
    const auto& e = r.estimate;
    row.insert(row.end(), {e.mean, e.std_error, e.common, e.private1, e.private2, e.trials,
                           std::to_string(spec.master_seed)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace rsfb::cli
