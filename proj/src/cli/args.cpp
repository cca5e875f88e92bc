#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "rsfb/cli.hpp"
#include "rsfb/error.hpp"

namespace rsfb::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& raw, const char* what) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(std::string("cannot read ") + what + " from '" + raw + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must look like a:step:b, got '" + text + "'");
    const double a = to_double(parts[0], "range start");
    const double step = to_double(parts[1], "range step");
    const double b = to_double(parts[2], "range end");
    if (!(step > 0.0)) throw ConfigError("range step must be positive");
    if (b < a) throw ConfigError("range end lies below its start");
    const double span = (b - a) / step;
    if (span > 1e6) throw ConfigError("range has too many points");
    // Index-based so rounding never drops or duplicates the end point.
    const auto n = static_cast<long>(std::floor(span + 1e-9));
    std::vector<double> out;
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
    if (std::abs(span - std::round(span)) < 1e-9) out.back() = b;
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p, "list value"));
  return out;
}

mc::FeedbackSpec parse_bits(const std::string& text) {
  const std::string s = trim(text);
  if (s == "perfect") return mc::FeedbackSpec::perfect();
  const auto parts = split(s, ',');
  if (parts.size() == 1) return mc::FeedbackSpec::equal(to_double(parts[0], "bits"));
  if (parts.size() == 2) {
    const double a = to_double(parts[0], "B_alpha");
    const double b = to_double(parts[1], "B_beta");
    if (a > b) throw ConfigError("bit pair must be ordered B_alpha,B_beta with B_alpha <= B_beta");
    return mc::FeedbackSpec::alternating(a, b);
  }
  throw ConfigError("--bits takes B, Ba,Bb or 'perfect', got '" + text + "'");
}

mc::SplitPolicy parse_split(const std::string& text) {
  const std::string s = trim(text);
  if (s == "auto") return mc::SplitPolicy::closed_form();
  if (s.rfind("fixed=", 0) == 0) {
    const auto parts = split(s.substr(6), ',');
    if (parts.size() == 1) return mc::SplitPolicy::fixed(to_double(parts[0], "fixed split"));
    if (parts.size() == 2) {
      return mc::SplitPolicy::fixed_pair(to_double(parts[0], "t_alpha"),
                                         to_double(parts[1], "t_beta"));
    }
  }
  if (s.rfind("grid=", 0) == 0) return mc::SplitPolicy::grid(to_double(s.substr(5), "grid resolution"));
  throw ConfigError("--split takes auto, fixed=<t>, fixed=<ta>,<tb> or grid=<res>, got '" + text + "'");
}

mc::QuantizerChoice parse_quantizer(const std::string& text) {
  if (text == "auto") return mc::QuantizerChoice::kAuto;
  if (text == "explicit") return mc::QuantizerChoice::kExplicit;
  if (text == "statistical") return mc::QuantizerChoice::kStatistical;
  throw ConfigError("--quantizer takes auto, explicit or statistical");
}

PrecoderStrategy parse_precoder(const std::string& text) {
  if (text == "random") return PrecoderStrategy::kRandomNullspace;
  if (text == "pinv") return PrecoderStrategy::kPseudoInverseSvd;
  throw ConfigError("--precoder takes random or pinv");
}

}  // namespace rsfb::cli
