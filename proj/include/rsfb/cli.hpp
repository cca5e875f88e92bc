#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "rsfb/montecarlo.hpp"

namespace rsfb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// ---- argument helpers (args.cpp) ----

/// "a:step:b" (inclusive of b when step divides the span), "x,y,z" or a single value.
std::vector<double> parse_range(const std::string& text);

/// "10" gives equal feedback, "7,13" alternating (B_alpha, B_beta), "perfect" none.
mc::FeedbackSpec parse_bits(const std::string& text);

/// "auto", "fixed=<t>" or "fixed=<ta>,<tb>", "grid=<resolution>".
mc::SplitPolicy parse_split(const std::string& text);

mc::QuantizerChoice parse_quantizer(const std::string& text);
PrecoderStrategy parse_precoder(const std::string& text);

// ---- tables and files (output.cpp) ----

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Provenance written at the top of every file.
struct Envelope {
  std::string command;  // subcommand and flags, minus --out/--out-dir/--workers
  std::string seed;     // "none" for closed-form output
};

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

std::string to_csv(const Table& table, const Envelope& env);
std::string to_json(const Table& table, const Envelope& env);

/// Writes through a temporary sibling and renames it into place, so a failed
/// run never leaves a partial file. An empty path writes to out.
void emit(const std::string& path, const std::string& content, std::ostream& out);

/// Joins argv tokens, dropping flags that do not affect file contents.
std::string canonical_command(const std::vector<std::string>& args);

// ---- subcommands ----

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// Entry point; returns the process exit status.
int run(const std::vector<std::string>& args, Streams io);

/// Names of the figure presets, in catalog order.
std::vector<std::string> figure_presets();

}  // namespace rsfb::cli
