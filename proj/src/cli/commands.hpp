#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsfb/cli.hpp"

namespace rsfb::cli {

struct SimulateOptions {
  std::string scheme = "rs-s";
  int M = 4;
  std::string snr_db = "0:5:40";
  std::string bits = "10";
  std::string split = "auto";
  std::string quantizer = "auto";
  std::string precoder = "random";
  std::string metric = "rate";  // rate | loss
  std::int64_t trials = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct BoundsOptions {
  std::string formula;
  int M = 4;
  std::string snr_db = "30";
  std::string bits;  // B or Ba,Bb
  std::string bbar;  // with --tau gives Ba = bbar - tau/2, Bb = bbar + tau/2
  std::string tau = "0";
  std::string delta = "64";
  std::string t = "auto";  // auto | value | ta,tb
  std::string regime = "exact";
  std::string variant;  // "", at-split, capped
};

struct FigureOptions {
  std::string preset;
  std::int64_t trials = 20000;
  std::uint64_t seed = 1;
  int workers = 1;
  double bbar = 10.0;
  std::string quantizer = "statistical";
};

struct FigureFiles {
  Table data;
  std::string manifest;  // JSON document
};

Table simulate_table(const SimulateOptions& opt);

/// failed_rows counts rows whose formula could not be evaluated.
Table bounds_table(const BoundsOptions& opt, std::size_t& failed_rows);

FigureFiles figure_files(const FigureOptions& opt, const std::string& command);

}  // namespace rsfb::cli
