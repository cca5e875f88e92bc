#include <filesystem>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rsfb/error.hpp"

#ifndef RSFB_VERSION
#define RSFB_VERSION "dev"
#endif

namespace rsfb::cli {
namespace {

std::string render(const Table& t, const Envelope& env, const std::string& format) {
  return format == "json" ? to_json(t, env) : to_csv(t, env);
}

// --split is accepted by bounds as a synonym for --t.
std::string split_to_t(const std::string& split) {
  if (split == "auto") return "auto";
  if (split.rfind("fixed=", 0) == 0) return split.substr(6);
  throw ConfigError("bounds --split takes auto or fixed=<t>");
}

}  // namespace

int run(const std::vector<std::string>& args, Streams io) {
  CLI::App app{"Rate-splitting feedback toolkit for the two-receiver MISO broadcast channel",
               "rsfb"};
  app.set_version_flag("--version", std::string("rsfb ") + RSFB_VERSION);
  app.require_subcommand(1);

  std::string out;
  std::string format = "csv";
  const auto formats = CLI::IsMember({"csv", "json"});

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo sum rates or losses over an SNR grid");
  s->add_option("--scheme", sim.scheme, "zfbf-perfect|zfbf-rvq|tdma|sumu|rs-s|rs-st")
      ->capture_default_str();
  s->add_option("--M", sim.M, "transmit antennas")->capture_default_str();
  s->add_option("--snr-db", sim.snr_db, "a:step:b or comma list")->capture_default_str();
  s->add_option("--bits", sim.bits, "B, Ba,Bb or perfect")->capture_default_str();
  s->add_option("--split", sim.split, "auto|fixed=<t>|fixed=<ta>,<tb>|grid=<res>")
      ->capture_default_str();
  s->add_option("--quantizer", sim.quantizer, "auto|explicit|statistical")->capture_default_str();
  s->add_option("--precoder", sim.precoder, "random|pinv")->capture_default_str();
  s->add_option("--metric", sim.metric, "rate|loss")->capture_default_str();
  s->add_option("--trials", sim.trials)->capture_default_str();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--workers", sim.workers, "0 uses every hardware thread")->capture_default_str();
  s->add_option("--out", out, "output file (default standard output)");
  s->add_option("--format", format)->check(formats)->capture_default_str();

  BoundsOptions bnd;
  std::string bounds_split;
  auto* b = app.add_subcommand("bounds", "Tabulate closed-form bounds, splits and feedback laws");
  b->add_option("--formula", bnd.formula, "prop1..prop5, theta, delta0, st-gain, bst")->required();
  b->add_option("--M", bnd.M)->capture_default_str();
  b->add_option("--snr-db", bnd.snr_db)->capture_default_str();
  b->add_option("--bits", bnd.bits, "B or Ba,Bb");
  b->add_option("--bbar", bnd.bbar, "average bits, combined with --tau");
  b->add_option("--tau", bnd.tau)->capture_default_str();
  b->add_option("--delta", bnd.delta)->capture_default_str();
  auto* topt = b->add_option("--t", bnd.t, "auto, t or ta,tb")->capture_default_str();
  b->add_option("--split", bounds_split, "auto|fixed=<t>")->excludes(topt);
  b->add_option("--regime", bnd.regime, "exact|high-snr")->capture_default_str();
  b->add_option("--variant", bnd.variant, "at-split, capped or reduction");
  b->add_option("--out", out);
  b->add_option("--format", format)->check(formats)->capture_default_str();

  FigureOptions fig;
  std::string out_dir = ".";
  auto* f = app.add_subcommand("figure", "Regenerate a figure's curves as CSV plus a manifest");
  f->add_option("preset", fig.preset, "preset name");
  f->add_option("--trials", fig.trials)->capture_default_str();
  f->add_option("--seed", fig.seed)->capture_default_str();
  f->add_option("--workers", fig.workers)->capture_default_str();
  f->add_option("--bbar", fig.bbar, "average bits for the alternating-feedback presets")
      ->capture_default_str();
  f->add_option("--quantizer", fig.quantizer)->capture_default_str();
  f->add_option("--out-dir", out_dir)->capture_default_str();
  f->add_option("--format", format)->check(formats)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    io.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    io.out << "rsfb " << RSFB_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    io.err << "rsfb: " << e.what() << "\n";
    return kExitConfig;
  }

  const std::string command = canonical_command(args);
  try {
    if (*s) {
      const Table t = simulate_table(sim);
      emit(out, render(t, {command, std::to_string(sim.seed)}, format), io.out);
    } else if (*b) {
      if (!bounds_split.empty()) bnd.t = split_to_t(bounds_split);
      std::size_t failed = 0;
      const Table t = bounds_table(bnd, failed);
      emit(out, render(t, {command, "none"}, format), io.out);
      if (!t.rows.empty() && failed == t.rows.size()) {
        io.err << "rsfb: no row could be evaluated\n";
        return kExitNumeric;
      }
    } else if (*f) {
      const FigureFiles files = figure_files(fig, command);
      const std::filesystem::path dir(out_dir);
      std::filesystem::create_directories(dir);
      const std::string ext = format == "json" ? ".json" : ".csv";
      emit((dir / (fig.preset + ext)).string(),
           render(files.data, {command, std::to_string(fig.seed)}, format), io.out);
      emit((dir / (fig.preset + ".manifest.json")).string(), files.manifest, io.out);
    }
  } catch (const ConfigError& e) {
    io.err << "rsfb: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    io.err << "rsfb: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    io.err << "rsfb: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    io.err << "rsfb: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace rsfb::cli
