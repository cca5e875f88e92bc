#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "rsfb/cli.hpp"
#include "rsfb/error.hpp"

using namespace rsfb;
using namespace rsfb::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = run(args, {o, e});
  return {c, o.str(), e.str()};
}

std::size_t data_lines(const std::string& csv) {
  std::size_t n = 0;
  std::istringstream is(csv);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("ranges") {
  CHECK(parse_range("0:5:40").size() == 9);
  CHECK(parse_range("0:5:40").back() == 40.0);
  CHECK(parse_range("1,2.5,4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK(parse_range("7") == std::vector<double>{7.0});
  CHECK(parse_range("0:0.1:0.3").size() == 4);
  CHECK_THROWS_AS(parse_range("0:0:5"), ConfigError);
  CHECK_THROWS_AS(parse_range("abc"), ConfigError);
}

TEST_CASE("bits and splits") {
  CHECK(parse_bits("perfect").kind == mc::FeedbackSpec::Kind::kPerfect);
  const auto e = parse_bits("10");
  CHECK(e.kind == mc::FeedbackSpec::Kind::kEqual);
  CHECK(e.bits_beta == 10.0);
  const auto a = parse_bits("7,13");
  CHECK(a.kind == mc::FeedbackSpec::Kind::kAlternating);
  CHECK(a.bits_alpha == 7.0);
  CHECK(a.bits_beta == 13.0);
  CHECK(parse_split("auto").kind == mc::SplitPolicy::Kind::kClosedForm);
  CHECK(parse_split("fixed=0.3").t_beta == 0.3);
  const auto p = parse_split("fixed=0.2,0.6");
  CHECK(p.t_alpha == 0.2);
  CHECK(p.t_beta == 0.6);
  CHECK(parse_split("grid=0.05").resolution == 0.05);
  CHECK_THROWS_AS(parse_split("sometimes"), ConfigError);
}

TEST_CASE("csv output") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{std::string("x,y"), 0.1}, {std::string("say \"hi\""), std::monostate{}}};
  const std::string csv = to_csv(t, {"simulate --M 4", "1"});
  CHECK(csv.find("# command: simulate --M 4\n") != std::string::npos);
  CHECK(csv.find("# seed: 1\n") != std::string::npos);
  CHECK(csv.find("\"x,y\",0.1\n") != std::string::npos);
  CHECK(csv.find("\"say \"\"hi\"\"\",\n") != std::string::npos);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-0.0) == "0");
}

TEST_CASE("command provenance drops flags that do not affect contents") {
  CHECK(canonical_command({"simulate", "--M", "4", "--workers", "8", "--out", "x.csv"}) == "simulate --M 4");
  CHECK(canonical_command({"figure", "sumrate-rs", "--out-dir=d", "--seed", "3"}) == "figure sumrate-rs --seed 3");
}

TEST_CASE("simulate") {
  const auto a = call({"simulate", "--scheme", "rs-s", "--M", "4", "--snr-db", "0:5:40", "--bits", "10",
                       "--trials", "500"});
  REQUIRE(a.code == 0);
  CHECK(data_lines(a.out) == 9);
  const auto b = call({"simulate", "--scheme", "rs-s", "--M", "4", "--snr-db", "0:5:40", "--bits", "10",
                       "--trials", "500", "--workers", "3"});
  CHECK(a.out == b.out);
  const auto j = call({"simulate", "--scheme", "tdma", "--snr-db", "10", "--trials", "100", "--format", "json"});
  CHECK(j.code == 0);
  CHECK(j.out.find("\"rows\"") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(call({"simulate", "--scheme", "rs-st", "--bits", "10"}).code == 2);
  CHECK(call({"simulate", "--scheme", "nope"}).code == 2);
  CHECK(call({"simulate", "--trials", "0"}).code == 2);
  CHECK(call({"simulate", "--bits=-1"}).code == 2);
  CHECK(call({"simulate", "--split", "fixed=1.5"}).code == 2);
  CHECK(call({"simulate", "--bogus"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"--version"}).code == 0);
  const auto f = call({"figure", "no-such-preset"});
  CHECK(f.code == 2);
  CHECK(f.err.find("sumrate-rs") != std::string::npos);
  // every row infeasible
  const auto g = call({"bounds", "--formula", "prop2", "--delta", "1.5", "--t", "0.05"});
  CHECK(g.code == 3);
  CHECK(g.out.find("infeasible") != std::string::npos);
}

TEST_CASE("bounds") {
  const auto th = call({"bounds", "--formula", "theta", "--tau", "0", "--M", "4"});
  REQUIRE(th.code == 0);
  CHECK(th.out.find(",4,ok") != std::string::npos);
  const auto p1 = call({"bounds", "--formula", "prop1", "--bits", "10", "--snr-db", "0:5:40"});
  CHECK(p1.code == 0);
  CHECK(data_lines(p1.out) == 9);
  const auto s = call({"bounds", "--formula", "prop2", "--split", "fixed=1", "--snr-db", "60"});
  const auto t = call({"bounds", "--formula", "prop2", "--t", "1", "--snr-db", "60"});
  CHECK(s.code == 0);
  CHECK(s.out.substr(s.out.find('\n', s.out.find("# seed"))) == t.out.substr(t.out.find('\n', t.out.find("# seed"))));
  CHECK(call({"bounds", "--formula", "prop9"}).code == 2);
  CHECK(call({"bounds", "--formula", "prop1"}).code == 2);
  CHECK(call({"bounds", "--formula", "prop2", "--split", "fixed=1", "--t", "1"}).code == 2);
}

TEST_CASE("failed runs leave no file behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rsfb_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path out = dir / "x.csv";
  CHECK(call({"simulate", "--scheme", "rs-st", "--bits", "10", "--out", out.string()}).code == 2);
  CHECK(!fs::exists(out));
  CHECK(call({"simulate", "--scheme", "tdma", "--snr-db", "0", "--trials", "50", "--out", out.string()}).code == 0);
  CHECK(fs::exists(out));
  CHECK(slurp(out).rfind("# rsfb", 0) == 0);
  std::size_t entries = 0;
  for (const auto& p : fs::directory_iterator(dir)) entries += p.is_regular_file();
  CHECK(entries == 1);
  fs::remove_all(dir);
}

TEST_CASE("figure writes data and manifest") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rsfb_fig_test";
  fs::remove_all(dir);
  const auto r = call({"figure", "overhead-vs-tau", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "overhead-vs-tau.csv"));
  const std::string m = slurp(dir / "overhead-vs-tau.manifest.json");
  CHECK(m.find("\"curves\"") != std::string::npos);
  CHECK(figure_presets().size() == 13);
  fs::remove_all(dir);
}
