#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fracwalk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = fracwalk::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fracwalk_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(MlEval, Examples) {
  auto r = run({"ml-eval", "--alpha", "1", "--z", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# schema=ml-eval/1", 0), 0u);
  EXPECT_NEAR(std::stod(csv_rows(r.out)[0][1]), std::exp(-1.0), 1e-15);

  r = run({"ml-eval", "--survival", "--beta", "0.5", "--t", "0"});
  EXPECT_EQ(std::stod(csv_rows(r.out)[0][1]), 1.0);

  r = run({"ml-eval", "--mwright", "--beta", "0.5", "--z", "1"});
  EXPECT_NEAR(std::stod(csv_rows(r.out)[0][1]), std::exp(-0.25) / std::sqrt(M_PI), 1e-14);

  r = run({"ml-eval", "--alpha", "0.5", "--z", "-1,0,0.5"});
  EXPECT_EQ(csv_rows(r.out).size(), 3u);
}

TEST(ExitCodes, UsageAndDomain) {
  auto r = run({"ml-eval", "--alpha", "-1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_EQ(run({"ml-eval", "--no-such-flag"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"sample", "--count", "x"}).code, 2);
  EXPECT_EQ(run({"density", "--route", "other"}).code, 2);
  EXPECT_EQ(run({"ctrw-sim", "--a", "2", "--paths", "2"}).code, 2);  // respeeding a > 1 is transform-only
  EXPECT_EQ(run({"validate", "--only", "nope"}).code, 2);
  EXPECT_EQ(run({"ml-eval", "--help"}).code, 0);
}

TEST(Validate, FilterStatusAndDeterminism) {
  auto r = run({"validate", "--only", "montroll-weiss"});
  EXPECT_EQ(r.code, 0);
  for (const auto& row : csv_rows(r.out)) EXPECT_EQ(row[0], "montroll-weiss");
  // the beta = 0.75 Pareto case misses the 0.02 tolerance at tau = 1e-4
  EXPECT_EQ(run({"validate", "--only", "thinning-universality"}).code, 1);

  const auto a = run({"validate", "--only", "montroll-weiss,degeneracies", "--seed", "7"});
  const auto b = run({"validate", "--only", "montroll-weiss,degeneracies", "--seed", "7", "--threads", "3"});
  EXPECT_EQ(a.out, b.out);
}

TEST(Output, RoundTripDecimalAndJson) {
  const auto r = run({"sample", "--law", "sym-stable", "--alpha", "1.3", "--count", "50", "--seed", "9", "--stream", "2"});
  fracwalk::RngStream rng(9, 2);
  const auto j = fracwalk::JumpLaw::sym_stable(1.3);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 50u);
  for (const auto& row : rows) EXPECT_EQ(std::stod(row[1]), fracwalk::sample_jump(j, rng));

  const auto plain = run({"sample", "--count", "4", "--format", "plain"});
  EXPECT_EQ(std::count(plain.out.begin(), plain.out.end(), '\n'), 4);
  EXPECT_EQ(plain.out.find('#'), std::string::npos);

  const auto js = run({"thin-demo", "--json"});
  std::istringstream in(js.out);
  std::string line;
  std::getline(in, line);
  const auto head = nlohmann::json::parse(line);
  EXPECT_EQ(head["schema"], "thin-demo/1");
  int n = 0;
  while (std::getline(in, line)) {
    const auto obj = nlohmann::json::parse(line);
    EXPECT_TRUE(obj.contains("deviation"));
    ++n;
  }
  EXPECT_EQ(n, 12);
}

TEST(Manifest, WrittenAndReplayed) {
  const std::string out = temp_path("ctrw.csv");
  auto r = run({"ctrw-sim", "--paths", "500", "--table", "charfn", "--seed", "5", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(slurp(out + ".manifest.json"));
  EXPECT_EQ(m["subcommand"], "ctrw-sim");
  EXPECT_EQ(m["seed"], "5");
  EXPECT_EQ(m["parameters"]["paths"], "500");
  EXPECT_EQ(m["outputs"][0]["fnv1a64"], fracwalk::cli::hex64(fracwalk::cli::fnv1a64(slurp(out))));

  r = run({"replay", out + ".manifest.json"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(out));

  auto bad = m;
  bad["outputs"][0]["fnv1a64"] = "0000000000000000";
  const std::string bad_path = temp_path("bad.manifest.json");
  std::ofstream(bad_path) << bad.dump();
  EXPECT_EQ(run({"replay", bad_path}).code, 1);

  // without --out the manifest goes to stderr as one JSON line
  r = run({"sample", "--count", "2"});
  EXPECT_EQ(nlohmann::json::parse(r.err)["subcommand"], "sample");
  std::remove(out.c_str());
  std::remove((out + ".manifest.json").c_str());
  std::remove(bad_path.c_str());
}

TEST(Config, FileThenFlags) {
  const std::string cfg = temp_path("sample.cfg");
  std::ofstream(cfg) << "# comment\nlaw = exponential\nrate=4\ncount=3\n";
  auto r = run({"sample", "--config", cfg, "--count", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 5u);
  const auto m = nlohmann::json::parse(r.err);
  EXPECT_EQ(m["parameters"]["law"], "exponential");
  EXPECT_EQ(m["parameters"]["rate"], "4");

  std::ofstream(cfg) << "unknown=1\n";
  EXPECT_EQ(run({"sample", "--config", cfg}).code, 2);
  std::remove(cfg.c_str());
}

TEST(Threads, OutputIndependentOfThreadCount) {
  const std::vector<std::string> base{"ctrw-sim", "--paths", "3000", "--bins", "10", "--times", "0.5,2"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  EXPECT_EQ(run(one).out, run(four).out);

  const std::vector<std::string> mc{"density", "--route", "mc", "--paths", "2000", "--points", "8"};
  auto m1 = mc, m3 = mc;
  m1.insert(m1.end(), {"--threads", "1"});
  m3.insert(m3.end(), {"--threads", "3"});
  EXPECT_EQ(run(m1).out, run(m3).out);
}

TEST(Subcommands, ShapesAndValues) {
  auto r = run({"density", "--alpha", "2", "--beta", "1", "--points", "3", "--x-min", "-1", "--x-max", "1"});
  auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(std::stod(rows[1][1]), 1.0 / std::sqrt(4.0 * M_PI), 1e-15);

  r = run({"renewal-sim", "--law", "exponential", "--table", "pmf", "--paths", "2000", "--horizon", "2"});
  rows = csv_rows(r.out);
  EXPECT_NEAR(std::stod(rows[0][2]), std::exp(-2.0), 1e-15);

  r = run({"renewal-sim", "--paths", "3", "--horizon", "2", "--q", "0.5", "--tau", "0.25"});
  for (const auto& row : csv_rows(r.out)) EXPECT_LE(std::stod(row[2]), 0.5);

  r = run({"subordinate", "--steps", "4", "--paths", "2", "--beta", "1"});
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& row : rows) EXPECT_EQ(row[1], row[2]);

  r = run({"variance-scan", "--t", "1,4", "--paths", "4000"});
  rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(std::stod(rows[0][1]), 2.0 / std::tgamma(1.5), 1e-15);
  EXPECT_NEAR(std::stod(rows[0][2]), std::stod(rows[0][1]), 5.0 * std::stod(rows[0][3]));
}
