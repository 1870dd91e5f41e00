#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sbrel_cli/commands.hpp"
#include "sbrel_cli/config.hpp"

namespace fs = std::filesystem;
using sbrel::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("sbrel_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const fs::path& p) {
  const std::string s = slurp(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

void write_pool(const fs::path& p, const std::string& header, const std::vector<std::string>& rows) {
  std::ofstream out(p);
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
}

}  // namespace

TEST(Cli, Table1Preset) {
  const fs::path dir = scratch("table1");
  const auto r = cli({"study", "--preset", "table1", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(line_count(dir / "table1.csv"), 28u);
  EXPECT_NE(r.out.find("ACC"), std::string::npos);
  EXPECT_NE(r.out.find("0.342"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "manifest.json"));
}

TEST(Cli, Study1Plumbing) {
  const fs::path dir = scratch("study1");
  const auto r = cli({"study", "--preset", "study1", "--dims", "1", "--a-max", "2", "--replicates", "20",
                      "--lengths", "10,20", "--seed", "42", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string agg = slurp(dir / "study1_aggregates.csv");
  EXPECT_EQ(agg.substr(0, agg.find('\n')),
            "study,case_id,dims,a_max,n,mean_rho,median_rho,sd_rho,mean_rescaled,limit,bias");
  EXPECT_EQ(line_count(dir / "study1_aggregates.csv"), 1u + 18u * 2u);
  EXPECT_EQ(line_count(dir / "study1_prediction_errors.csv"), 1u + 18u * 2u);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  EXPECT_EQ(m.at("seed").get<std::uint64_t>(), 42u);
  EXPECT_EQ(m.at("cases").size(), 18u);
  EXPECT_EQ(m.at("config").at("replicates").get<std::size_t>(), 20u);
}

TEST(Cli, ManifestReproducesOutputs) {
  const fs::path a = scratch("manifest_a");
  const fs::path b = scratch("manifest_b");
  ASSERT_EQ(cli({"study", "--preset", "study2", "--types", "3", "--case", "s2t3-00", "--replicates", "15",
                 "--seed", "9", "--out-dir", a.string()})
                .code,
            0);
  const auto r = cli({"study", "--config", (a / "manifest.json").string(), "--out-dir", b.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"study2_aggregates.csv", "study2_prediction_errors.csv", "study2_summary.csv", "table2.csv"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
  const fs::path a = scratch("workers_a");
  const fs::path b = scratch("workers_b");
  const std::vector<std::string> base{"study", "--preset", "study1", "--dims", "5", "--a-max", "2",
                                      "--case", "aU2", "--replicates", "30"};
  auto with = [&](const fs::path& d, const char* w) {
    auto args = base;
    args.insert(args.end(), {"--workers", w, "--out-dir", d.string()});
    return cli(args).code;
  };
  ASSERT_EQ(with(a, "1"), 0);
  ASSERT_EQ(with(b, "4"), 0);
  EXPECT_EQ(slurp(a / "study1_aggregates.csv"), slurp(b / "study1_aggregates.csv"));
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path dir = scratch("override");
  const fs::path cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"preset": "converge", "replicates": 5, "long_lengths": [1, 4], "seed": 3})";
  const auto r = cli({"study", "--config", cfg.string(), "--replicates", "7", "--out-dir", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  EXPECT_EQ(m.at("config").at("replicates").get<int>(), 7);
  EXPECT_EQ(m.at("config").at("seed").get<int>(), 3);
  // Default converge cases: aU2-b2 at 1 and 5 dimensions, two lengths each.
  EXPECT_EQ(line_count(dir / "out" / "converge.csv"), 5u);
}

TEST(Cli, OutDirFromEnvironment) {
  const fs::path dir = scratch("env");
  ::setenv("SBREL_OUT_DIR", dir.string().c_str(), 1);
  const auto r = cli({"study", "--preset", "table1"});
  ::unsetenv("SBREL_OUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "table1.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
  const fs::path dir = scratch("errors");
  auto r = cli({"study", "--config", (dir / "missing.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing.json"), std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"preset": "study1", "replicats": 3})";
  r = cli({"study", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("replicats"), std::string::npos);

  std::ofstream(dir / "broken.json") << "{";
  EXPECT_EQ(cli({"study", "--config", (dir / "broken.json").string()}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "nope"}).code, 2);
  EXPECT_EQ(cli({"study"}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "study1", "--replicates", "1"}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "study1", "--lengths", "20,10"}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "study1", "--dims", "3"}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "study1", "--case", "no-such-case"}).code, 2);
  EXPECT_EQ(cli({"study", "--preset", "study2", "--pool-file", (dir / "none.csv").string()}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
}

TEST(Cli, RuntimeErrorExitsThree) {
  const fs::path dir = scratch("runtime");
  std::ofstream(dir / "file") << "x";
  const auto r = cli({"study", "--preset", "table1", "--out-dir", (dir / "file" / "sub").string()});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"study", "--help"}).code, 0);
  EXPECT_EQ(cli({"--version"}).code, 0);
}

TEST(Cli, ProphecyParallelItemsIsExact) {
  const fs::path dir = scratch("prophecy_parallel");
  write_pool(dir / "pool.csv", "a,b", std::vector<std::string>(5, "1.2,0.3"));
  const auto r = cli({"prophecy", "--pool", (dir / "pool.csv").string(), "--from", "10", "--to", "5,25,50",
                      "--replicates", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("warning"), std::string::npos);
  const std::regex row(R"(\s+(\d+)\s+([0-9.]+)\s+([0-9.]+)\s+([-+0-9.]+))");
  std::size_t rows = 0;
  for (std::sregex_iterator it(r.out.begin(), r.out.end(), row), end; it != end; ++it) {
    EXPECT_EQ((*it)[2].str(), (*it)[3].str());
    ++rows;
  }
  EXPECT_EQ(rows, 3u);
}

TEST(Cli, ProphecyUnidimensionalAccuracy) {
  const fs::path dir = scratch("prophecy_uni");
  std::vector<std::string> rows;
  for (int i = 0; i < 60; ++i) rows.push_back(std::to_string(0.6 + 0.025 * i) + "," + std::to_string(-2.0 + i / 15.0));
  write_pool(dir / "pool.csv", "a,b", rows);
  const auto r = cli({"prophecy", "--pool", (dir / "pool.csv").string(), "--from", "10", "--to", "25"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, std::regex(R"(\s+25\s+([0-9.]+)\s+([0-9.]+))")));
  EXPECT_LE(std::abs(std::stod(m[1]) - std::stod(m[2])), 0.02);
}

TEST(Cli, ProphecyWarnsOnMultidimensionalPool) {
  const fs::path dir = scratch("prophecy_multi");
  std::vector<std::string> rows;
  for (int i = 0; i < 50; ++i) rows.push_back("1.5,0," + std::to_string(1 + i % 5));
  write_pool(dir / "pool.csv", "a,b,dim", rows);
  const auto r = cli({"prophecy", "--pool", (dir / "pool.csv").string(), "--from", "10", "--to", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("too optimistic"), std::string::npos);
  EXPECT_EQ(cli({"prophecy", "--pool", (dir / "nope.csv").string(), "--from", "10", "--to", "50"}).code, 2);
}

TEST(Cli, CaseGridExport) {
  const auto r = cli({"cases", "--preset", "study1", "--a-max", "2,5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.size(), 108u);
  EXPECT_EQ(j[0].at("a").at("kind"), "beta4");
  EXPECT_EQ(cli({"cases", "--preset", "study2", "--types", "1"}).code, 0);
  EXPECT_EQ(cli({"cases", "--preset", "table1"}).code, 2);
}

TEST(Config, LengthLists) {
  using sbrel::cli::parse_length_list;
  EXPECT_EQ(parse_length_list("10:50:10"), (std::vector<std::size_t>{10, 20, 30, 40, 50}));
  EXPECT_EQ(parse_length_list("3,7"), (std::vector<std::size_t>{3, 7}));
  EXPECT_THROW(parse_length_list("10:5:1"), sbrel::cli::ConfigError);
  EXPECT_THROW(parse_length_list("a,b"), sbrel::cli::ConfigError);
}
