#include <gtest/gtest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mstab/cli.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mstab;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mstab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p;
  }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "mstab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kSynth = R"({
  "command": "synth", "seed": 42,
  "process": {"kernel": "levy_compact", "T": 1,
              "alpha": {"type": "linear", "from": 1.1, "to": 1.9, "t0": 0, "t1": 1}, "b": 1},
  "grid": {"start": 0, "end": 1, "points": 50},
  "mc": {"n_terms": 300, "threads": 1}
})";

TEST(Io, CsvRoundTrip) {
  const auto p = fs::temp_directory_path() / "mstab_io_roundtrip.csv";
  const std::vector<double> t = {0.0, 0.1, 1.0 / 3.0};
  const std::vector<double> v = {-1e-300, 2.5, 1.0 / 7.0};
  io::write_csv(p, t, v);
  const auto c = io::read_csv(p);
  EXPECT_EQ(c.t, t);
  EXPECT_EQ(c.value, v);
  fs::remove(p);
}

TEST(Io, SvgIsWellFormed) {
  const std::vector<double> t = {0.0, 0.5, 1.0, 1.5};
  const std::vector<double> v = {0.0, 1.0, -2.0, 0.5};
  std::istringstream in(io::svg_text(t, v, "a < b & c"));
  boost::property_tree::ptree tree;
  ASSERT_NO_THROW(boost::property_tree::read_xml(in, tree));
  const auto points = tree.get<std::string>("svg.polyline.<xmlattr>.points");
  std::istringstream ps(points);
  std::string pair;
  int count = 0;
  while (ps >> pair) ++count;
  EXPECT_EQ(count, 4);
}

TEST(Config, RejectsMalformedInput) {
  const auto ok = nlohmann::json::parse(kSynth);
  EXPECT_NO_THROW(parse_config(ok));
  auto bad = ok;
  bad["extra"] = 1;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = ok;
  bad["process"]["kernel"] = "brownian";
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = ok;
  bad["process"]["alpha"] = {{"type", "cubic"}};
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = ok;
  bad["seed"] = -3;
  EXPECT_THROW(parse_config(bad), ConfigError);
  bad = ok;
  bad["process"]["alpha"] = 0.5;
  EXPECT_THROW(parse_config(bad), DomainError);
  bad = ok;
  bad["process"]["kernel"] = "linear_mmm";
  EXPECT_THROW(parse_config(bad), ConfigError);
}

TEST_F(CliTest, SynthWritesCsvAndSvg) {
  const auto cfg = write_config("s.json", kSynth);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", (dir_ / "o").string()}), 0) << err_.str();
  const auto c = io::read_csv(dir_ / "o" / "path.csv");
  EXPECT_EQ(c.t.size(), 50u);
  EXPECT_EQ(c.value.front(), 0.0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "path.svg"));
}

TEST_F(CliTest, SynthIsReproducibleAndSeedOverrides) {
  const auto cfg = write_config("s.json", kSynth);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", (dir_ / "a").string()}), 0);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--out", (dir_ / "b").string()}), 0);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--seed", "42", "--out", (dir_ / "c").string()}), 0);
  ASSERT_EQ(run({"synth", "--config", cfg.string(), "--seed", "43", "--out", (dir_ / "d").string()}), 0);
  const auto a = slurp(dir_ / "a" / "path.csv");
  EXPECT_EQ(a, slurp(dir_ / "b" / "path.csv"));
  EXPECT_EQ(a, slurp(dir_ / "c" / "path.csv"));
  EXPECT_NE(a, slurp(dir_ / "d" / "path.csv"));
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  std::string body = kSynth;
  const auto one = write_config("one.json", body);
  body.replace(body.find("\"threads\": 1"), 12, "\"threads\": 4");
  const auto four = write_config("four.json", body);
  ASSERT_EQ(run({"synth", "--config", one.string(), "--out", (dir_ / "a").string()}), 0);
  ASSERT_EQ(run({"synth", "--config", four.string(), "--out", (dir_ / "b").string()}), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "path.csv"), slurp(dir_ / "b" / "path.csv"));
}

TEST_F(CliTest, InvalidInputExitsTwo) {
  const auto cfg = write_config("s.json", kSynth);
  EXPECT_EQ(run({"synth", "--config", (dir_ / "missing.json").string()}), 2);
  EXPECT_EQ(run({"verify-stable", "--config", cfg.string()}), 2);  // config is for synth
  EXPECT_EQ(run({"teleport", "--config", cfg.string()}), 2);
  EXPECT_EQ(run({"synth"}), 2);
  const auto bad = write_config("bad.json", "{ not json");
  EXPECT_EQ(run({"synth", "--config", bad.string()}), 2);
  const auto alpha = write_config(
      "alpha.json", R"({"process": {"kernel": "levy_compact", "alpha": 2.5}, "grid": {"points": 5}})");
  EXPECT_EQ(run({"synth", "--config", alpha.string(), "--out", dir_.string()}), 2);
}

TEST_F(CliTest, StatisticalFailureExitsThree) {
  const auto cfg = write_config("v.json", R"({
    "process": {"kernel": "levy_compact", "alpha": 1.5},
    "mc": {"n_paths": 400, "n_terms": 200},
    "verify": {"t": 1, "band": 1e-9}
  })");
  EXPECT_EQ(run({"verify-stable", "--config", cfg.string(), "--out", dir_.string()}), 3);
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_FALSE(report.at("pass").get<bool>());
  EXPECT_GT(report.at("ks_D").get<double>(), 0.0);
}

TEST_F(CliTest, VerifyStablePassesOnLevy) {
  const auto cfg = write_config("v.json", R"({
    "process": {"kernel": "levy_compact", "alpha": 1.5, "b": 0.8},
    "mc": {"n_paths": 3000, "n_terms": 2000},
    "verify": {"t": 0.7}
  })");
  EXPECT_EQ(run({"verify-stable", "--config", cfg.string(), "--seed", "5", "--out", dir_.string()}), 0)
      << out_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  EXPECT_NEAR(report.at("scale").get<double>(), 0.8 * std::pow(0.7, 1.0 / 1.5), 1e-9);
}

TEST_F(CliTest, UnreachableToleranceExitsFour) {
  // The single-exponent inner integral is only good to about 1e-14.
  const auto cfg = write_config("cf.json", R"({
    "process": {"kernel": "log_fractional", "alpha": 1.5},
    "mc": {"n_paths": 20, "n_terms": 50},
    "verify": {"times": [1.0], "thetas": [[1.0]], "quad_tol": 1e-15}
  })");
  EXPECT_EQ(run({"verify-cf", "--config", cfg.string(), "--out", dir_.string()}), 4) << err_.str();
}

TEST_F(CliTest, AuditReportsVerdicts) {
  const auto cfg = write_config("a.json", R"({
    "process": {"kernel": "reverse_ou", "lambda": 1.0, "alpha": 1.5},
    "audit": {"u": [0.0, 1.0], "epsilon": 0.05, "quad_tol": 1e-5}
  })");
  ASSERT_EQ(run({"audit", "--config", cfg.string(), "--out", dir_.string()}), 0) << err_.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "report.json"));
  ASSERT_EQ(report.at("audits").size(), 2u);
  EXPECT_EQ(report.at("audits")[0].at("verdicts").at("Cs5").get<std::string>(), "finite");
}

}  // namespace
