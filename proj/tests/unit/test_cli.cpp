#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dstab/cli.hpp"
#include "dstab/densities.hpp"

using namespace dstab;
using nlohmann::json;

namespace {

std::string spec_file() {
  static const std::string path = [] {
    const auto p = std::filesystem::temp_directory_path() / "dstab_test_mu31.json";
    std::ofstream(p) << R"({"p": 3, "factors": [{"q": 31, "c": 1}], "generator_policy": "least-primitive-root"})";
    return p.string();
  }();
  return path;
}

std::string spec_file_7() {
  static const std::string path = [] {
    const auto p = std::filesystem::temp_directory_path() / "dstab_test_q7.json";
    std::ofstream(p) << R"({"p": 3, "factors": [{"q": 7, "c": 1}]})";
    return p.string();
  }();
  return path;
}

json run_json(const std::vector<std::string>& args, int expected_exit = cli::ok) {
  const cli::Result r = cli::run(args);
  EXPECT_EQ(r.exit_code, expected_exit) << r.err;
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, AfrakReportAndConfig) {
  const json j = run_json({"afrak", "--ell", "31", "--p", "3"});
  EXPECT_EQ(j["afrak"], 240);
  EXPECT_EQ(j["afrak_untwisted"], 585);
  EXPECT_EQ(j["config"]["subcommand"], "afrak");
  EXPECT_EQ(j["config"]["ell"], 31);
  EXPECT_FALSE(j["config"].contains("workers"));
}

TEST(Cli, InputErrorsCarryCodes) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"afrak", "--ell", "9", "--p", "3"},
           {"afrak", "--ell", "31"},
           {"delta", "--ell", "7", "--role", "weird", "--p", "3"},
           {"check", "--a", "1", "--b", "1", "--spec", "/nonexistent.json"},
           {"brumer", "--max-height", "0"},
           {"tail", "--z", "4", "--max-height", "100"},
           {"afrak", "--ell", "31", "--p", "3", "--workers", "0"},
           {"afrak", "--ell", "31", "--p", "3", "--format", "csv"},
           {"nonsense"},
           {}}) {
    const cli::Result r = cli::run(args);
    EXPECT_EQ(r.exit_code, cli::input_error);
    EXPECT_TRUE(r.out.empty());
    const json e = json::parse(r.err);
    EXPECT_TRUE(e["error"].contains("code"));
    EXPECT_TRUE(e["error"].contains("message"));
  }
}

TEST(Cli, CheckExitCodes) {
  json j = run_json({"check", "--a", "1", "--b", "1", "--spec", spec_file()}, cli::hypothesis_failure);
  bool saw = false;
  for (const auto& it : j["certificate"]["items"]) {
    if (it["id"] == "A2.1-4") {
      EXPECT_EQ(it["status"], "fail");
      saw = true;
    }
  }
  EXPECT_TRUE(saw);

  j = run_json({"check", "--a", "-268", "--b", "4112", "--spec", spec_file(), "--assume-selmer"});
  EXPECT_EQ(j["certificate"]["verdict"], "conditional");
  j = run_json({"check", "--a", "-268", "--b", "4112", "--spec", spec_file()});
  EXPECT_EQ(j["certificate"]["verdict"], "unestablished");

  // A 124-bit discriminant whose cofactor defeats 64-bit factoring.
  j = run_json({"check", "--a", "274877906953", "--b", "144115188075855881", "--spec", spec_file()},
               cli::indeterminate);
  EXPECT_EQ(j["certificate"]["verdict"], "indeterminate");
}

TEST(Cli, BoundHypothesisFailure) {
  const cli::Result r = cli::run({"bound", "--spec", spec_file_7()});
  EXPECT_EQ(r.exit_code, cli::hypothesis_failure);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "hypothesis_failure");
}

TEST(Cli, BoundReport) {
  const json j = run_json({"bound", "--spec", spec_file(), "--cutoff", "1000"});
  const json& f = j["bound"]["factors"];
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[0]["num"], "1");
  EXPECT_EQ(f[0]["den"], "4");
  EXPECT_EQ(f[1]["den"], "2097152");
  EXPECT_EQ(f[2]["num"], "2");
  EXPECT_EQ(f[3]["den"], "961");
  EXPECT_EQ(j["config"]["extension"]["factors"][0]["q"], 31);
}

TEST(Cli, DeltaBruteAgreesWithClosed) {
  for (const auto& [ell, role] : std::vector<std::pair<std::string, std::string>>{
           {"5", "generic"}, {"7", "generic"}, {"3", "at_p"}, {"13", "ramified"}, {"31", "ramified"}}) {
    const json a = run_json({"delta", "--ell", ell, "--role", role, "--p", "3"});
    const json b = run_json({"delta", "--ell", ell, "--role", role, "--p", "3", "--brute"});
    EXPECT_EQ(a["delta"]["value"], b["delta"]["value"]) << ell << " " << role;
  }
}

TEST(Cli, HoweCsv) {
  const cli::Result r = cli::run({"howe", "--p", "3", "--from", "225", "--to", "245", "--afrak"});
  ASSERT_EQ(r.exit_code, cli::ok);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "ell,afrak,bound_num,bound_den,vacuous_flag");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("229,", 0), 0u);
  EXPECT_EQ(line.back(), '1');
  std::getline(in, line);
  EXPECT_EQ(line.rfind("233," + std::to_string(dens::afrak(233, 3)) + ",", 0), 0u);
  EXPECT_EQ(line.back(), '0');
  const json j = run_json({"howe", "--p", "3", "--from", "225", "--to", "245", "--format", "json"});
  EXPECT_EQ(j["rows"].size(), 3u);  // 229, 233, 241
}

TEST(Cli, ByteIdenticalAcrossWorkers) {
  for (const auto& base : std::vector<std::vector<std::string>>{
           {"sieve", "--max-height", "200000", "--spec", spec_file()},
           {"afrak", "--ell", "61", "--p", "5"},
           {"brumer", "--max-height", "1e5"},
           {"tail", "--z", "7", "--max-height", "1e5"}}) {
    std::string first;
    for (const char* w : {"1", "3", "8"}) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--workers", w});
      const cli::Result r = cli::run(args);
      ASSERT_EQ(r.exit_code, cli::ok) << r.err;
      if (first.empty()) {
        first = r.out;
      } else {
        EXPECT_EQ(r.out, first) << base[0];
      }
    }
  }
}

TEST(Cli, SieveReportFields) {
  const json j = run_json({"sieve", "--max-height", "1e5", "--spec", spec_file()});
  for (const char* k : {"cutoff", "total_minimal", "family_count", "rejections", "empirical_density_num",
                        "empirical_density_den", "indeterminate"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j["cutoff"], 100000);
  EXPECT_TRUE(j["rejections"].contains("31"));
}

TEST(Cli, MembersAndTate) {
  const json m = run_json({"members", "--spec", spec_file(), "--max-height", "1e9"});
  EXPECT_EQ(m["member_count"], m["members"].size());
  const json t = run_json({"tate", "--a", "-1", "--b", "0", "--ell", "2"});
  EXPECT_EQ(t["reduction"]["type"], "additive");
  const json u = run_json({"tate", "--a", "1", "--b", "1", "--ell", "31"});
  EXPECT_EQ(u["reduction"]["kodaira"], "I1");
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "dstab_test_out.json";
  std::filesystem::remove(path);
  const cli::Result r = cli::run({"afrak", "--ell", "13", "--p", "3", "--output", path.string()});
  EXPECT_EQ(r.exit_code, cli::ok);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  EXPECT_EQ(j["afrak"], dens::afrak(13, 3));
}

TEST(Cli, TailReport) {
  const json j = run_json({"tail", "--z", "10", "--max-height", "1e5"});
  EXPECT_TRUE(j.contains("B1"));
  EXPECT_TRUE(j.contains("B2"));
  EXPECT_TRUE(j.contains("B3"));
  EXPECT_EQ(j["within_bound"], true);
}
