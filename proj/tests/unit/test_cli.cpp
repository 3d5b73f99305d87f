#include <gtest/gtest.h>
#include <unistd.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "support/fixtures.hpp"
#include "supply_audit/cli.hpp"
#include "supply_audit/serialize.hpp"

using namespace supply_audit;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "supply-audit");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("supply_audit_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string chain() {
    return write("chain.jsonl",
                 R"({"name":"a","maintainers":["ma@x.org"],"license":"MIT","releases":[{"version":"1.0","date":"2017-01-01","requires":["b"]}]}
{"name":"b","maintainers":["mb@x.org"],"license":"MIT","releases":[{"version":"1.0","date":"2016-01-01","requires":["c"]}]}
{"name":"c","maintainers":["mc@y.org","mb@x.org"],"license":"MIT","releases":[{"version":"1.0","date":"2015-01-01","requires":[]}]}
)");
  }

  std::filesystem::path dir_;
};

std::string sample(const char* rel) { return testsupport::source_path(std::string("data/sample/") + rel); }

}  // namespace

TEST_F(CliTest, TrustOnChain) {
  auto r = run_cli({"--snapshot", chain(), "--format", "json", "trust", "a"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["itp"]["size"], 2);
  EXPECT_EQ(j["itm"]["members"], (json{"mb@x.org", "mc@y.org"}));
  auto table = run_cli({"--snapshot", chain(), "trust", "a"});
  EXPECT_NE(table.out.find("implicitly trusted packages of a (depth 5): 2"), std::string::npos);
}

TEST_F(CliTest, LicenseCheckAllMitIsClean) {
  auto r = run_cli({"--snapshot", chain(), "license-check", "--transitive"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(CliTest, LicenseViolationIsFinding) {
  auto r = run_cli({"--snapshot", sample("snapshot.jsonl"), "--format", "json", "license-check", "--transitive"});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  ASSERT_FALSE(j["direct"].empty());
  for (const auto& v : j["direct"]) EXPECT_EQ(to_json(violation_from_json(v)), v);
  for (const auto& v : j["inherited"]) EXPECT_EQ(to_json(violation_from_json(v)), v);
}

TEST_F(CliTest, ScanSetupExploitFixture) {
  auto r = run_cli({"scan-setup", testsupport::source_path("tests/fixtures/scripts/postinstall_command")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("CMDCLASS_OVERRIDE"), std::string::npos);
  EXPECT_NE(r.out.find("NETWORK_AT_INSTALL"), std::string::npos);
  auto clean = run_cli({"scan-setup", testsupport::source_path("tests/fixtures/scripts/minimal")});
  EXPECT_EQ(clean.code, 0);
  auto js = run_cli({"--format", "json", "scan-setup", testsupport::source_path("tests/fixtures/scripts")});
  auto j = json::parse(js.out);
  EXPECT_GE(j["findings"].size(), 10u);
  for (const auto& f : j["findings"]) EXPECT_EQ(to_json(findings_from_json(f)), f);
}

TEST_F(CliTest, UsageAndIoErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"stats"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", "/nonexistent.jsonl", "stats"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "--format", "xml", "stats"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "--depth", "-1", "reach", "c"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "--max-distance", "4", "squat"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "reach", "zzz"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "reach"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "top", "--metric", "stars"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", chain(), "advisories"}).code, 2);
  EXPECT_EQ(run_cli({"scan-setup", "/nonexistent/dir"}).code, 2);
  auto r = run_cli({"--snapshot", chain(), "--strict", "stats"});
  EXPECT_EQ(r.code, 0);
  auto bad = write("bad.jsonl", "{\"name\":\"a\",\"releases\":[]}\nnot json\n");
  EXPECT_EQ(run_cli({"--snapshot", bad, "--strict", "stats"}).code, 2);
  EXPECT_EQ(run_cli({"--snapshot", bad, "stats"}).code, 0);
}

TEST_F(CliTest, Defaults) {
  auto reach = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "reach", "c"}).out);
  EXPECT_EQ(reach["depth"], 5);
  auto table = run_cli({"--snapshot", chain(), "reach", "c"});
  EXPECT_FALSE(json::accept(table.out));
  auto squat = write("squat.jsonl",
                     R"({"name":"abcdef","releases":[{"version":"1","date":"2015-01-01"}]}
{"name":"abcxyz","releases":[{"version":"1","date":"2016-01-01"}]}
)");
  auto j = json::parse(run_cli({"--snapshot", squat, "--format", "json", "squat"}).out);
  ASSERT_EQ(j["candidates"].size(), 1u);
  EXPECT_EQ(j["candidates"][0]["distance"], 3);
  auto d2 = json::parse(run_cli({"--snapshot", squat, "--format", "json", "--max-distance", "2", "squat"}).out);
  EXPECT_TRUE(d2["candidates"].empty());
}

TEST_F(CliTest, ReachVariants) {
  auto r = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "--depth", "unlimited", "reach", "c"}).out);
  auto back = reach_from_json(r);
  EXPECT_EQ(back.size(), 2u);
  EXPECT_TRUE(back.depth.is_unlimited());
  auto one = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "--depth", "1", "reach", "c"}).out);
  EXPECT_EQ(one["size"], 1);
  auto m = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "reach", "--maintainer", "mc@y.org"}).out);
  EXPECT_EQ(m["members"], (json{"a", "b"}));
  auto series = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "reach", "c", "--series"}).out);
  EXPECT_EQ(series["series"], (json{{"2015", 0}, {"2016", 1}, {"2017", 2}}));
  auto csv = run_cli({"--snapshot", chain(), "--format", "csv", "reach", "c"});
  EXPECT_EQ(csv.out, "origin,depth,member\nc,5,a\nc,5,b\n");
}

TEST_F(CliTest, TopAndStats) {
  auto top = json::parse(run_cli({"--snapshot", chain(), "--format", "json", "top", "--metric", "package_reach", "--k", "2"}).out);
  EXPECT_EQ(top["entries"], (json{{{"key", "c"}, {"size", 2}}, {{"key", "b"}, {"size", 1}}}));
  auto stats = run_cli({"--snapshot", chain(), "--format", "json", "stats"});
  EXPECT_EQ(stats.code, 0);
  auto j = json::parse(stats.out);
  EXPECT_EQ(j["packages"], 3);
  EXPECT_EQ(j["years"]["2015"]["new_packages"], 1);
}

TEST_F(CliTest, SquatExitCodes) {
  auto defensive = write("def.jsonl",
                         R"({"name":"aws-cli","maintainers":["a@x.org"],"releases":[{"version":"1","date":"2015-01-01"}]}
{"name":"awscli","maintainers":["a@x.org"],"releases":[{"version":"1","date":"2014-01-01"}]}
)");
  EXPECT_EQ(run_cli({"--snapshot", defensive, "squat"}).code, 0);
  auto r = run_cli({"--snapshot", sample("snapshot.jsonl"), "--format", "json", "squat"});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  auto& s = j["candidates"];
  for (const auto& c : s) {
    auto back = squat_candidate_from_json(c);
    EXPECT_EQ(back.suspect.str(), c["suspect"]);
    EXPECT_EQ(to_string(back.rule), c["rule"]);
  }
}

TEST_F(CliTest, AdvisoriesExitCodesAndSchema) {
  auto adv = write("adv.jsonl", R"({"id":"X-1","package":"a","affected":"<2","published":"2017-02-01","fixed":"2017-03-01"})"
                                "\n");
  // Nothing depends on a.
  EXPECT_EQ(run_cli({"--snapshot", chain(), "--advisories", adv, "advisories"}).code, 0);
  auto r = run_cli({"--snapshot", sample("snapshot.jsonl"), "--advisories", sample("advisories.jsonl"), "--format",
                    "json", "advisories", "--exposure", "--lag"});
  EXPECT_EQ(r.code, 1);
  auto j = json::parse(r.out);
  bool saw_window = false;
  for (const auto& a : j["advisories"]) {
    EXPECT_TRUE(a["id"].is_string());
    EXPECT_TRUE(a["open_window_days"].is_number_integer());
    EXPECT_TRUE(a["exposure"]["exposed"].is_array());
    saw_window = saw_window || a["open_window_days"] == 1127;
  }
  EXPECT_TRUE(saw_window);
  auto one = json::parse(run_cli({"--snapshot", sample("snapshot.jsonl"), "--advisories", sample("advisories.jsonl"),
                                  "--format", "json", "advisories", "--package", "urllib3"})
                             .out);
  EXPECT_EQ(one["advisories"].size(), 1u);
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  for (std::vector<std::string> cmd : {std::vector<std::string>{"squat"}, {"top", "--metric", "itm", "--k", "30"}}) {
    std::vector<std::string> a{"--snapshot", sample("snapshot.jsonl"), "--format", "json", "--threads", "1"};
    std::vector<std::string> b{"--snapshot", sample("snapshot.jsonl"), "--format", "json", "--threads", "8"};
    a.insert(a.end(), cmd.begin(), cmd.end());
    b.insert(b.end(), cmd.begin(), cmd.end());
    EXPECT_EQ(run_cli(a).out, run_cli(b).out);
  }
}
