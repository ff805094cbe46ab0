#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "cli_app.hpp"

using namespace partlat;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  cli::Json json() const { return cli::Json::parse(out); }
};

Run run(std::vector<std::string> args, cli::Engines engines = cli::default_engines(),
        std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  auto lookup = [env](const std::string& name) -> std::optional<std::string> {
    if (auto it = env.find(name); it != env.end()) return it->second;
    return std::nullopt;
  };
  const int code = cli::run(args, out, err, std::move(engines), lookup);
  return {code, out.str(), err.str()};
}

cli::Engines broken_recursive() {
  auto engines = cli::default_engines();
  engines.recursive = [](const CountQuery& q, const Limits& limits) {
    return CountResult{count_rank_size_oracle(q, limits) + 1, Engine::recursive};
  };
  return engines;
}

}  // namespace

TEST(Cli, NminExamples) {
  auto r = run({"nmin", "0,1,2,3|4,5,6"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["schema_version"], "1");
  EXPECT_EQ(j["command"], "nmin");
  EXPECT_EQ(j["result"]["closed_form"], 48);
  EXPECT_EQ(j["result"]["oracle"], 48);
  EXPECT_EQ(j["result"]["agree"], true);
  EXPECT_EQ(j["provenance"]["closed_form"], "closed-form");
  EXPECT_EQ(run({"nmin", "0|1|2"}).json()["result"]["closed_form"], 0);
  EXPECT_EQ(run({"nmin", "0,1,2,3"}).json()["result"]["closed_form"], 16);
  EXPECT_EQ(run({"nmin", "0|1|2", "--convention", "empty-product"}).json()["result"]["oracle"], 1);
}

TEST(Cli, NminParseErrorIsUsage) {
  auto r = run({"nmin", "0,1|x"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("parse"), std::string::npos);
}

TEST(Cli, MetricExamples) {
  EXPECT_EQ(run({"metric", "0,1|2,3", "0,2|1,3"}).json()["result"]["d"], 2);
  EXPECT_EQ(run({"metric", "0,1|2,3", "0,1|2,3"}).json()["result"]["d"], 0);
  EXPECT_EQ(run({"metric", "0|1|2|3", "0,1,2,3"}).json()["result"]["d"], 16);
  EXPECT_EQ(run({"metric", "0,1", "0|1|2"}).code, 2);
}

TEST(Cli, DecompsExamples) {
  auto j = run({"decomps", "0,1,2,3", "--minimal-only"}).json();
  EXPECT_EQ(j["result"]["records"].size(), 16u);
  EXPECT_EQ(j["result"]["summary"]["total"], 16);
  EXPECT_EQ(run({"decomps", "0,1|2", "--minimal-only"}).json()["result"]["records"].size(), 1u);
  EXPECT_EQ(run({"decomps", "0|1"}).json()["result"]["records"].size(), 0u);
  auto limited = run({"decomps", "0,1,2,3", "--limit", "5"});
  EXPECT_EQ(limited.code, 0);
  EXPECT_EQ(limited.json()["result"]["records"].size(), 5u);
  EXPECT_EQ(limited.json()["result"]["summary"]["truncated"], true);
  EXPECT_EQ(limited.json()["result"]["summary"]["total"], 38);
}

TEST(Cli, DecompsCeilingTruncates) {
  auto r = run({"decomps", "0,1,2,3"}, cli::default_engines(), {{"PARTLAT_MAX_COMPONENT_EDGES", "3"}});
  EXPECT_EQ(r.code, 3);
  auto j = r.json();
  EXPECT_EQ(j["result"]["summary"]["truncated"], true);
  EXPECT_EQ(j["inputs"]["overrides"]["PARTLAT_MAX_COMPONENT_EDGES"], 3);
}

TEST(Cli, BadEnvironmentIsUsage) {
  EXPECT_EQ(run({"nmin", "0,1"}, cli::default_engines(), {{"PARTLAT_MAX_FORESTS", "lots"}}).code, 2);
}

TEST(Cli, RedCountEngines) {
  const std::vector<std::string> base{"red-count", "--n", "4", "--reds", "0-1,1-2,2-3", "--rank", "2", "--size", "2"};
  for (const char* engine : {"oracle", "recursive", "both"}) {
    auto args = base;
    args.insert(args.end(), {"--engine", engine});
    auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["result"]["count"], 3);
  }
  auto j = run({"red-count", "--n", "3", "--reds", "0-1,1-2,0-2", "--rank", "2", "--size", "2"}).json();
  EXPECT_EQ(j["result"]["count"], 1);
  EXPECT_EQ(j["provenance"]["count"], "recursive");
}

TEST(Cli, BrokenEngineFailsBoth) {
  const std::vector<std::string> args{"red-count", "--n", "4", "--reds", "0-1,1-2,2-3", "--rank",
                                      "2",         "--size", "2", "--engine", "both"};
  auto r = run(args, broken_recursive());
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.json()["result"]["agree"], false);
  EXPECT_NE(r.err.find("disagree"), std::string::npos);
  // Without cross-checking the broken engine goes unnoticed.
  auto single = args;
  single.back() = "recursive";
  EXPECT_EQ(run(single, broken_recursive()).code, 0);

  auto table = run({"red-table", "--n", "3", "--reds", "0-1,1-2", "--engine", "both"}, broken_recursive());
  EXPECT_EQ(table.code, 1);
  EXPECT_EQ(table.json()["result"]["summary"]["all_agree"], false);
}

TEST(Cli, RedCountSplitAndLiteral) {
  auto j = run({"red-count", "--n", "4", "--reds", "0-1,1-2,2-3,0-3", "--rank", "3", "--size", "3", "--literal"})
               .json();
  EXPECT_EQ(j["result"]["split"]["pivot"], "0-1");
  EXPECT_EQ(j["result"]["literal"]["rule"], "long-cycles");
  EXPECT_EQ(j["result"]["literal"]["agrees"], false);
  EXPECT_EQ(run({"red-count", "--n", "3", "--reds", "0-1", "--rank", "1", "--size", "1", "--pivot", "1-2"}).code, 2);
}

TEST(Cli, RedTable) {
  auto r = run({"red-table", "--n", "4", "--reds", "0-1,1-2,2-3", "--engine", "both"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["result"]["cells"].size(), 16u);
  EXPECT_EQ(j["result"]["summary"]["reachable"], 8);
  EXPECT_EQ(j["result"]["summary"]["structured"], 8);
  for (const auto& cell : j["result"]["cells"]) {
    if (cell["j"] > cell["s"]) {
      EXPECT_EQ(cell["count"], 0);
    }
    if (cell["j"] == 0 && cell["s"] == 0) {
      EXPECT_EQ(cell["count"], 1);
    }
  }
  auto nonempty = run({"red-table", "--n", "4", "--reds", "0-1,1-2,2-3", "--nonempty-joins"}).json();
  EXPECT_EQ(nonempty["result"]["summary"]["reachable"], 7);
  EXPECT_EQ(nonempty["result"]["summary"]["structured"], 7);
}

TEST(Cli, RedTableCsv) {
  auto r = run({"red-table", "--n", "2", "--reds", "0-1", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "j,s,count,engine,oracle,recursive,agree\n"
            "0,0,1,recursive,,1,true\n"
            "0,1,0,recursive,,0,true\n"
            "1,0,0,recursive,,0,true\n"
            "1,1,1,recursive,,1,true\n");
}

TEST(Cli, Labels) {
  auto j = run({"--labels", "x1,x2,x3,x4", "nmin", "x1,x3|x2,x4"}).json();
  EXPECT_EQ(j["inputs"]["partition"], "x1,x3|x2,x4");
  EXPECT_EQ(j["inputs"]["labels"].size(), 4u);
  auto after = run({"nmin", "x2,x1|x3", "--labels", "x1,x2,x3"});
  ASSERT_EQ(after.code, 0) << after.err;
  EXPECT_EQ(after.json()["inputs"]["partition"], "x1,x2|x3");
  EXPECT_EQ(run({"--labels", "a,b", "nmin", "a,c"}).code, 2);
  EXPECT_EQ(run({"--labels", "a,b,c", "nmin", "a,b"}).code, 2);
  auto reds = run({"--labels", "a,b,c", "red-count", "--reds", "a-b,b-c", "--rank", "2", "--size", "2"});
  ASSERT_EQ(reds.code, 0) << reds.err;
  EXPECT_EQ(reds.json()["inputs"]["reds"], "a-b,b-c");
}

TEST(Cli, Check) {
  auto r = run({"check", "5", "--properties", "HFRL,HFM,UFM,zero"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = r.json();
  ASSERT_EQ(j["result"]["reports"].size(), 4u);
  EXPECT_EQ(j["result"]["reports"][0]["holds"], false);
  EXPECT_EQ(j["result"]["reports"][0]["passed"], true);
  EXPECT_EQ(j["result"]["reports"][0]["witness"]["counts"][1], 4);
  EXPECT_EQ(run({"check", "4", "--properties", "metric"}).code, 1);
  EXPECT_EQ(run({"check", "4", "--properties", "bogus"}).code, 2);
  auto skipped = run({"check", "8", "--properties", "isotone"});
  EXPECT_EQ(skipped.code, 0);
  EXPECT_EQ(skipped.json()["result"]["summary"]["skipped"], 1);
}

TEST(Cli, ExportDot) {
  auto r = run({"export-dot", "--partition", "0,1|2"});
  EXPECT_EQ(r.out, "graph G_pi {\n  0;\n  1;\n  2;\n  0 -- 1;\n}\n");
  auto j = run({"export-dot", "--n", "3", "--reds", "0-1,1-2", "--format", "json"}).json();
  EXPECT_EQ(j["command"], "export-dot");
  EXPECT_EQ(run({"export-dot"}).code, 2);
  auto named = run({"--labels", "a,b", "export-dot", "--partition", "a,b"});
  EXPECT_NE(named.out.find("[label=\"a\"]"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"red-count", "--reds", "0-1", "--rank", "0", "--size", "0"}).code, 2);
  EXPECT_EQ(run({"red-count", "--n", "3", "--reds", "0-1", "--rank", "0", "--size", "0", "--engine", "x"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ResourceLimitExit) {
  auto r = run({"enumerate", "6"}, cli::default_engines(), {{"PARTLAT_MAX_PARTITION_N", "5"}});
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"check", "5", "--properties", "metric,supermodularity"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, BigCountsBecomeStrings) {
  auto j = run({"nmin", "0,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16,17,18,19,20,21"}).json();
  EXPECT_TRUE(j["result"]["closed_form"].is_string());
  EXPECT_EQ(j["result"]["closed_form"], to_string(ipow(22, 20)));
  EXPECT_TRUE(j["result"]["oracle"].is_null());
}
