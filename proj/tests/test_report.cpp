#include <gtest/gtest.h>

#include "mgform/ieee37.hpp"
#include "mgform/report.hpp"
#include "mgform/scenario_gen.hpp"
#include "support.hpp"

using namespace mgform;
using namespace testing_support;

TEST(Report, MatchesGoldenFile) {
  const auto s = builtin_ieee37();
  const RunOptions opt;
  EXPECT_EQ(report_text(s, run_pipeline(s, opt), opt), read_file(source_path("tests/golden/ieee37_run.json")));
}

TEST(Report, ByteStable) {
  const auto s = builtin_ieee37();
  const RunOptions opt;
  EXPECT_EQ(report_text(s, run_pipeline(s, opt), opt), report_text(s, run_pipeline(s, opt), opt));
  const auto table = report_table(s, run_pipeline(s));
  EXPECT_EQ(table, report_table(s, run_pipeline(s)));
  EXPECT_NE(table.find("1. Do not pick up loads."), std::string::npos);
  EXPECT_NE(table.find("2. Pick up loads by the SCF method."), std::string::npos);
  EXPECT_NE(table.find("3. Pick up loads directly via the STS method."), std::string::npos);
}

TEST(Report, TimingsOnlyOnRequest) {
  const auto s = builtin_ieee37();
  const RunOptions opt;
  const auto r = run_pipeline(s, opt);
  EXPECT_FALSE(report_json(s, r, opt).contains("timings_ms"));
  EXPECT_TRUE(report_json(s, r, opt, true).contains("timings_ms"));
}

TEST(Report, Structure) {
  const auto s = builtin_ieee37();
  const RunOptions opt;
  const auto j = nlohmann::json::parse(report_text(s, run_pipeline(s, opt), opt));
  EXPECT_EQ(j["format"], kReportFormat);
  EXPECT_EQ(j["scenario"]["digest"], scenario_digest(s));
  ASSERT_EQ(j["cases"].size(), 3u);
  EXPECT_EQ(j["cases"][0]["case"], "noop");
  EXPECT_EQ(j["cases"][1]["case"], "scf");
  EXPECT_EQ(j["cases"][2]["case"], "sts");
  EXPECT_EQ(j["inference"]["resolved_count"], 10);
}

TEST(Report, ProbesOnlyAddInformation) {
  const auto s = builtin_ieee37();
  RunOptions without;
  without.probes = false;
  const auto a = run_pipeline(s, without), b = run_pipeline(s);
  EXPECT_LE(a.inference.resolved_branch.size(), b.inference.resolved_branch.size());
  EXPECT_TRUE(a.inference.probe_log.empty());
}

TEST(Report, DigestTracksContent) {
  auto s = builtin_ieee37();
  const auto d = scenario_digest(s);
  EXPECT_EQ(d.rfind("fnv1a64:", 0), 0u);
  s.description += ".";
  EXPECT_NE(scenario_digest(s), d);
}

TEST(Gen, Deterministic) {
  GenOptions o;
  o.seed = 42;
  EXPECT_EQ(serialize(generate_scenario(o)), serialize(generate_scenario(o)));
  o.seed = 43;
  GenOptions p;
  p.seed = 42;
  EXPECT_NE(serialize(generate_scenario(o)), serialize(generate_scenario(p)));
}

TEST(Gen, SizeAndValidity) {
  GenOptions o;
  o.buses = 20;
  o.dgs = 2;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    o.seed = seed;
    const auto s = generate_scenario(o);
    EXPECT_EQ(s.network.bus_count(), 20u);
    EXPECT_EQ(s.network.dg_buses().size(), 2u);
    EXPECT_TRUE(validate(s.network).empty());
    for (const auto& b : s.network.buses()) EXPECT_GE(b.load_p, 1);
    EXPECT_TRUE(load_scenario(serialize(s)) == s);
  }
}

TEST(Gen, RejectsBadSizes) {
  GenOptions o;
  o.buses = 5;
  EXPECT_THROW(generate_scenario(o), ValidationError);
  o.buses = 20;
  o.dgs = 0;
  EXPECT_THROW(generate_scenario(o), ValidationError);
}

TEST(OracleReport, DefaultIsSound) {
  const auto o = run_oracle(builtin_ieee37());
  EXPECT_TRUE(o.sound());
  const auto j = oracle_json(builtin_ieee37(), o);
  EXPECT_EQ(j["verdict"], "SOUND");
}

TEST(OracleReport, FullyObservable) {
  auto s = builtin_ieee37();
  auto buses = s.network.buses();
  for (auto& b : buses) b.ftu_online = true;
  s.network = Network(buses, s.network.branches());
  const auto o = run_oracle(s);
  EXPECT_EQ(o.forced, 0u);
  EXPECT_EQ(o.unknown, 0u);
  EXPECT_DOUBLE_EQ(o.ratio, 1.0);
}
