#include <gtest/gtest.h>

#include <algorithm>

#include "mgform/ieee37.hpp"
#include "mgform/netmodel.hpp"
#include "support.hpp"

using namespace mgform;
using namespace testing_support;

namespace {

const char* kTwoBus = R"({
  "description": "two buses",
  "probe_magnitude_default": 50,
  "buses": [
    {"id": "g", "load_p": 0, "load_q": 0, "ftu_online": true, "dg": {"cap_p": 100, "cap_q": 50}},
    {"id": "a", "load_p": 40, "load_q": 10, "ftu_online": true}
  ],
  "branches": [
    {"id": "g-a", "from": "g", "to": "a", "switchable": true, "ctrl_bus": "a", "initial_closed": true}
  ]
})";

bool has(const ValidationReport& r, const std::string& kind, const std::string& id) {
  return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.kind == kind && v.id == id; });
}

}  // namespace

TEST(NetModel, MinimalDocument) {
  auto s = load_scenario(kTwoBus);
  EXPECT_EQ(s.network.bus_count(), 2u);
  EXPECT_EQ(s.network.branch_count(), 1u);
  ASSERT_EQ(s.network.dg_buses().size(), 1u);
  EXPECT_EQ(s.network.bus(s.network.dg_buses()[0]).id, "g");
  EXPECT_EQ(s.probe_magnitude_default, 50);
}

TEST(NetModel, DanglingEndpointRejected) {
  auto doc = nlohmann::json::parse(kTwoBus);
  doc["branches"][0]["to"] = "b99";
  EXPECT_THROW(scenario_from_json(doc), ValidationError);
  try {
    scenario_from_json(doc);
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("b99"), std::string::npos);
  }
}

TEST(NetModel, SchemaErrors) {
  EXPECT_THROW(load_scenario("{not json"), SchemaError);
  auto doc = nlohmann::json::parse(kTwoBus);
  doc["buses"][1]["colour"] = "red";
  EXPECT_THROW(scenario_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(kTwoBus);
  doc["buses"][1]["load_p"] = 4.5;
  EXPECT_THROW(scenario_from_json(doc), SchemaError);
  doc = nlohmann::json::parse(kTwoBus);
  doc["branches"][0].erase("ctrl_bus");
  EXPECT_THROW(scenario_from_json(doc), SchemaError);
}

TEST(NetModel, DuplicateBranchId) {
  std::vector<Bus> buses{dg_bus("g", 100), load_bus("a", 10), load_bus("b", 10)};
  std::vector<Branch> branches{line("L1", "g", "a", true), line("L1", "a", "b", true)};
  auto r = validate_records(buses, branches);
  EXPECT_TRUE(has(r, "duplicate-id", "L1"));
  EXPECT_THROW(Network(buses, branches), ValidationError);
}

TEST(NetModel, IsolatedBus) {
  std::vector<Bus> buses{dg_bus("g", 100), load_bus("a", 10), load_bus("b7", 10)};
  std::vector<Branch> branches{line("L1", "g", "a", true)};
  auto r = validate_records(buses, branches);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_TRUE(has(r, "disconnected", "b7"));
}

TEST(NetModel, OtherViolations) {
  std::vector<Bus> buses{dg_bus("g", 100), load_bus("a", -1)};
  std::vector<Branch> branches{line("L1", "g", "a", true, "x"), line("L2", "a", "a", true)};
  auto r = validate_records(buses, branches);
  EXPECT_TRUE(has(r, "negative-load", "a"));
  EXPECT_TRUE(has(r, "ctrl-not-endpoint", "L1"));
  EXPECT_TRUE(has(r, "self-loop", "L2"));
}

TEST(NetModel, InitialStateMustBeLegal) {
  auto doc = nlohmann::json::parse(kTwoBus);
  doc["buses"][1]["dg"] = {{"cap_p", 10}, {"cap_q", 10}};
  EXPECT_THROW(scenario_from_json(doc), ValidationError);  // two DGs tied together
}

TEST(NetModel, ShippedFile) {
  auto s = load_scenario(read_file(source_path("data/ieee37.scenario.json")));
  const auto& net = s.network;
  EXPECT_EQ(net.bus_count(), 37u);
  EXPECT_EQ(net.dg_buses().size(), 3u);
  auto faulted = std::count_if(net.branches().begin(), net.branches().end(), [](const Branch& b) { return b.faulted; });
  EXPECT_EQ(faulted, 4);
  EXPECT_TRUE(s == builtin_ieee37());
}

TEST(NetModel, BuiltinScenario) {
  const auto s = builtin_ieee37();
  const auto& net = s.network;
  EXPECT_EQ(net.bus_count(), 37u);
  // Spot loads of the 37-node feeder summed over all phases.
  EXPECT_EQ(net.total_load(), (Power{2457, 1201}));
  EXPECT_TRUE(validate(net).empty());
  std::vector<std::string> dgs;
  for (auto x : net.dg_buses()) dgs.push_back(net.bus(x).id);
  EXPECT_EQ(dgs, (std::vector<std::string>{"701", "727", "775"}));
}

TEST(NetModel, RoundTrip) {
  const auto s = builtin_ieee37();
  const auto text = serialize(s);
  const auto back = load_scenario(text);
  EXPECT_TRUE(back == s);
  EXPECT_EQ(serialize(back), text);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto g = suite_scenario(seed);
    EXPECT_TRUE(load_scenario(serialize(g)) == g) << seed;
  }
}

TEST(NetModel, IncidenceLists) {
  const auto net = builtin_ieee37().network;
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    for (BusIndex i = 0; i < net.bus_count(); ++i) {
      const auto& inc = net.incident(i);
      const auto hits = std::count(inc.begin(), inc.end(), k);
      const bool end = i == net.from(k) || i == net.to(k);
      EXPECT_EQ(hits, end ? 1 : 0);
    }
  }
}
