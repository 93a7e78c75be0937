#pragma once

// Run pipeline behind the command-line tool and its two renderings: a
// structured JSON report (stable key order, no timings unless asked) and an
// aligned text table laid out like the three-case comparison.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "mgform/consistency_oracle.hpp"
#include "mgform/inference.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/restoration.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

inline constexpr const char* kReportFormat = "mgform-run/1";

// FNV-1a over the canonical serialization.
inline std::string scenario_digest(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize(s)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// DG1, DG2, ... in bus id order.
inline std::string dg_label(const Network& net, BusIndex x) {
  const auto& dgs = net.dg_buses();
  for (std::size_t n = 0; n < dgs.size(); ++n)
    if (dgs[n] == x) return "DG" + std::to_string(n + 1);
  return net.bus(x).id;
}

struct RunOptions {
  bool probes = true;
  ScfOptions scf;
};

struct CaseResult {
  std::string key;
  std::string label;
  RestorationPlan plan;
  ServedReport served;
};

struct RunResult {
  std::string digest;
  TelemetrySnapshot snapshot;
  InferenceResult inference;
  std::vector<CaseResult> cases;  // noop, scf, sts
  std::vector<std::pair<std::string, double>> timings_ms;

  [[nodiscard]] const CaseResult& at(const std::string& key) const {
    for (const auto& c : cases)
      if (c.key == key) return c;
    throw Error("no case named " + key);
  }
  [[nodiscard]] bool infeasible() const {
    for (const auto& c : cases)
      if (c.plan.infeasible) return true;
    return false;
  }
};

inline RunResult run_pipeline(const Scenario& s, const RunOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  const auto& net = s.network;
  RunResult r;
  auto lap = clock::now();
  auto mark = [&](const char* stage) {
    auto t = clock::now();
    r.timings_ms.emplace_back(stage, std::chrono::duration<double, std::milli>(t - lap).count());
    lap = t;
  };

  r.digest = scenario_digest(s);
  const auto truth = initial_states(net);
  r.snapshot = observe(net, truth);
  mark("observe");

  SimulatedProbeExecutor exec(net, truth);
  InferenceOptions io;
  io.probe_magnitude_default = s.probe_magnitude_default;
  r.inference = run_algorithm1(net, r.snapshot, opt.probes ? &exec : nullptr, io);
  mark("inference");

  auto add = [&](const char* key, const char* label, RestorationPlan plan) {
    auto served = evaluate(net, truth, plan, &r.inference);
    r.cases.push_back({key, label, std::move(plan), std::move(served)});
  };
  add("noop", "1. Do not pick up loads.", noop_restore(net, r.snapshot, &r.inference));
  mark("noop");
  add("scf", "2. Pick up loads by the SCF method.", scf_restore(net, r.inference, r.snapshot, opt.scf));
  mark("scf");
  add("sts", "3. Pick up loads directly via the STS method.", sts_restore(net, r.snapshot));
  mark("sts");
  return r;
}

// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::ordered_json power_json(const Power& p) { return {{"p", p.p}, {"q", p.q}}; }

inline nlohmann::ordered_json dg_ref(const Network& net, BusIndex x) {
  return {{"label", dg_label(net, x)}, {"bus", net.bus(x).id}};
}

inline nlohmann::ordered_json dg_outputs(const Network& net, const std::map<BusIndex, std::int64_t>& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [x, p] : m) j[net.bus(x).id] = p;
  return j;
}

template <class Set>
std::vector<std::string> sorted_ids(const Network& net, const Set& s, bool buses) {
  std::vector<std::string> ids;
  for (auto i : s) ids.push_back(buses ? net.bus(i).id : net.branch(i).id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const Scenario& s, const RunResult& r, const RunOptions& opt,
                                          bool with_timings = false) {
  using nlohmann::ordered_json;
  const auto& net = s.network;
  const auto& inf = r.inference;

  ordered_json j;
  j["format"] = kReportFormat;

  auto& sc = j["scenario"];
  sc["description"] = s.description;
  sc["digest"] = r.digest;
  sc["buses"] = net.bus_count();
  sc["branches"] = net.branch_count();
  sc["dgs"] = ordered_json::array();
  for (auto x : net.dg_buses()) {
    auto d = detail::dg_ref(net, x);
    d["cap_p"] = net.bus(x).dg->cap_p;
    d["cap_q"] = net.bus(x).dg->cap_q;
    sc["dgs"].push_back(d);
  }
  j["options"] = {{"probes", opt.probes}, {"node_budget", opt.scf.node_budget}};

  auto& in = j["inference"];
  std::size_t unknown = 0;
  for (auto st : r.snapshot.branch_state)
    if (st == BranchState::Unknown) ++unknown;
  in["unknown_branches"] = unknown;
  in["resolved_count"] = inf.resolved_branch.size();
  in["lockout_count"] = inf.lockout_branches.size();
  in["iterations"] = inf.iterations;
  std::map<std::string, std::string> rb, rbus, mem;
  for (const auto& [k, st] : inf.resolved_branch) rb[net.branch(k).id] = to_string(st);
  for (const auto& [i, st] : inf.resolved_bus) rbus[net.bus(i).id] = to_string(st);
  for (const auto& [i, x] : inf.membership) mem[net.bus(i).id] = net.bus(x).id;
  in["resolved_branches"] = ordered_json::object();
  for (const auto& [id, st] : rb) in["resolved_branches"][id] = st;
  in["resolved_buses"] = ordered_json::object();
  for (const auto& [id, st] : rbus) in["resolved_buses"][id] = st;
  in["membership"] = ordered_json::object();
  for (const auto& [id, x] : mem) in["membership"][id] = x;
  in["lockout_branches"] = detail::sorted_ids(net, inf.lockout_branches, false);
  in["no_energize_buses"] = detail::sorted_ids(net, inf.no_energize_buses, true);
  in["probes"] = ordered_json::array();
  for (const auto& e : inf.probe_log) {
    ordered_json p;
    p["bus"] = net.bus(e.bus).id;
    p["delta_p"] = e.delta_p;
    p["outcome"] = to_string(e.outcome);
    p["supplier"] = e.supplier ? ordered_json(net.bus(*e.supplier).id) : ordered_json(nullptr);
    if (e.result) {
      p["dg_before"] = detail::dg_outputs(net, e.result->dg_before);
      p["dg_after"] = detail::dg_outputs(net, e.result->dg_after);
    }
    if (!e.note.empty()) p["note"] = e.note;
    in["probes"].push_back(p);
  }

  j["cases"] = ordered_json::array();
  for (const auto& c : r.cases) {
    ordered_json cj;
    cj["case"] = c.key;
    cj["label"] = c.label;
    cj["served"] = detail::power_json(c.served.served);
    cj["predicted"] = detail::power_json(c.plan.predicted_served);
    cj["infeasible"] = c.plan.infeasible;
    cj["tripped_dgs"] = ordered_json::array();
    for (auto x : c.served.tripped_dgs) cj["tripped_dgs"].push_back(detail::dg_ref(net, x));
    cj["protection_trips"] = ordered_json::array();
    for (auto x : c.served.protection_trips) cj["protection_trips"].push_back(detail::dg_ref(net, x));
    cj["violations"] = ordered_json::array();
    for (const auto& v : c.served.violations)
      cj["violations"].push_back({{"kind", v.kind}, {"id", v.id}, {"detail", v.detail}});
    cj["commands"] = ordered_json::array();
    for (auto k : net.branches_by_id())
      if (c.plan.switch_cmd[k] != SwitchCommand::NoAction)
        cj["commands"].push_back({{"branch", net.branch(k).id}, {"command", to_string(c.plan.switch_cmd[k])}});
    cj["pickup"] = detail::sorted_ids(net, c.plan.pickup, true);
    cj["search_nodes"] = c.plan.nodes;
    j["cases"].push_back(cj);
  }

  if (with_timings) {
    j["timings_ms"] = ordered_json::object();
    for (const auto& [stage, ms] : r.timings_ms) j["timings_ms"][stage] = ms;
  }
  return j;
}

inline std::string report_text(const Scenario& s, const RunResult& r, const RunOptions& opt, bool with_timings = false) {
  return report_json(s, r, opt, with_timings).dump(2) + "\n";
}

inline std::string report_table(const Scenario& s, const RunResult& r, bool with_timings = false) {
  const auto& net = s.network;
  const auto& inf = r.inference;
  std::ostringstream out;
  out << "Scenario   " << s.description << "\n";
  out << "Digest     " << r.digest << "\n";

  std::vector<std::string> closed, open;
  for (const auto& [k, st] : inf.resolved_branch)
    (st == BranchState::Closed ? closed : open).push_back(net.branch(k).id);
  std::sort(closed.begin(), closed.end());
  std::sort(open.begin(), open.end());
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? std::string("-") : s;
  };
  out << "Closed     " << join(closed) << "\n";
  out << "Open       " << join(open) << "\n";
  out << "Lockout    " << join(detail::sorted_ids(net, inf.lockout_branches, false)) << "\n";
  for (const auto& e : inf.probe_log) {
    out << "Probe      " << net.bus(e.bus).id << " " << e.delta_p << " kW: " << to_string(e.outcome);
    if (e.supplier) out << " (" << dg_label(net, *e.supplier) << " at " << net.bus(*e.supplier).id << ")";
    out << "\n";
  }
  out << "\n";

  constexpr int w_case = 48, w_load = 24;
  out << std::left << std::setw(w_case) << "Processing case" << std::setw(w_load) << "Total picked-up loads"
      << "Tripped DGs\n";
  for (const auto& c : r.cases) {
    std::ostringstream load;
    load << c.served.served.p << "+j" << c.served.served.q;
    if (c.plan.infeasible) load << " (infeasible)";
    std::vector<std::string> trips;
    for (auto x : c.served.tripped_dgs) trips.push_back(dg_label(net, x));
    for (auto x : c.served.protection_trips) trips.push_back(dg_label(net, x) + "*");
    out << std::left << std::setw(w_case) << c.label << std::setw(w_load) << load.str() << join(trips) << "\n";
  }
  std::size_t violations = 0;
  for (const auto& c : r.cases) violations += c.served.violations.size();
  if (violations > 0) {
    out << "\nViolations\n";
    for (const auto& c : r.cases)
      for (const auto& v : c.served.violations) out << "  " << c.key << "  " << v.kind << "  " << v.id << "\n";
  }
  if (with_timings) {
    out << "\nTimings (ms)\n";
    for (const auto& [stage, ms] : r.timings_ms)
      out << "  " << std::left << std::setw(10) << stage << std::fixed << std::setprecision(3) << ms << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

struct OracleSummary {
  std::size_t unknown = 0;
  std::size_t assignments = 0;
  std::size_t forced = 0;
  std::size_t resolved = 0;
  std::vector<std::string> uncontained;  // branch ids
  double ratio = 1.0;
  [[nodiscard]] bool sound() const { return uncontained.empty(); }
};

inline OracleSummary run_oracle(const Scenario& s, bool probes = true) {
  const auto& net = s.network;
  const auto truth = initial_states(net);
  const auto snap = observe(net, truth);
  SimulatedProbeExecutor exec(net, truth);
  InferenceOptions io;
  io.probe_magnitude_default = s.probe_magnitude_default;
  const auto inf = run_algorithm1(net, snap, probes ? &exec : nullptr, io);
  const auto cs = enumerate_consistent(net, snap, truth, inf.probe_log);
  OracleSummary o;
  o.unknown = cs.unknown.size();
  o.assignments = cs.assignments.size();
  o.forced = cs.forced.size();
  o.resolved = inf.resolved_branch.size();
  o.uncontained = detail::sorted_ids(net, uncontained(inf, cs), false);
  o.ratio = completeness_ratio(inf, cs);
  return o;
}

inline nlohmann::ordered_json oracle_json(const Scenario& s, const OracleSummary& o) {
  nlohmann::ordered_json j;
  j["format"] = "mgform-oracle/1";
  j["digest"] = scenario_digest(s);
  j["verdict"] = o.sound() ? "SOUND" : "UNSOUND";
  j["unknown_branches"] = o.unknown;
  j["consistent_assignments"] = o.assignments;
  j["forced"] = o.forced;
  j["resolved"] = o.resolved;
  j["uncontained"] = o.uncontained;
  j["completeness_ratio"] = o.ratio;
  return j;
}

inline std::string oracle_table(const OracleSummary& o) {
  std::ostringstream out;
  out << "Verdict      " << (o.sound() ? "SOUND" : "UNSOUND") << "\n";
  out << "Unknown      " << o.unknown << "\n";
  out << "Consistent   " << o.assignments << "\n";
  out << "Forced       " << o.forced << "\n";
  out << "Resolved     " << o.resolved << "\n";
  out << "Ratio        " << std::fixed << std::setprecision(4) << o.ratio << "\n";
  for (const auto& id : o.uncontained) out << "Uncontained  " << id << "\n";
  return out.str();
}

}  // namespace mgform
