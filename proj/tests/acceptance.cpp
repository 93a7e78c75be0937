// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "mgform/ieee37.hpp"
#include "mgform/report.hpp"
#include "support.hpp"

using namespace mgform;
using namespace testing_support;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

int failures = 0;

void verdict(int n, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << what << "\n";
  if (!ok) ++failures;
}

std::set<std::string> ids_with(const Network& net, const BranchUpdates& u, BranchState s) {
  std::set<std::string> out;
  for (const auto& [k, v] : u)
    if (v == s) out.insert(net.branch(k).id);
  return out;
}

// Tallies for the flow and plan checks shared by several suites.
struct Tally {
  std::size_t flows = 0, flow_bad = 0;
  std::size_t probes = 0, probe_bad = 0;
  std::size_t plans = 0, plan_bad = 0;

  void flow(const Network& net, const ActualStates& st) {
    ++flows;
    if (!conserved(net, st, solve_flows(net, st, energize(net, st)))) ++flow_bad;
  }
  void probe(const ProbeResult& r) {
    ++probes;
    if (!probe_balanced(r)) ++probe_bad;
  }
  void plan(const Network& net, const ServedReport& rep) {
    ++plans;
    if (!rep.violations.empty() || !rep.tripped_dgs.empty() || !rep.protection_trips.empty() ||
        !radial(net, rep.final_states))
      ++plan_bad;
  }
};

// Every electrified bus that allows probes, probed directly on ground truth.
void probe_everywhere(const Scenario& s, const ActualStates& truth, Tally& t) {
  const auto& net = s.network;
  const auto el = energize(net, truth);
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    const auto& b = net.bus(i);
    if (!b.ftu_online || !b.probe_allowed || !el.live(i) || b.load_p <= 0) continue;
    t.probe(apply_probe(net, truth, i, -std::min(b.load_p, s.probe_magnitude_default)));
  }
}

void check_pipeline(const Scenario& s, const Pipeline& p, Tally& t) {
  const auto& net = s.network;
  t.flow(net, p.truth);
  // Logged probes only show DGs with an online FTU; the full answer must balance
  // and agree with every value the operator saw.
  for (const auto& e : p.inf.probe_log) {
    if (!e.result) continue;
    const auto full = apply_probe(net, p.truth, e.bus, e.delta_p);
    t.probe(full);
    for (const auto& [x, v] : e.result->dg_before)
      if (full.dg_before.at(x) != v || full.dg_after.at(x) != e.result->dg_after.at(x)) ++t.probe_bad;
  }
  probe_everywhere(s, p.truth, t);
  const auto plan = scf_restore(net, p.inf, p.snap);
  const auto rep = evaluate(net, p.truth, plan, &p.inf);
  t.plan(net, rep);
  t.flow(net, rep.final_states);
  t.flow(net, evaluate(net, p.truth, noop_restore(net, p.snap, &p.inf), &p.inf).final_states);
  t.flow(net, evaluate(net, p.truth, sts_restore(net, p.snap), &p.inf).final_states);
}

std::string run_cli(const std::string& args) {
  std::string out;
#ifdef MGFORM_CLI
  const std::string cmd = std::string("\"") + MGFORM_CLI + "\" " + args;
  if (FILE* f = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    pclose(f);
  }
#else
  (void)args;
#endif
  return out;
}

}  // namespace

int main() {
  Tally tally;

  // 1. Soundness over generated scenarios.
  {
    const auto t0 = clock_type::now();
    std::size_t wrong = 0, resolved = 0, scenarios = 0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
      const auto s = suite_scenario(seed);
      const auto& net = s.network;
      const auto p = infer(s);
      const auto el = energize(net, p.truth);
      for (const auto& [k, st] : p.inf.resolved_branch) {
        ++resolved;
        if ((st == BranchState::Closed) != conducts(net, p.truth, k)) ++wrong;
      }
      for (const auto& [i, st] : p.inf.resolved_bus) {
        ++resolved;
        if ((st == BusState::Electrified) != el.live(i)) ++wrong;
      }
      ++scenarios;
    }
    const auto secs = seconds_since(t0);
    std::ostringstream msg;
    msg << "inference soundness: " << scenarios << " scenarios, " << resolved << " resolved states, " << wrong
        << " wrong, " << std::fixed << std::setprecision(1) << secs << " s";
    verdict(1, scenarios >= 1000 && wrong == 0 && secs <= 60.0, msg.str());
  }

  // 2. Containment in the oracle's forced set.
  {
    std::size_t used = 0, bad = 0;
    double ratio = 0.0;
    for (std::uint64_t seed = 1; used < 200 && seed <= 5000; ++seed) {
      const auto s = suite_scenario(seed);
      const auto p = infer(s);
      std::size_t unknown = 0;
      for (auto st : p.snap.branch_state) unknown += st == BranchState::Unknown;
      if (unknown > 12) continue;
      ++used;
      const auto cs = enumerate_consistent(s.network, p.snap, p.truth, p.inf.probe_log);
      if (!uncontained(p.inf, cs).empty()) ++bad;
      ratio += completeness_ratio(p.inf, cs);
    }
    std::ostringstream msg;
    msg << "oracle containment: " << used << " scenarios, " << bad << " not contained, mean completeness "
        << std::fixed << std::setprecision(4) << (used ? ratio / static_cast<double>(used) : 0.0);
    verdict(2, used >= 200 && bad == 0, msg.str());
  }

  const auto def = builtin_ieee37();
  const auto& net37 = def.network;

  // 3. Default scenario inference sets.
  {
    const auto p = infer(def);
    const auto closed = ids_with(net37, p.inf.resolved_branch, BranchState::Closed);
    const auto open = ids_with(net37, p.inf.resolved_branch, BranchState::Open);
    const bool ok =
        closed == std::set<std::string>{"702-713", "713-704", "704-720", "720-706", "709-731", "708-709", "708-733"} &&
        open == std::set<std::string>{"705-702", "704-714", "730-709"};
    verdict(3, ok, "default scenario: " + std::to_string(closed.size()) + " closed, " + std::to_string(open.size()) +
                       " open resolved");
    check_pipeline(def, p, tally);
  }

  // 4. Three-case ordering and the pinned values.
  {
    const auto r = run_pipeline(def);
    const auto& noop = r.at("noop").served;
    const auto& scf = r.at("scf").served;
    const auto& sts = r.at("sts").served;
    std::vector<std::string> trips;
    for (auto x : sts.tripped_dgs) trips.push_back(net37.bus(x).id);
    const bool order = scf.served.p > noop.served.p && noop.served.p > sts.served.p;
    const bool trip_ok = trips == std::vector<std::string>{"727", "775"};
    const bool pinned = noop.served == Power{1699, 836} && scf.served == Power{1995, 981} &&
                        sts.served == Power{808, 399};
    std::ostringstream msg;
    msg << "three cases: scf " << scf.served.p << "+j" << scf.served.q << " > noop " << noop.served.p << "+j"
        << noop.served.q << " > sts " << sts.served.p << "+j" << sts.served.q << ", sts trips";
    for (auto x : sts.tripped_dgs) msg << " " << dg_label(net37, x);
    verdict(4, order && trip_ok && pinned, msg.str());
  }

  // 5. Exactness against exhaustive enumeration.
  {
    std::size_t used = 0, mismatch = 0;
    for (std::uint64_t seed = 1; used < 50 && seed <= 20000; ++seed) {
      GenOptions o;
      o.seed = seed;
      o.buses = 10 + static_cast<int>(seed % 11);
      o.dgs = 1 + static_cast<int>(seed % 3);
      const auto s = generate_scenario(o);
      const auto& net = s.network;
      const auto p = infer(s);
      const auto m = build_scf_model(net, p.inf, p.snap);
      if (m.binaries() == 0 || m.binaries() > 14) continue;
      ++used;
      const auto plan = scf_restore(net, p.inf, p.snap);
      const auto ex = exhaustive_scf(net, m);
      if (ex.objective.has_value() == plan.infeasible || (ex.objective && *ex.objective != plan.objective))
        ++mismatch;
      check_pipeline(s, p, tally);
    }
    verdict(5, used == 50 && mismatch == 0,
            "optimizer exactness: " + std::to_string(used) + " instances, " + std::to_string(mismatch) +
                " mismatches");
  }

  // Remaining suite for 6 and 7.
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto s = suite_scenario(seed);
    check_pipeline(s, infer(s), tally);
  }

  verdict(6, tally.flow_bad == 0 && tally.probe_bad == 0 && tally.flows > 0 && tally.probes > 0,
          "conservation: " + std::to_string(tally.flows) + " flow solutions, " + std::to_string(tally.flow_bad) +
              " unbalanced; probe algebra: " + std::to_string(tally.probes) + " probes, " +
              std::to_string(tally.probe_bad) + " off");
  verdict(7, tally.plan_bad == 0 && tally.plans > 0,
          "scf plans: " + std::to_string(tally.plans) + " evaluated, " + std::to_string(tally.plan_bad) +
              " with violations, trips or non-radial islands");

  // 8. Byte-identical reports.
  {
    const RunOptions opt;
    const auto a = report_text(def, run_pipeline(def, opt), opt);
    const auto b = report_text(def, run_pipeline(def, opt), opt);
    bool ok = a == b;
    std::string how = "in-process";
#ifdef MGFORM_CLI
    const auto c1 = run_cli("run default --format structured");
    const auto c2 = run_cli("run default --format structured");
    ok = ok && !c1.empty() && c1 == c2 && c1 == a;
    how += " and cli";
#endif
    verdict(8, ok, "report determinism (" + how + "), " + std::to_string(a.size()) + " bytes");
  }

  return failures == 0 ? 0 : 1;
}
