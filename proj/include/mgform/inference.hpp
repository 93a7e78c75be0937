#pragma once

// Unobservable-state inference. Resolves Unknown branch and bus states from
// partial FTU telemetry with three rules (flow, unique supply path, load
// probes), then derives the control lockouts that restoration must respect.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/pathindex.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

// Synchronous probe channel to the field (or to a simulator). Implementations
// throw ProbeRefused to decline a request.
class ProbeExecutor {
 public:
  virtual ~ProbeExecutor() = default;
  virtual ProbeResult request(BusIndex bus, std::int64_t delta_p) = 0;
};

// Answers probes from a ground-truth state, showing only what the operation center sees.
class SimulatedProbeExecutor final : public ProbeExecutor {
 public:
  SimulatedProbeExecutor(const Network& net, ActualStates truth) : net_(net), truth_(std::move(truth)) {}

  ProbeResult request(BusIndex bus, std::int64_t delta_p) override {
    ++requests_;
    try {
      return observed_probe(net_, truth_, bus, delta_p);
    } catch (const ProbeNotAllowed& e) {
      throw ProbeRefused(e.what());
    } catch (const BusNotElectrified& e) {
      throw ProbeRefused(e.what());
    }
  }

  [[nodiscard]] std::size_t requests() const { return requests_; }

 private:
  const Network& net_;
  ActualStates truth_;
  std::size_t requests_ = 0;
};

enum class ProbeOutcome { Resolved, Membership, NoMatch, Refused };

inline const char* to_string(ProbeOutcome o) {
  switch (o) {
    case ProbeOutcome::Resolved: return "resolved";
    case ProbeOutcome::Membership: return "membership";
    case ProbeOutcome::NoMatch: return "no-match";
    default: return "refused";
  }
}

struct ProbeLogEntry {
  BusIndex bus = 0;
  std::int64_t delta_p = 0;
  ProbeOutcome outcome = ProbeOutcome::NoMatch;
  std::optional<BusIndex> supplier;
  std::optional<ProbeResult> result;
  std::string note;
  friend bool operator==(const ProbeLogEntry&, const ProbeLogEntry&) = default;
};

using BranchUpdates = std::map<BranchIndex, BranchState>;

struct InferenceResult {
  BranchUpdates resolved_branch;             // only ids Unknown in the snapshot
  std::map<BusIndex, BusState> resolved_bus;
  std::map<BusIndex, BusIndex> membership;   // bus -> supplying DG, path not unique
  std::set<BranchIndex> lockout_branches;
  std::set<BusIndex> no_energize_buses;
  std::vector<ProbeLogEntry> probe_log;
  std::size_t iterations = 0;
  friend bool operator==(const InferenceResult&, const InferenceResult&) = default;
};

struct InferenceOptions {
  std::int64_t probe_magnitude_default = 100;
  std::size_t path_cap = kDefaultPathCap;
  bool single_pass = false;
};

// Snapshot branch states with the resolved entries applied.
inline std::vector<BranchState> current_states(const TelemetrySnapshot& snap, const BranchUpdates& resolved) {
  auto known = snap.branch_state;
  for (const auto& [k, s] : resolved) known[k] = s;
  return known;
}

// Rule 1. Any nonzero flow at an observable end means the branch is closed.
// Zero flow at every observable end means open, but only when one of those
// ends is electrified: a closed branch inside a dead area carries no flow either.
inline BranchUpdates rule_flow(const Network& net, const TelemetrySnapshot& snap) {
  BranchUpdates out;
  for (auto k : net.branches_by_id()) {
    if (snap.branch_state[k] != BranchState::Unknown || net.branch(k).faulted) continue;
    bool any_end = false, any_flow = false, live_end = false;
    for (auto end : {net.from(k), net.to(k)}) {
      auto f = snap.flow(k, end);
      if (!f) continue;
      any_end = true;
      if (f->abs_sum() != 0) any_flow = true;
      if (snap.bus_state[end] == BusState::Electrified) live_end = true;
    }
    if (!any_end) continue;
    if (any_flow)
      out[k] = BranchState::Closed;
    else if (live_end)
      out[k] = BranchState::Open;
  }
  return out;
}

// Rule 2. An observable electrified bus with no supply path over known-closed
// branches and exactly one once Unknown branches are assumed closed must be fed
// through that path.
inline BranchUpdates rule_unique_path(const Network& net, const TelemetrySnapshot& snap,
                                      const std::vector<BranchState>& known, const PathIndex& idx_open,
                                      const PathIndex& idx_closed) {
  BranchUpdates out;
  for (auto i : net.buses_by_id()) {
    if (snap.bus_state[i] != BusState::Electrified) continue;
    if (idx_open.count[i] != 0 || idx_closed.count[i] != 1) continue;
    for (auto x : net.dg_buses()) {
      for (const auto& path : idx_closed.paths_to(i, x))
        for (auto k : path)
          if (known[k] == BranchState::Unknown) out[k] = BranchState::Closed;
    }
  }
  return out;
}

inline bool probe_candidate(const Network& net, const TelemetrySnapshot& snap, const PathIndex& idx_open,
                            const PathIndex& idx_closed, BusIndex i) {
  const auto& b = net.bus(i);
  return snap.bus_state[i] == BusState::Electrified && b.probe_allowed && b.load_p > 0 &&
         idx_closed.count[i] >= 2 && idx_open.count[i] == 0;
}

// DG whose output moved by exactly the probed amount; outputs are integers
// so the rounding guard reduces to an exact comparison.
inline std::optional<BusIndex> identify_supplier(const ProbeResult& r) {
  for (const auto& [x, before] : r.dg_before) {
    auto after = r.dg_after.find(x);
    if (after == r.dg_after.end()) continue;
    const auto cut = -r.delta_p;
    if (before - after->second - cut == 0) return x;
  }
  return std::nullopt;
}

struct ProbeStep {
  BranchUpdates updates;
  std::map<BusIndex, BusIndex> supplier;  // every identification made so far
  std::vector<ProbeLogEntry> log;
};

// Rule 3. Probes each eligible bus once (canonical id order); previously
// identified suppliers are re-checked against the current index.
inline ProbeStep plan_and_apply_probes(const Network& net, const TelemetrySnapshot& snap,
                                       const std::vector<BranchState>& known, const PathIndex& idx_open,
                                       const PathIndex& idx_closed, ProbeExecutor& exec,
                                       std::int64_t magnitude_default, const std::set<BusIndex>& already_probed,
                                       std::map<BusIndex, BusIndex> supplier) {
  ProbeStep step;
  for (auto i : net.buses_by_id()) {
    if (already_probed.contains(i) || !probe_candidate(net, snap, idx_open, idx_closed, i)) continue;
    ProbeLogEntry entry;
    entry.bus = i;
    entry.delta_p = -std::min(net.bus(i).load_p, magnitude_default);
    try {
      entry.result = exec.request(i, entry.delta_p);
    } catch (const ProbeRefused& e) {
      entry.outcome = ProbeOutcome::Refused;
      entry.note = e.what();
      step.log.push_back(std::move(entry));
      continue;
    }
    entry.supplier = identify_supplier(*entry.result);
    if (!entry.supplier) {
      entry.outcome = ProbeOutcome::NoMatch;
    } else {
      supplier[i] = *entry.supplier;
      entry.outcome = idx_closed.pair_count(i, *entry.supplier) == 1 ? ProbeOutcome::Resolved : ProbeOutcome::Membership;
    }
    step.log.push_back(std::move(entry));
  }
  for (const auto& [i, x] : supplier) {
    if (idx_closed.pair_count(i, x) != 1) continue;
    for (auto k : idx_closed.paths_to(i, x).front())
      if (known[k] == BranchState::Unknown) step.updates[k] = BranchState::Closed;
  }
  step.supplier = std::move(supplier);
  return step;
}

// Bus states implied by the (known + resolved) branch states.
inline std::map<BusIndex, BusState> resolve_buses(const Network& net, const TelemetrySnapshot& snap,
                                                  const std::vector<BranchState>& known) {
  const auto n = net.bus_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (!net.branch(k).faulted && known[k] == BranchState::Closed) parent[find(net.from(k))] = find(net.to(k));

  std::vector<char> live(n, 0), dead(n, 0), has_dg(n, 0), leaks(n, 0);
  for (BusIndex i = 0; i < n; ++i) {
    auto r = find(i);
    if (snap.bus_state[i] == BusState::Electrified) live[r] = 1;
    if (snap.bus_state[i] == BusState::Unpowered) dead[r] = 1;
    if (net.bus(i).is_dg()) has_dg[r] = 1;
  }
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (net.branch(k).faulted || known[k] != BranchState::Unknown) continue;
    auto a = find(net.from(k)), b = find(net.to(k));
    if (a != b) leaks[a] = leaks[b] = 1;
  }

  std::map<BusIndex, BusState> out;
  for (auto i : net.buses_by_id()) {
    if (snap.bus_state[i] != BusState::Unknown) continue;
    auto r = find(i);
    if (live[r])
      out[i] = BusState::Electrified;
    else if (dead[r] || (!leaks[r] && !has_dg[r]))
      out[i] = BusState::Unpowered;
  }
  return out;
}

struct LockoutSets {
  std::set<BranchIndex> lockout;
  std::set<BusIndex> no_energize;
};

// Branches still Unknown get no control; so do the branches around an
// observable electrified bus with no verified supply path. Unobservable buses
// not known to be electrified must stay disconnected.
inline LockoutSets lockout(const Network& net, const TelemetrySnapshot& snap, const std::vector<BranchState>& known,
                           const std::map<BusIndex, BusState>& resolved_bus, const PathIndex& idx_final) {
  LockoutSets out;
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (known[k] == BranchState::Unknown) out.lockout.insert(k);
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    if (snap.bus_state[i] == BusState::Electrified && idx_final.count[i] == 0)
      for (auto k : net.incident(i)) out.lockout.insert(k);
    if (snap.bus_state[i] == BusState::Unknown) {
      auto it = resolved_bus.find(i);
      if (it == resolved_bus.end() || it->second != BusState::Electrified) out.no_energize.insert(i);
    }
  }
  return out;
}

inline InferenceResult run_algorithm1(const Network& net, const TelemetrySnapshot& snap, ProbeExecutor* exec,
                                      const InferenceOptions& opt = {}) {
  InferenceResult res;
  res.resolved_branch = rule_flow(net, snap);

  std::set<BusIndex> probed;
  std::map<BusIndex, BusIndex> supplier;
  for (;;) {
    ++res.iterations;
    auto known = current_states(snap, res.resolved_branch);
    auto idx_open = floyd_process(net, known, Assumption::UnknownOpen, opt.path_cap);
    auto idx_closed = floyd_process(net, known, Assumption::UnknownClosed, opt.path_cap);

    std::size_t before = res.resolved_branch.size();
    for (const auto& [k, s] : rule_unique_path(net, snap, known, idx_open, idx_closed)) res.resolved_branch[k] = s;

    if (exec) {
      auto step = plan_and_apply_probes(net, snap, known, idx_open, idx_closed, *exec, opt.probe_magnitude_default,
                                        probed, std::move(supplier));
      for (const auto& e : step.log) probed.insert(e.bus);
      for (auto& e : step.log) res.probe_log.push_back(std::move(e));
      for (const auto& [k, s] : step.updates) res.resolved_branch[k] = s;
      supplier = std::move(step.supplier);
    }
    if (opt.single_pass || res.resolved_branch.size() == before) break;
  }

  auto known = current_states(snap, res.resolved_branch);
  auto idx_final = floyd_process(net, known, Assumption::UnknownOpen, opt.path_cap);
  auto idx_closed = floyd_process(net, known, Assumption::UnknownClosed, opt.path_cap);
  for (const auto& [i, x] : supplier)
    if (idx_closed.pair_count(i, x) != 1) res.membership[i] = x;

  res.resolved_bus = resolve_buses(net, snap, known);
  auto sets = lockout(net, snap, known, res.resolved_bus, idx_final);
  res.lockout_branches = std::move(sets.lockout);
  res.no_energize_buses = std::move(sets.no_energize);
  return res;
}

}  // namespace mgform
