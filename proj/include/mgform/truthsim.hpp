#pragma once

// Ground-truth world model: which buses are live, the lossless radial flows
// they carry, what the operation center can see of it, load probes and DG
// overload trips.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/netmodel.hpp"

namespace mgform {

struct ActualStates {
  std::vector<bool> closed;   // per branch; faulted branches count as open regardless
  std::vector<bool> shed;     // per bus; load disconnected
  std::vector<bool> tripped;  // per bus; DG has exited
  friend bool operator==(const ActualStates&, const ActualStates&) = default;
};

inline ActualStates initial_states(const Network& net) {
  ActualStates st;
  st.closed.resize(net.branch_count());
  for (BranchIndex k = 0; k < net.branch_count(); ++k) st.closed[k] = net.branch(k).initial_closed;
  st.shed.assign(net.bus_count(), false);
  st.tripped.assign(net.bus_count(), false);
  return st;
}

inline bool conducts(const Network& net, const ActualStates& st, BranchIndex k) {
  return st.closed[k] && !net.branch(k).faulted;
}

inline bool dg_working(const Network& net, const ActualStates& st, BusIndex i) {
  return net.bus(i).is_dg() && !st.tripped[i];
}

struct Electrification {
  std::vector<std::size_t> component;  // per bus
  std::vector<bool> energized;         // per component
  std::vector<std::optional<BusIndex>> root_dg;

  [[nodiscard]] bool live(BusIndex i) const { return energized[component[i]]; }
};

// Component structure without the radial/single-DG checks; energize() adds them.
struct ComponentScan {
  Electrification el;
  std::vector<bool> cyclic;                  // per component
  std::vector<std::vector<BusIndex>> dgs;    // working DGs per component
};

inline ComponentScan scan_components(const Network& net, const ActualStates& st) {
  ComponentScan out;
  auto& comp = out.el.component;
  const std::size_t none = net.bus_count();
  comp.assign(net.bus_count(), none);
  std::size_t count = 0;
  std::vector<BusIndex> stack;
  for (auto start : net.buses_by_id()) {
    if (comp[start] != none) continue;
    const auto c = count++;
    std::size_t nodes = 0, edges = 0;
    std::vector<BusIndex> dgs;
    comp[start] = c;
    stack.push_back(start);
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      ++nodes;
      if (dg_working(net, st, i)) dgs.push_back(i);
      for (auto k : net.incident(i)) {
        if (!conducts(net, st, k)) continue;
        ++edges;
        auto j = net.other_end(k, i);
        if (comp[j] == none) {
          comp[j] = c;
          stack.push_back(j);
        }
      }
    }
    std::sort(dgs.begin(), dgs.end(), [&](auto a, auto b) { return net.bus(a).id < net.bus(b).id; });
    out.cyclic.push_back(edges / 2 >= nodes);
    out.el.energized.push_back(!dgs.empty());
    out.el.root_dg.push_back(dgs.size() == 1 ? std::optional<BusIndex>(dgs.front()) : std::nullopt);
    out.dgs.push_back(std::move(dgs));
  }
  return out;
}

inline Electrification energize(const Network& net, const ActualStates& st) {
  auto scan = scan_components(net, st);
  for (std::size_t c = 0; c < scan.dgs.size(); ++c) {
    if (scan.dgs[c].empty()) continue;
    if (scan.cyclic[c])
      throw CyclicEnergizedComponent("energized component of DG " + net.bus(scan.dgs[c].front()).id +
                                     " contains a cycle");
    if (scan.dgs[c].size() > 1)
      throw MultiDgComponent("DGs " + net.bus(scan.dgs[c][0]).id + " and " + net.bus(scan.dgs[c][1]).id +
                             " share a component");
  }
  return std::move(scan.el);
}

struct FlowSolution {
  // Injection into the `to` bus of each branch; the `from` end sees the negation.
  std::vector<Power> into_to;
  std::vector<Power> dg_output;  // per bus, zero for non-DG buses
  std::vector<Power> served;     // per bus

  [[nodiscard]] Power into(const Network& net, BranchIndex k, BusIndex end) const {
    return end == net.to(k) ? into_to[k] : -into_to[k];
  }
  [[nodiscard]] Power total_served() const {
    Power t;
    for (const auto& s : served) t += s;
    return t;
  }
};

inline std::vector<Power> served_loads(const Network& net, const ActualStates& st, const Electrification& el) {
  std::vector<Power> served(net.bus_count());
  for (BusIndex i = 0; i < net.bus_count(); ++i)
    if (el.live(i) && !st.shed[i]) served[i] = net.bus(i).load();
  return served;
}

// Tree aggregation from each component's DG; `served` is the per-bus demand.
inline FlowSolution solve_flows_with(const Network& net, const ActualStates& st, const Electrification& el,
                                     std::vector<Power> served) {
  FlowSolution fs;
  fs.into_to.assign(net.branch_count(), {});
  fs.dg_output.assign(net.bus_count(), {});
  fs.served = std::move(served);

  std::vector<bool> seen(net.bus_count(), false);
  std::vector<BusIndex> order;
  std::vector<std::optional<BranchIndex>> parent_branch(net.bus_count());
  for (std::size_t c = 0; c < el.root_dg.size(); ++c) {
    if (!el.energized[c] || !el.root_dg[c]) continue;
    const auto root = *el.root_dg[c];
    order.clear();
    order.push_back(root);
    seen[root] = true;
    for (std::size_t h = 0; h < order.size(); ++h) {
      auto i = order[h];
      for (auto k : net.incident(i)) {
        if (!conducts(net, st, k)) continue;
        auto j = net.other_end(k, i);
        if (seen[j]) continue;
        seen[j] = true;
        parent_branch[j] = k;
        order.push_back(j);
      }
    }
    std::vector<Power> subtree(net.bus_count());
    Power total;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto i = *it;
      subtree[i] += fs.served[i];
      total += fs.served[i];
      if (!parent_branch[i]) continue;
      auto k = *parent_branch[i];
      fs.into_to[k] = (i == net.to(k)) ? subtree[i] : -subtree[i];
      subtree[net.other_end(k, i)] += subtree[i];
    }
    fs.dg_output[root] = total;
  }
  return fs;
}

inline FlowSolution solve_flows(const Network& net, const ActualStates& st, const Electrification& el) {
  return solve_flows_with(net, st, el, served_loads(net, st, el));
}

enum class BusState { Electrified, Unpowered, Unknown };
enum class BranchState { Closed, Open, Unknown };

inline const char* to_string(BusState s) {
  switch (s) {
    case BusState::Electrified: return "Electrified";
    case BusState::Unpowered: return "Unpowered";
    default: return "Unknown";
  }
}
inline const char* to_string(BranchState s) {
  switch (s) {
    case BranchState::Closed: return "Closed";
    case BranchState::Open: return "Open";
    default: return "Unknown";
  }
}

struct TelemetrySnapshot {
  std::vector<BusState> bus_state;
  std::vector<BranchState> branch_state;
  std::map<std::pair<BranchIndex, BusIndex>, Power> flows;  // (branch, observable end) -> injection
  std::map<BusIndex, Power> dg_output;                       // observable DG buses only
  friend bool operator==(const TelemetrySnapshot&, const TelemetrySnapshot&) = default;

  [[nodiscard]] std::optional<Power> flow(BranchIndex k, BusIndex end) const {
    auto it = flows.find({k, end});
    if (it == flows.end()) return std::nullopt;
    return it->second;
  }
};

inline TelemetrySnapshot observe(const Network& net, const ActualStates& st, const Electrification& el,
                                 const FlowSolution& flows) {
  TelemetrySnapshot snap;
  snap.bus_state.resize(net.bus_count());
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    if (!net.observable(i))
      snap.bus_state[i] = BusState::Unknown;
    else
      snap.bus_state[i] = el.live(i) ? BusState::Electrified : BusState::Unpowered;
  }
  snap.branch_state.resize(net.branch_count());
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (!net.branch_observable(k))
      snap.branch_state[k] = BranchState::Unknown;
    else
      snap.branch_state[k] = conducts(net, st, k) ? BranchState::Closed : BranchState::Open;
    for (auto end : {net.from(k), net.to(k)})
      if (net.observable(end)) snap.flows[{k, end}] = flows.into(net, k, end);
  }
  for (auto x : net.dg_buses())
    if (net.observable(x)) snap.dg_output[x] = flows.dg_output[x];
  return snap;
}

inline TelemetrySnapshot observe(const Network& net, const ActualStates& st) {
  auto el = energize(net, st);
  return observe(net, st, el, solve_flows(net, st, el));
}

struct ProbeResult {
  BusIndex bus = 0;
  std::int64_t delta_p = 0;  // negative: load cut off, positive: picked up
  std::map<BusIndex, std::int64_t> dg_before;
  std::map<BusIndex, std::int64_t> dg_after;
  friend bool operator==(const ProbeResult&, const ProbeResult&) = default;
};

// Transient load change at `bus`; the state itself is not modified.
inline ProbeResult apply_probe(const Network& net, const ActualStates& st, BusIndex bus, std::int64_t delta_p) {
  const auto& b = net.bus(bus);
  if (!b.ftu_online) throw ProbeNotAllowed("bus " + b.id + " is not observable");
  if (!b.probe_allowed) throw ProbeNotAllowed("bus " + b.id + " does not allow disturbance operations");
  auto el = energize(net, st);
  if (!el.live(bus)) throw BusNotElectrified("bus " + b.id + " is not electrified");
  if (delta_p == 0) throw ProbeNotAllowed("zero probe at bus " + b.id);
  if (delta_p < 0 && (st.shed[bus] || -delta_p > b.load_p))
    throw ProbeNotAllowed("cut-off exceeds the served load at bus " + b.id);
  if (delta_p > 0 && (!st.shed[bus] || delta_p > b.load_p))
    throw ProbeNotAllowed("pick-up needs shed load at bus " + b.id);

  auto served = served_loads(net, st, el);
  auto before = solve_flows_with(net, st, el, served);
  served[bus].p += delta_p;
  auto after = solve_flows_with(net, st, el, std::move(served));

  ProbeResult r;
  r.bus = bus;
  r.delta_p = delta_p;
  for (auto x : net.dg_buses()) {
    r.dg_before[x] = before.dg_output[x].p;
    r.dg_after[x] = after.dg_output[x].p;
  }
  return r;
}

struct TripResult {
  ActualStates states;
  std::vector<BusIndex> tripped;  // in trip order
};

// Overloaded DGs (served active load strictly above cap_p) exit until none remain.
inline TripResult trip_overloads(const Network& net, ActualStates st) {
  TripResult out;
  for (;;) {
    auto el = energize(net, st);
    auto fs = solve_flows(net, st, el);
    std::vector<BusIndex> over;
    for (auto x : net.dg_buses())
      if (dg_working(net, st, x) && fs.dg_output[x].p > net.bus(x).dg->cap_p) over.push_back(x);
    if (over.empty()) break;
    for (auto x : over) {
      st.tripped[x] = true;
      out.tripped.push_back(x);
    }
  }
  out.states = std::move(st);
  return out;
}

// Simulated operation-center view of the system: answers probes from ground truth,
// reporting only the DG outputs whose FTU is online.
inline ProbeResult observed_probe(const Network& net, const ActualStates& st, BusIndex bus, std::int64_t delta_p) {
  auto r = apply_probe(net, st, bus, delta_p);
  for (auto x : net.dg_buses()) {
    if (net.observable(x)) continue;
    r.dg_before.erase(x);
    r.dg_after.erase(x);
  }
  return r;
}

}  // namespace mgform
