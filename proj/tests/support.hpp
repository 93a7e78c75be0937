#pragma once

// Shared helpers for the test suites: small-network builders and the
// brute-force reference computations the library is checked against.

#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mgform/consistency_oracle.hpp"
#include "mgform/inference.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/pathindex.hpp"
#include "mgform/restoration.hpp"
#include "mgform/scenario_gen.hpp"
#include "mgform/truthsim.hpp"

namespace testing_support {

using namespace mgform;

inline Bus load_bus(const std::string& id, std::int64_t p, std::int64_t q = 0, bool online = true,
                    bool probe = false) {
  Bus b;
  b.id = id;
  b.load_p = p;
  b.load_q = q;
  b.ftu_online = online;
  b.probe_allowed = probe;
  return b;
}

inline Bus dg_bus(const std::string& id, std::int64_t cap_p, std::int64_t cap_q = 1000, bool online = true) {
  Bus b = load_bus(id, 0, 0, online);
  b.dg = DgRating{cap_p, cap_q};
  return b;
}

inline Branch line(const std::string& id, const std::string& from, const std::string& to, bool closed,
                   const std::string& ctrl = "", bool switchable = true) {
  Branch br;
  br.id = id;
  br.from = from;
  br.to = to;
  br.initial_closed = closed;
  br.ctrl_bus = ctrl.empty() ? from : ctrl;
  br.switchable = switchable;
  return br;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string source_path(const std::string& rel) { return std::string(MGFORM_SOURCE_DIR) + "/" + rel; }

// Scenario as the acceptance suites draw them: 15-40 buses, 1-3 DGs.
inline Scenario suite_scenario(std::uint64_t seed) {
  GenOptions o;
  o.seed = seed;
  o.buses = 15 + static_cast<int>(seed % 26);
  o.dgs = 1 + static_cast<int>(seed % 3);
  return generate_scenario(o);
}

// Net injection through branches plus local generation equals served load at every bus,
// and nothing flows through a branch that does not conduct.
inline bool conserved(const Network& net, const ActualStates& st, const FlowSolution& fs) {
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (!conducts(net, st, k) && !fs.into_to[k].is_zero()) return false;
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    Power in = fs.dg_output[i];
    for (auto k : net.incident(i)) in += fs.into(net, k, i);
    if (in != fs.served[i]) return false;
  }
  return true;
}

// Only the supplying DG moves, and by exactly the probed amount.
inline bool probe_balanced(const ProbeResult& r) {
  std::int64_t sum = 0;
  int moved = 0;
  for (const auto& [x, before] : r.dg_before) {
    const auto d = before - r.dg_after.at(x);
    sum += d;
    if (d != 0) ++moved;
  }
  return sum == -r.delta_p && moved <= 1;
}

// Simple paths bus -> dg over the given edges, by plain recursion over buses.
inline std::size_t count_paths(const Network& net, const std::vector<char>& edge_on, BusIndex at, BusIndex dg,
                               std::vector<char>& visited) {
  if (at == dg) return 1;
  std::size_t n = 0;
  visited[at] = 1;
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (!edge_on[k]) continue;
    BusIndex next;
    if (net.from(k) == at)
      next = net.to(k);
    else if (net.to(k) == at)
      next = net.from(k);
    else
      continue;
    if (!visited[next]) n += count_paths(net, edge_on, next, dg, visited);
  }
  visited[at] = 0;
  return n;
}

inline std::size_t brute_count(const Network& net, const std::vector<BranchState>& known, bool unknown_closed,
                               BusIndex bus) {
  std::vector<char> edge_on(net.branch_count(), 0);
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    edge_on[k] = !net.branch(k).faulted &&
                 (known[k] == BranchState::Closed || (unknown_closed && known[k] == BranchState::Unknown));
  std::size_t total = 0;
  for (auto x : net.dg_buses()) {
    std::vector<char> visited(net.bus_count(), 0);
    total += count_paths(net, edge_on, bus, x, visited);
  }
  return total;
}

// Exhaustive restoration optimum over every free switch position and every
// pickup choice. Returns nullopt when no configuration is feasible.
struct Exhaustive {
  std::optional<double> objective;
  std::uint64_t configurations = 0;
};

inline Exhaustive exhaustive_scf(const Network& net, const ScfModel& m) {
  Exhaustive out;
  const auto nf = m.free_switches.size();
  const auto np = m.pickup_vars.size();
  const auto n = net.bus_count();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t sw = 0; sw < (std::uint64_t{1} << nf); ++sw) {
    std::vector<bool> closed(net.branch_count(), false);
    for (BranchIndex k = 0; k < net.branch_count(); ++k) closed[k] = m.role[k] == BranchRole::FixedClosed;
    for (std::size_t b = 0; b < nf; ++b) closed[m.free_switches[b]] = (sw >> b) & 1U;

    // Components of the area outside the frozen part.
    std::vector<std::size_t> comp(n, n);
    std::vector<std::size_t> edges, nodes;
    std::size_t nc = 0;
    for (BusIndex s = 0; s < n; ++s) {
      if (m.frozen[s] || comp[s] != n) continue;
      std::vector<BusIndex> stack{s};
      comp[s] = nc;
      nodes.push_back(0);
      edges.push_back(0);
      while (!stack.empty()) {
        auto i = stack.back();
        stack.pop_back();
        ++nodes[nc];
        for (BranchIndex k = 0; k < net.branch_count(); ++k) {
          if (!closed[k] || net.branch(k).faulted) continue;
          if (net.from(k) != i && net.to(k) != i) continue;
          auto j = net.from(k) == i ? net.to(k) : net.from(k);
          if (comp[j] == n) {
            comp[j] = nc;
            stack.push_back(j);
          }
        }
      }
      ++nc;
    }
    for (BranchIndex k = 0; k < net.branch_count(); ++k)
      if (closed[k] && !net.branch(k).faulted && !m.frozen[net.from(k)]) ++edges[comp[net.from(k)]];

    std::vector<int> dgs(nc, 0);
    std::vector<std::optional<BusIndex>> dg_of(nc);
    std::vector<bool> bad(nc, false);
    for (BusIndex i = 0; i < n; ++i) {
      if (m.frozen[i]) continue;
      if (net.bus(i).is_dg()) {
        ++dgs[comp[i]];
        dg_of[comp[i]] = i;
      }
    }
    for (BusIndex i = 0; i < n; ++i)
      if (!m.frozen[i] && m.blocked[i]) bad[comp[i]] = true;
    bool ok = true;
    for (std::size_t c = 0; c < nc && ok; ++c) {
      if (dgs[c] == 0) continue;
      if (dgs[c] > 1 || edges[c] >= nodes[c] || bad[c]) ok = false;
    }
    if (!ok) continue;

    std::vector<Power> fixed_load(nc);
    std::vector<double> fixed_value(nc, 0.0);
    for (BusIndex i = 0; i < n; ++i) {
      if (m.frozen[i] || !m.forced[i]) continue;
      fixed_load[comp[i]] += net.bus(i).load();
      fixed_value[comp[i]] += net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
    }

    for (std::uint64_t pk = 0; pk < (std::uint64_t{1} << np); ++pk) {
      ++out.configurations;
      auto load = fixed_load;
      auto value = fixed_value;
      for (std::size_t b = 0; b < np; ++b) {
        if (!((pk >> b) & 1U)) continue;
        auto i = m.pickup_vars[b];
        load[comp[i]] += net.bus(i).load();
        value[comp[i]] += net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
      }
      double total = m.frozen_value;
      bool fits = true;
      for (std::size_t c = 0; c < nc && fits; ++c) {
        if (!dg_of[c]) continue;
        const auto& r = *net.bus(*dg_of[c]).dg;
        if (load[c].p > r.cap_p || load[c].q > r.cap_q) fits = false;
        total += value[c];
      }
      if (fits && total > best) best = total;
    }
  }
  if (best > -std::numeric_limits<double>::infinity()) out.objective = best;
  return out;
}

// Every energized island after evaluation is a tree with exactly one DG.
inline bool radial(const Network& net, const ActualStates& st) {
  auto scan = scan_components(net, st);
  for (std::size_t c = 0; c < scan.dgs.size(); ++c)
    if (!scan.dgs[c].empty() && (scan.cyclic[c] || scan.dgs[c].size() != 1)) return false;
  return true;
}

struct Pipeline {
  ActualStates truth;
  TelemetrySnapshot snap;
  InferenceResult inf;
};

inline Pipeline infer(const Scenario& s, bool probes = true) {
  Pipeline p;
  p.truth = initial_states(s.network);
  p.snap = observe(s.network, p.truth);
  SimulatedProbeExecutor exec(s.network, p.truth);
  InferenceOptions io;
  io.probe_magnitude_default = s.probe_magnitude_default;
  p.inf = run_algorithm1(s.network, p.snap, probes ? &exec : nullptr, io);
  return p;
}

}  // namespace testing_support
