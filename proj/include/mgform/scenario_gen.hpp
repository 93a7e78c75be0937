#pragma once

// Random feeder scenarios: a radial tree with a few tie switches, DGs, faults
// and FTU outages. Every load is at least 1 kW, so each live bus draws power.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

struct GenOptions {
  std::uint64_t seed = 1;
  int buses = 20;
  int dgs = 2;
  // Probability that a bus FTU is offline; negative means draw it per scenario.
  double outage_rate = -1.0;
};

namespace detail {

// Fixed arithmetic on top of mt19937_64 so output does not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
  }
  bool chance(double p) { return static_cast<double>(eng_() >> 11) * 0x1.0p-53 < p; }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

inline std::string padded(const char* prefix, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%s%02d", prefix, n);
  return buf;
}

// Components over closed, non-faulted branches of raw records.
inline std::vector<int> raw_components(int n, const std::vector<Branch>& branches,
                                       const std::vector<std::pair<int, int>>& ends) {
  std::vector<int> comp(n, -1);
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (std::size_t k = 0; k < branches.size(); ++k) {
    if (!branches[k].initial_closed || branches[k].faulted) continue;
    adj[ends[k].first].push_back({ends[k].second, static_cast<int>(k)});
    adj[ends[k].second].push_back({ends[k].first, static_cast<int>(k)});
  }
  int c = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (auto [j, k] : adj[i])
        if (comp[j] < 0) {
          comp[j] = c;
          stack.push_back(j);
        }
    }
    ++c;
  }
  return comp;
}

// Branch indices on the closed path a -> b (empty if none).
inline std::vector<int> raw_path(int n, const std::vector<Branch>& branches,
                                 const std::vector<std::pair<int, int>>& ends, int a, int b) {
  std::vector<int> via(n, -2);
  std::vector<int> queue{a};
  via[a] = -1;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int i = queue[h];
    for (std::size_t k = 0; k < branches.size(); ++k) {
      if (!branches[k].initial_closed || branches[k].faulted) continue;
      int j = ends[k].first == i ? ends[k].second : (ends[k].second == i ? ends[k].first : -1);
      if (j < 0 || via[j] != -2) continue;
      via[j] = static_cast<int>(k);
      queue.push_back(j);
    }
  }
  std::vector<int> path;
  if (via[b] == -2) return path;
  for (int i = b; i != a;) {
    int k = via[i];
    path.push_back(k);
    i = ends[k].first == i ? ends[k].second : ends[k].first;
  }
  return path;
}

inline bool raw_legal(int n, const std::vector<Branch>& branches, const std::vector<std::pair<int, int>>& ends,
                      const std::vector<bool>& is_dg) {
  auto comp = raw_components(n, branches, ends);
  int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<int> nodes(ncomp, 0), edges(ncomp, 0), dgs(ncomp, 0);
  for (int i = 0; i < n; ++i) {
    ++nodes[comp[i]];
    if (is_dg[i]) ++dgs[comp[i]];
  }
  for (std::size_t k = 0; k < branches.size(); ++k)
    if (branches[k].initial_closed && !branches[k].faulted) ++edges[comp[ends[k].first]];
  for (int c = 0; c < ncomp; ++c)
    if (dgs[c] > 0 && (dgs[c] > 1 || edges[c] >= nodes[c])) return false;
  return true;
}

}  // namespace detail

inline Scenario generate_scenario(const GenOptions& opt) {
  if (opt.buses < 10 || opt.buses > 60) throw ValidationError("bus count must be within 10..60");
  if (opt.dgs < 1 || opt.dgs > 4) throw ValidationError("DG count must be within 1..4");
  detail::Rng rng(opt.seed);
  const int n = opt.buses;

  std::vector<Bus> buses(n);
  for (int i = 0; i < n; ++i) {
    auto& b = buses[i];
    b.id = detail::padded("b", i + 1);
    b.load_p = rng.uniform(1, 200);
    b.load_q = rng.uniform(0, b.load_p);
    b.probe_allowed = rng.chance(0.7);
  }

  std::vector<Branch> branches;
  std::vector<std::pair<int, int>> ends;
  std::set<std::pair<int, int>> linked;
  for (int i = 1; i < n; ++i) {
    int parent = static_cast<int>(rng.uniform(0, i - 1));
    Branch br;
    br.id = detail::padded("L", i);
    br.from = buses[parent].id;
    br.to = buses[i].id;
    br.switchable = rng.chance(0.6);
    br.initial_closed = true;
    branches.push_back(br);
    ends.push_back({parent, i});
    linked.insert({std::min(parent, i), std::max(parent, i)});
  }
  const int ties = static_cast<int>(rng.uniform(1, std::max(1, n / 8)));
  for (int t = 0, attempts = 0; t < ties && attempts < 100; ++attempts) {
    int a = static_cast<int>(rng.uniform(0, n - 1)), b = static_cast<int>(rng.uniform(0, n - 1));
    if (a == b || linked.contains({std::min(a, b), std::max(a, b)})) continue;
    linked.insert({std::min(a, b), std::max(a, b)});
    Branch br;
    br.id = detail::padded("T", ++t);
    br.from = buses[a].id;
    br.to = buses[b].id;
    br.switchable = true;
    br.initial_closed = false;
    branches.push_back(br);
    ends.push_back({a, b});
  }

  std::vector<bool> is_dg(n, false);
  for (int placed = 0; placed < opt.dgs;) {
    int x = static_cast<int>(rng.uniform(0, n - 1));
    if (is_dg[x]) continue;
    is_dg[x] = true;
    buses[x].dg = DgRating{1, 0};
    ++placed;
  }

  const int tree_branches = n - 1;
  for (int f = static_cast<int>(rng.uniform(0, 3)); f > 0; --f) {
    auto& br = branches[rng.uniform(0, tree_branches - 1)];
    br.faulted = true;
    br.initial_closed = false;
  }
  for (int k = 0; k < tree_branches; ++k) {
    auto& br = branches[k];
    if (br.switchable && !br.faulted && rng.chance(0.1)) br.initial_closed = false;
  }

  // Split any component that holds more than one DG.
  for (;;) {
    auto comp = detail::raw_components(n, branches, ends);
    int a = -1, b = -1;
    for (int i = 0; i < n && b < 0; ++i) {
      if (!is_dg[i]) continue;
      for (int j = i + 1; j < n; ++j)
        if (is_dg[j] && comp[i] == comp[j]) {
          a = i;
          b = j;
          break;
        }
    }
    if (b < 0) break;
    auto path = detail::raw_path(n, branches, ends, a, b);
    auto& br = branches[path[rng.uniform(0, static_cast<std::int64_t>(path.size()) - 1)]];
    br.switchable = true;
    br.initial_closed = false;
  }
  for (std::size_t k = tree_branches; k < branches.size(); ++k) {
    if (!rng.chance(0.25)) continue;
    branches[k].initial_closed = true;
    if (!detail::raw_legal(n, branches, ends, is_dg)) branches[k].initial_closed = false;
  }

  const double outage = opt.outage_rate >= 0.0 ? opt.outage_rate : 0.15 + 0.3 * rng.unit();
  for (auto& b : buses) b.ftu_online = !rng.chance(outage);
  for (std::size_t k = 0; k < branches.size(); ++k) branches[k].ctrl_bus = rng.chance(0.5) ? branches[k].from : branches[k].to;

  // DG ratings: present load plus a random margin.
  Network probe_net(buses, branches);
  auto st = initial_states(probe_net);
  auto el = energize(probe_net, st);
  auto fs = solve_flows(probe_net, st, el);
  for (int i = 0; i < n; ++i) {
    if (!is_dg[i]) continue;
    const auto& out = fs.dg_output[probe_net.bus_at(buses[i].id)];
    buses[i].dg = DgRating{std::max<std::int64_t>(1, out.p + rng.uniform(0, 400)), out.q + rng.uniform(0, 250)};
  }

  Scenario s;
  s.description = "generated: seed=" + std::to_string(opt.seed) + " buses=" + std::to_string(n) +
                  " dgs=" + std::to_string(opt.dgs);
  s.probe_magnitude_default = rng.uniform(20, 150);
  s.network = Network(std::move(buses), std::move(branches));
  check_initial_state(s.network);
  return s;
}

}  // namespace mgform
