#pragma once

// Supply-path index: reachability closure (Floyd-Warshall) plus every simple
// path from each bus to each DG over the branches assumed closed.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

// How branches in the Unknown state are treated when building the index.
enum class Assumption { UnknownOpen, UnknownClosed };

using Path = std::vector<BranchIndex>;  // branch sequence from a bus to a DG

inline constexpr std::size_t kDefaultPathCap = 1024;

struct PathIndex {
  std::vector<std::vector<char>> reach;                            // bus x bus
  std::map<std::pair<BusIndex, BusIndex>, std::vector<Path>> paths;  // (bus, DG) -> paths
  std::vector<std::size_t> count;                                  // per bus, over all DGs

  [[nodiscard]] const std::vector<Path>& paths_to(BusIndex bus, BusIndex dg) const {
    static const std::vector<Path> empty;
    auto it = paths.find({bus, dg});
    return it == paths.end() ? empty : it->second;
  }
  [[nodiscard]] std::size_t pair_count(BusIndex bus, BusIndex dg) const { return paths_to(bus, dg).size(); }
};

inline bool effective_closed(const Network& net, const std::vector<BranchState>& known, Assumption assume,
                             BranchIndex k) {
  if (net.branch(k).faulted) return false;
  if (known[k] == BranchState::Closed) return true;
  return known[k] == BranchState::Unknown && assume == Assumption::UnknownClosed;
}

namespace detail {

inline std::vector<std::vector<char>> transitive_closure(const Network& net, const std::vector<char>& edge_on) {
  const auto n = net.bus_count();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (!edge_on[k]) continue;
    r[net.from(k)][net.to(k)] = r[net.to(k)][net.from(k)] = 1;
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][m]) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (r[m][j]) r[i][j] = 1;
    }
  return r;
}

struct PathEnumerator {
  const Network& net;
  const std::vector<char>& edge_on;
  BusIndex dg;
  std::size_t cap;
  std::map<std::pair<BusIndex, BusIndex>, std::vector<Path>>& out;
  std::vector<char> on_path;
  std::vector<BranchIndex> stack;

  void record(BusIndex at) {
    auto& bucket = out[{at, dg}];
    if (bucket.size() >= cap)
      throw PathExplosion("more than " + std::to_string(cap) + " simple paths between bus " + net.bus(at).id +
                          " and DG " + net.bus(dg).id);
    bucket.emplace_back(stack.rbegin(), stack.rend());
  }

  void walk(BusIndex at) {
    record(at);
    for (auto k : net.incident(at)) {
      if (!edge_on[k]) continue;
      auto next = net.other_end(k, at);
      if (on_path[next]) continue;
      on_path[next] = 1;
      stack.push_back(k);
      walk(next);
      stack.pop_back();
      on_path[next] = 0;
    }
  }
};

}  // namespace detail

inline PathIndex floyd_process(const Network& net, const std::vector<BranchState>& known, Assumption assume,
                               std::size_t cap = kDefaultPathCap) {
  std::vector<char> edge_on(net.branch_count(), 0);
  for (BranchIndex k = 0; k < net.branch_count(); ++k) edge_on[k] = effective_closed(net, known, assume, k);

  PathIndex idx;
  idx.reach = detail::transitive_closure(net, edge_on);
  for (auto x : net.dg_buses()) {
    detail::PathEnumerator e{net, edge_on, x, cap, idx.paths, std::vector<char>(net.bus_count(), 0), {}};
    e.on_path[x] = 1;
    e.walk(x);
  }

  auto id_less = [&](const Path& a, const Path& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [&](BranchIndex u, BranchIndex v) {
      return net.branch(u).id < net.branch(v).id;
    });
  };
  idx.count.assign(net.bus_count(), 0);
  for (auto& [key, list] : idx.paths) {
    std::sort(list.begin(), list.end(), id_less);
    idx.count[key.first] += list.size();
  }
  return idx;
}

}  // namespace mgform
