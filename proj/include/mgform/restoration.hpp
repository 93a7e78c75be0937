#pragma once

// Microgrid-formation restoration. scf_restore is an exact branch-and-bound
// over the controllable switches and load pickups; sts_restore and
// noop_restore are the two baselines. evaluate() replays any plan against
// ground truth.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/inference.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

enum class SwitchCommand { NoAction, Close, Open };

inline const char* to_string(SwitchCommand c) {
  switch (c) {
    case SwitchCommand::Close: return "Close";
    case SwitchCommand::Open: return "Open";
    default: return "NoAction";
  }
}

struct RestorationPlan {
  std::vector<SwitchCommand> switch_cmd;             // per branch
  std::set<BusIndex> pickup;                         // buses whose load is served
  std::map<BusIndex, BusIndex> predicted_microgrid;  // bus -> DG
  Power predicted_served;
  double objective = 0.0;
  std::vector<std::int64_t> commodity;  // fictitious flow per branch, from->to positive
  bool infeasible = false;
  std::uint64_t nodes = 0;
};

inline RestorationPlan empty_plan(const Network& net) {
  RestorationPlan p;
  p.switch_cmd.assign(net.branch_count(), SwitchCommand::NoAction);
  p.commodity.assign(net.branch_count(), 0);
  return p;
}

// ---------------------------------------------------------------------------
// Planner's view of the feeder after inference.

enum class BranchRole { FixedOpen, FixedClosed, Uncertain, Free };

struct ScfModel {
  std::vector<BranchRole> role;        // per branch
  std::vector<bool> current_closed;    // per branch, meaningful for Free
  std::vector<bool> frozen;            // per bus: shares a component with an Uncertain branch
  std::vector<BranchIndex> free_switches;  // decision variables, canonical order
  std::vector<BusIndex> pickup_vars;       // controllable loads outside the frozen area
  std::vector<bool> forced;            // per bus: uncontrollable load, served iff energized
  std::vector<bool> blocked;           // per bus: may not become energized
  std::vector<BusIndex> frozen_served;  // frozen buses known to be served
  double frozen_value = 0.0;
  Power frozen_load;

  [[nodiscard]] std::size_t binaries() const { return free_switches.size() + pickup_vars.size(); }
};

namespace detail {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

inline bool known_served(const TelemetrySnapshot& snap, const InferenceResult& inf, BusIndex i) {
  if (snap.bus_state[i] == BusState::Electrified) return true;
  auto it = inf.resolved_bus.find(i);
  return it != inf.resolved_bus.end() && it->second == BusState::Electrified;
}

}  // namespace detail

inline ScfModel build_scf_model(const Network& net, const InferenceResult& inf, const TelemetrySnapshot& snap) {
  ScfModel m;
  const auto known = current_states(snap, inf.resolved_branch);
  m.role.resize(net.branch_count());
  m.current_closed.resize(net.branch_count());
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    const auto& br = net.branch(k);
    m.current_closed[k] = known[k] == BranchState::Closed;
    if (br.faulted)
      m.role[k] = BranchRole::FixedOpen;
    else if (known[k] == BranchState::Unknown)
      m.role[k] = BranchRole::Uncertain;
    else if (br.switchable && net.branch_observable(k) && !inf.lockout_branches.contains(k))
      m.role[k] = BranchRole::Free;
    else
      m.role[k] = m.current_closed[k] ? BranchRole::FixedClosed : BranchRole::FixedOpen;
  }

  // Anything that may be electrically tied to an Uncertain branch is left untouched.
  detail::Dsu dsu(net.bus_count());
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    const bool joined = m.role[k] == BranchRole::FixedClosed || m.role[k] == BranchRole::Uncertain ||
                        (m.role[k] == BranchRole::Free && m.current_closed[k]);
    if (joined) dsu.unite(net.from(k), net.to(k));
  }
  std::vector<bool> tainted(net.bus_count(), false);
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (m.role[k] == BranchRole::Uncertain) tainted[dsu.find(net.from(k))] = true;
  m.frozen.resize(net.bus_count());
  for (BusIndex i = 0; i < net.bus_count(); ++i) m.frozen[i] = tainted[dsu.find(i)];
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (m.role[k] != BranchRole::Free) continue;
    if (m.frozen[net.from(k)] || m.frozen[net.to(k)])
      m.role[k] = m.current_closed[k] ? BranchRole::FixedClosed : BranchRole::FixedOpen;
  }
  for (auto k : net.branches_by_id())
    if (m.role[k] == BranchRole::Free) m.free_switches.push_back(k);

  // Present energization of the unfrozen area follows from its (fully known) switch states.
  detail::Dsu now(net.bus_count());
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (!m.frozen[net.from(k)] && m.current_closed[k] &&
        (m.role[k] == BranchRole::FixedClosed || m.role[k] == BranchRole::Free))
      now.unite(net.from(k), net.to(k));
  std::vector<bool> live_root(net.bus_count(), false);
  for (auto x : net.dg_buses())
    if (!m.frozen[x]) live_root[now.find(x)] = true;

  m.forced.assign(net.bus_count(), false);
  m.blocked.assign(net.bus_count(), false);
  for (auto i : net.buses_by_id()) {
    const auto& b = net.bus(i);
    if (m.frozen[i]) {
      if (detail::known_served(snap, inf, i)) {
        m.frozen_served.push_back(i);
        m.frozen_value += b.weight * static_cast<double>(b.load_p);
        m.frozen_load += b.load();
      }
      continue;
    }
    if (inf.no_energize_buses.contains(i) && !live_root[now.find(i)]) m.blocked[i] = true;
    if (!b.ftu_online)
      m.forced[i] = true;
    else if (b.load_p > 0 || b.load_q > 0)
      m.pickup_vars.push_back(i);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Exact search. The unfrozen area is contracted over its fixed-closed branches
// into blocks joined by free switches; a microgrid is then a connected set of
// blocks around one DG, and each connected set is visited once.

struct ScfOptions {
  std::uint64_t node_budget = 10'000'000;
};

namespace detail {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct BlockGraph {
  std::vector<std::size_t> block_of;  // per bus; kNone inside the frozen area
  std::vector<std::vector<BusIndex>> buses;
  std::vector<char> usable;           // acyclic, no blocked bus, no DG
  std::vector<char> cyclic;
  std::vector<std::vector<BusIndex>> dgs;
  std::vector<Power> forced;
  std::vector<double> forced_value;
  std::vector<std::vector<std::pair<std::size_t, BranchIndex>>> adj;  // over free switches
  std::vector<std::optional<BusIndex>> current_dg;  // DG feeding the block today
};

inline BlockGraph build_blocks(const Network& net, const ScfModel& m) {
  const auto n = net.bus_count();
  BlockGraph g;
  Dsu fixed(n);
  std::vector<char> loop(n, 0);
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    if (m.frozen[net.from(k)] || m.role[k] != BranchRole::FixedClosed) continue;
    if (!fixed.unite(net.from(k), net.to(k))) loop[net.from(k)] = 1;
  }
  g.block_of.assign(n, kNone);
  std::vector<std::size_t> block_of_root(n, kNone);
  for (auto i : net.buses_by_id()) {
    if (m.frozen[i]) continue;
    auto r = fixed.find(i);
    if (block_of_root[r] == kNone) {
      block_of_root[r] = g.buses.size();
      g.buses.emplace_back();
    }
    g.block_of[i] = block_of_root[r];
    g.buses[g.block_of[i]].push_back(i);
  }
  const auto nb = g.buses.size();
  g.cyclic.assign(nb, 0);
  g.usable.assign(nb, 1);
  g.dgs.assign(nb, {});
  g.forced.assign(nb, {});
  g.forced_value.assign(nb, 0.0);
  g.adj.assign(nb, {});
  g.current_dg.assign(nb, std::nullopt);
  for (BusIndex i = 0; i < n; ++i) {
    auto b = g.block_of[i];
    if (b == kNone) continue;
    if (loop[i]) g.cyclic[b] = 1;
    if (net.bus(i).is_dg()) g.dgs[b].push_back(i);
    if (m.blocked[i]) g.usable[b] = 0;
    if (m.forced[i]) {
      g.forced[b] += net.bus(i).load();
      g.forced_value[b] += net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
    }
  }
  for (std::size_t b = 0; b < nb; ++b)
    if (g.cyclic[b] || !g.dgs[b].empty()) g.usable[b] = 0;
  for (auto k : m.free_switches) {
    auto a = g.block_of[net.from(k)], c = g.block_of[net.to(k)];
    if (a == c) continue;
    g.adj[a].push_back({c, k});
    g.adj[c].push_back({a, k});
  }

  Dsu now(n);
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    if (!m.frozen[net.from(k)] && m.current_closed[k] &&
        (m.role[k] == BranchRole::FixedClosed || m.role[k] == BranchRole::Free))
      now.unite(net.from(k), net.to(k));
  std::vector<std::optional<BusIndex>> feeder(n);
  for (auto x : net.dg_buses())
    if (!m.frozen[x]) feeder[now.find(x)] = x;
  for (BusIndex i = 0; i < n; ++i)
    if (g.block_of[i] != kNone && feeder[now.find(i)]) g.current_dg[g.block_of[i]] = feeder[now.find(i)];
  return g;
}

struct ScfSearch {
  const Network& net;
  const ScfModel& m;
  const BlockGraph& g;
  std::vector<BusIndex> dgs;  // unfrozen DGs, id order
  std::uint64_t budget;
  std::uint64_t& nodes;

  std::vector<int> owner;     // per block: position in `dgs`, or -1
  std::vector<int> excluded;  // per block: DG position that ruled it out, or -1
  std::vector<Power> forced_sum;
  std::vector<std::vector<BusIndex>> picks;  // per DG, at its latest completion

  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_owner;
  std::vector<std::vector<BusIndex>> best_picks;

  void tick() {
    if (++nodes > budget) throw SearchBudgetExceeded("branch-and-bound exceeded " + std::to_string(budget) + " nodes");
  }

  [[nodiscard]] double value_of(BusIndex i) const {
    return net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
  }

  // Fractional knapsack: the most weighted load `cap` kW can carry.
  [[nodiscard]] double capped_value(std::vector<BusIndex>& items, std::int64_t cap) const {
    std::stable_sort(items.begin(), items.end(),
                     [&](BusIndex a, BusIndex b) { return net.bus(a).weight > net.bus(b).weight; });
    double v = 0.0;
    for (auto i : items) {
      const auto p = net.bus(i).load_p;
      if (cap <= 0) break;
      if (p <= cap) {
        v += value_of(i);
        cap -= p;
      } else {
        v += net.bus(i).weight * static_cast<double>(cap);
        cap = 0;
      }
    }
    return v;
  }

  [[nodiscard]] bool open_to(std::size_t b, int d) const { return g.usable[b] && owner[b] < 0 && excluded[b] != d; }

  // Loads DG `d` could still reach, plus everything it already holds.
  double reach_bound(int d, const std::vector<std::size_t>& seeds, bool include_owned) const {
    std::vector<BusIndex> items;
    std::vector<char> seen(g.buses.size(), 0);
    std::vector<std::size_t> queue;
    if (include_owned)
      for (std::size_t b = 0; b < g.buses.size(); ++b)
        if (owner[b] == d) {
          seen[b] = 1;
          queue.push_back(b);
        }
    for (auto b : seeds)
      if (!seen[b]) {
        seen[b] = 1;
        queue.push_back(b);
      }
    for (std::size_t h = 0; h < queue.size(); ++h) {
      auto b = queue[h];
      items.insert(items.end(), g.buses[b].begin(), g.buses[b].end());
      for (auto [c, k] : g.adj[b])
        if (!seen[c] && open_to(c, d)) {
          seen[c] = 1;
          queue.push_back(c);
        }
    }
    return capped_value(items, net.bus(dgs[d]).dg->cap_p);
  }

  double bound(int d, const std::vector<std::size_t>& cand, double done) const {
    double v = done + reach_bound(d, cand, true);
    for (int e = d + 1; e < static_cast<int>(dgs.size()); ++e)
      v += reach_bound(e, {g.block_of[dgs[e]]}, false);
    return v;
  }

  // Exact two-resource knapsack over the controllable loads of one microgrid.
  struct Knapsack {
    std::vector<BusIndex> vars;
    double best = -1.0;
    std::vector<char> take, best_take;
  };

  void knapsack(Knapsack& ks, std::size_t at, double value, Power room) {
    tick();
    if (at == ks.vars.size()) {
      if (value > ks.best) {
        ks.best = value;
        ks.best_take = ks.take;
      }
      return;
    }
    std::vector<BusIndex> rest(ks.vars.begin() + static_cast<std::ptrdiff_t>(at), ks.vars.end());
    if (value + capped_value(rest, room.p) <= ks.best) return;
    const auto bus = ks.vars[at];
    const auto load = net.bus(bus).load();
    if (load.p <= room.p && load.q <= room.q) {
      ks.take[at] = 1;
      knapsack(ks, at + 1, value + value_of(bus), room - load);
      ks.take[at] = 0;
    }
    knapsack(ks, at + 1, value, room);
  }

  double settle(int d) {
    double value = 0.0;
    Knapsack ks;
    for (std::size_t b = 0; b < g.buses.size(); ++b) {
      if (owner[b] != d) continue;
      value += g.forced_value[b];
      for (auto i : g.buses[b])
        if (!m.forced[i] && std::find(m.pickup_vars.begin(), m.pickup_vars.end(), i) != m.pickup_vars.end())
          ks.vars.push_back(i);
    }
    std::sort(ks.vars.begin(), ks.vars.end(), [&](BusIndex a, BusIndex b) { return net.bus(a).id < net.bus(b).id; });
    const auto& r = *net.bus(dgs[d]).dg;
    ks.take.assign(ks.vars.size(), 0);
    knapsack(ks, 0, 0.0, Power{r.cap_p, r.cap_q} - forced_sum[d]);
    picks[d].clear();
    for (std::size_t h = 0; h < ks.vars.size(); ++h)
      if (ks.best_take[h]) picks[d].push_back(ks.vars[h]);
    return value + ks.best;
  }

  void start(int d, double done) {
    if (d == static_cast<int>(dgs.size())) {
      if (done > best) {
        best = done;
        best_owner = owner;
        best_picks = picks;
      }
      return;
    }
    const auto root = g.block_of[dgs[d]];
    forced_sum[d] = g.forced[root];
    std::vector<std::size_t> cand;
    for (auto [c, k] : g.adj[root])
      if (open_to(c, d) && std::find(cand.begin(), cand.end(), c) == cand.end()) cand.push_back(c);
    grow(d, cand, done);
  }

  void grow(int d, std::vector<std::size_t> cand, double done) {
    tick();
    if (bound(d, cand, done) <= best) return;
    if (cand.empty()) {
      start(d + 1, done + settle(d));
      return;
    }
    const auto v = cand.front();
    std::vector<std::size_t> rest(cand.begin() + 1, cand.end());
    const bool fed_now = g.current_dg[v] == dgs[d];
    for (int pass = 0; pass < 2; ++pass) {
      if ((pass == 0) == fed_now) {
        const auto& r = *net.bus(dgs[d]).dg;
        const auto load = forced_sum[d] + g.forced[v];
        if (load.p > r.cap_p || load.q > r.cap_q) continue;
        owner[v] = d;
        forced_sum[d] = load;
        auto next = rest;
        for (auto [c, k] : g.adj[v])
          if (open_to(c, d) && std::find(next.begin(), next.end(), c) == next.end()) next.push_back(c);
        grow(d, std::move(next), done);
        forced_sum[d] -= g.forced[v];
        owner[v] = -1;
      } else {
        const int prev = excluded[v];
        excluded[v] = d;
        grow(d, rest, done);
        excluded[v] = prev;
      }
    }
  }
};

}  // namespace detail

// Commodity flow certifying radiality: every energized non-DG bus draws one
// unit from its tree's DG. Returns per-branch flow (from->to positive).
inline std::vector<std::int64_t> commodity_flow(const Network& net, const std::vector<bool>& closed,
                                                const std::vector<bool>& energized_hint = {}) {
  std::vector<std::int64_t> flow(net.branch_count(), 0);
  std::vector<char> seen(net.bus_count(), 0);
  std::vector<std::optional<BranchIndex>> parent(net.bus_count());
  for (auto x : net.dg_buses()) {
    if (!energized_hint.empty() && !energized_hint[x]) continue;
    if (seen[x]) continue;
    std::vector<BusIndex> order{x};
    seen[x] = 1;
    for (std::size_t h = 0; h < order.size(); ++h) {
      auto i = order[h];
      for (auto k : net.incident(i)) {
        if (!closed[k] || net.branch(k).faulted) continue;
        auto j = net.other_end(k, i);
        if (seen[j]) continue;
        seen[j] = 1;
        parent[j] = k;
        order.push_back(j);
      }
    }
    std::vector<std::int64_t> sub(net.bus_count(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto i = *it;
      if (!net.bus(i).is_dg()) sub[i] += 1;
      if (!parent[i]) continue;
      auto k = *parent[i];
      flow[k] = (i == net.to(k)) ? sub[i] : -sub[i];
      sub[net.other_end(k, i)] += sub[i];
    }
  }
  return flow;
}

inline RestorationPlan scf_restore(const Network& net, const InferenceResult& inf, const TelemetrySnapshot& snap,
                                   const ScfOptions& opt = {}) {
  const auto m = build_scf_model(net, inf, snap);
  const auto g = detail::build_blocks(net, m);
  auto plan = empty_plan(net);
  auto fail = [&] {
    auto failed = empty_plan(net);
    failed.nodes = plan.nodes;
    failed.infeasible = true;
    return failed;
  };

  detail::ScfSearch s{net, m, g, {}, opt.node_budget, plan.nodes, {}, {}, {}, {}, -std::numeric_limits<double>::infinity(), {}, {}};
  for (auto x : net.dg_buses())
    if (!m.frozen[x]) s.dgs.push_back(x);
  s.owner.assign(g.buses.size(), -1);
  s.excluded.assign(g.buses.size(), -1);
  s.forced_sum.assign(s.dgs.size(), {});
  s.picks.assign(s.dgs.size(), {});
  for (std::size_t d = 0; d < s.dgs.size(); ++d) {
    const auto b = g.block_of[s.dgs[d]];
    const auto& r = *net.bus(s.dgs[d]).dg;
    if (g.cyclic[b] || g.dgs[b].size() > 1 || g.forced[b].p > r.cap_p || g.forced[b].q > r.cap_q) return fail();
    s.owner[b] = static_cast<int>(d);
  }
  s.start(0, 0.0);
  if (s.best == -std::numeric_limits<double>::infinity()) return fail();

  // Switch positions: a spanning tree per microgrid, preferring switches that
  // are already closed; switches touching a microgrid otherwise open; the rest stay.
  std::vector<bool> closed(net.branch_count(), false);
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    closed[k] = m.role[k] == BranchRole::FixedClosed || (m.role[k] == BranchRole::Free && m.current_closed[k]);
  std::vector<BranchIndex> order = m.free_switches;
  std::stable_partition(order.begin(), order.end(), [&](BranchIndex k) { return m.current_closed[k]; });
  detail::Dsu tree(g.buses.size());
  for (auto k : order) {
    auto a = g.block_of[net.from(k)], c = g.block_of[net.to(k)];
    const int oa = s.best_owner[a], oc = s.best_owner[c];
    if (oa < 0 && oc < 0) continue;
    closed[k] = oa == oc && a != c && tree.unite(a, c);
  }
  for (auto k : m.free_switches)
    if (closed[k] != m.current_closed[k]) plan.switch_cmd[k] = closed[k] ? SwitchCommand::Close : SwitchCommand::Open;

  std::set<BusIndex> picked;
  for (const auto& list : s.best_picks) picked.insert(list.begin(), list.end());
  const double objective = m.frozen_value + s.best;

  // Predicted microgrids in the unfrozen area.
  std::vector<bool> unfrozen_closed(net.branch_count(), false);
  for (BranchIndex k = 0; k < net.branch_count(); ++k)
    unfrozen_closed[k] = closed[k] && !m.frozen[net.from(k)] && m.role[k] != BranchRole::Uncertain;
  std::vector<bool> dg_active(net.bus_count(), false);
  for (auto x : net.dg_buses()) dg_active[x] = !m.frozen[x];
  plan.commodity = commodity_flow(net, unfrozen_closed, dg_active);
  for (auto x : net.dg_buses()) {
    if (m.frozen[x]) continue;
    std::vector<BusIndex> queue{x};
    plan.predicted_microgrid[x] = x;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (auto k : net.incident(queue[h])) {
        if (!unfrozen_closed[k]) continue;
        auto j = net.other_end(k, queue[h]);
        if (plan.predicted_microgrid.contains(j)) continue;
        plan.predicted_microgrid[j] = x;
        queue.push_back(j);
      }
  }

  for (auto i : m.frozen_served) plan.pickup.insert(i);
  for (BusIndex i = 0; i < net.bus_count(); ++i)
    if (!m.frozen[i] && m.forced[i] && plan.predicted_microgrid.contains(i)) plan.pickup.insert(i);
  plan.pickup.insert(picked.begin(), picked.end());
  for (auto i : plan.pickup) plan.predicted_served += net.bus(i).load();
  plan.objective = objective;
  return plan;
}

// Spanning-tree baseline: every DG grows a breadth-first tree at once over all
// non-faulted branches (Unknown ones included), and every reached load is
// picked up without any capacity check.
inline RestorationPlan sts_restore(const Network& net, const TelemetrySnapshot& snap) {
  auto plan = empty_plan(net);
  if (net.dg_buses().empty()) return plan;
  const auto none = net.bus_count();
  std::vector<BusIndex> owner(net.bus_count(), none);
  std::vector<bool> tree(net.branch_count(), false);
  std::vector<BusIndex> queue;
  for (auto x : net.dg_buses()) {
    owner[x] = x;
    queue.push_back(x);
  }
  for (std::size_t h = 0; h < queue.size(); ++h) {
    auto i = queue[h];
    for (auto k : net.incident(i)) {
      if (net.branch(k).faulted) continue;
      auto j = net.other_end(k, i);
      if (owner[j] != none) continue;
      owner[j] = owner[i];
      tree[k] = true;
      queue.push_back(j);
    }
  }
  for (BranchIndex k = 0; k < net.branch_count(); ++k) {
    const auto& br = net.branch(k);
    if (!br.switchable || br.faulted) continue;
    const auto s = snap.branch_state[k];
    if (tree[k] && s != BranchState::Closed) plan.switch_cmd[k] = SwitchCommand::Close;
    if (!tree[k] && s != BranchState::Open) plan.switch_cmd[k] = SwitchCommand::Open;
  }
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    if (owner[i] == none) continue;
    plan.pickup.insert(i);
    plan.predicted_microgrid[i] = owner[i];
    plan.predicted_served += net.bus(i).load();
    plan.objective += net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
  }
  std::vector<bool> closed(tree.begin(), tree.end());
  plan.commodity = commodity_flow(net, closed);
  return plan;
}

// Leave everything as it is: serve only what is known to be served now.
inline RestorationPlan noop_restore(const Network& net, const TelemetrySnapshot& snap,
                                    const InferenceResult* inf = nullptr) {
  auto plan = empty_plan(net);
  for (BusIndex i = 0; i < net.bus_count(); ++i) {
    bool served = snap.bus_state[i] == BusState::Electrified;
    if (!served && inf) served = detail::known_served(snap, *inf, i);
    if (!served) continue;
    plan.pickup.insert(i);
    plan.predicted_served += net.bus(i).load();
    plan.objective += net.bus(i).weight * static_cast<double>(net.bus(i).load_p);
  }
  return plan;
}

// ---------------------------------------------------------------------------

struct ServedReport {
  Power served;
  double weighted = 0.0;
  std::vector<BusIndex> tripped_dgs;      // overload trips, in order
  std::vector<BusIndex> protection_trips;  // DGs removed with a cyclic or multi-DG island
  std::vector<Violation> violations;
  ActualStates final_states;
};

// Replays a plan on ground truth. Commands are executed as issued (violations
// are reported, not corrected); controllable loads outside `pickup` are shed.
inline ServedReport evaluate(const Network& net, const ActualStates& truth, const RestorationPlan& plan,
                             const InferenceResult* inf = nullptr) {
  ServedReport rep;
  auto st = truth;
  const auto before = scan_components(net, truth);

  for (auto k : net.branches_by_id()) {
    const auto cmd = plan.switch_cmd.empty() ? SwitchCommand::NoAction : plan.switch_cmd[k];
    if (cmd == SwitchCommand::NoAction) continue;
    const auto& br = net.branch(k);
    if (!br.switchable) {
      rep.violations.push_back({"commanded-non-switchable", br.id, "branch has no switch"});
      continue;
    }
    if (br.faulted && cmd == SwitchCommand::Close) {
      rep.violations.push_back({"commanded-faulted", br.id, "close command on a faulted branch"});
      continue;
    }
    if (!net.branch_observable(k))
      rep.violations.push_back({"commanded-unknown", br.id, "FTU at " + br.ctrl_bus + " is offline"});
    else if (inf && inf->lockout_branches.contains(k))
      rep.violations.push_back({"commanded-lockout", br.id, "branch is locked out"});
    st.closed[k] = cmd == SwitchCommand::Close;
  }
  for (BusIndex i = 0; i < net.bus_count(); ++i)
    if (net.observable(i)) st.shed[i] = !plan.pickup.contains(i);

  for (;;) {
    auto scan = scan_components(net, st);
    bool clean = true;
    for (std::size_t c = 0; c < scan.dgs.size(); ++c) {
      const auto& dgs = scan.dgs[c];
      if (dgs.empty() || (!scan.cyclic[c] && dgs.size() == 1)) continue;
      clean = false;
      rep.violations.push_back({scan.cyclic[c] ? "cycle-formed" : "multi-dg-component", net.bus(dgs.front()).id,
                                std::to_string(dgs.size()) + " DG(s) in the island"});
      for (auto x : dgs) {
        st.tripped[x] = true;
        rep.protection_trips.push_back(x);
      }
    }
    if (clean) break;
  }

  const auto after = energize(net, st);
  for (auto i : net.buses_by_id())
    if (!net.observable(i) && !before.el.live(i) && after.live(i))
      rep.violations.push_back({"no-energize-bus-energized", net.bus(i).id, "unobservable dead bus was connected"});

  auto tripped = trip_overloads(net, st);
  rep.tripped_dgs = tripped.tripped;
  rep.final_states = tripped.states;
  const auto el = energize(net, rep.final_states);
  const auto fs = solve_flows(net, rep.final_states, el);
  rep.served = fs.total_served();
  for (BusIndex i = 0; i < net.bus_count(); ++i)
    rep.weighted += net.bus(i).weight * static_cast<double>(fs.served[i].p);
  return rep;
}

}  // namespace mgform
