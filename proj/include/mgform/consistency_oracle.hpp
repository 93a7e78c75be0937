#pragma once

// Brute-force reference for inference: every assignment of the Unknown branch
// states that reproduces the observed telemetry, and the states all of them agree on.

#include <cstdint>
#include <map>
#include <vector>

#include "mgform/errors.hpp"
#include "mgform/inference.hpp"
#include "mgform/netmodel.hpp"
#include "mgform/truthsim.hpp"

namespace mgform {

inline constexpr std::size_t kMaxOracleUnknowns = 20;

struct ConsistentSet {
  std::vector<BranchIndex> unknown;              // enumeration order (by id)
  std::vector<std::vector<bool>> assignments;    // closed flag per unknown branch
  std::map<BranchIndex, BranchState> forced;
};

// `truth` supplies the shed/tripped sets only; its switch positions are not read.
// Logged probe answers must be reproduced as well as the snapshot.
inline ConsistentSet enumerate_consistent(const Network& net, const TelemetrySnapshot& snap, const ActualStates& truth,
                                          const std::vector<ProbeLogEntry>& probes = {},
                                          std::size_t max_unknowns = kMaxOracleUnknowns) {
  ConsistentSet cs;
  ActualStates cand = truth;
  for (auto k : net.branches_by_id()) {
    if (net.branch(k).faulted) {
      cand.closed[k] = false;
      continue;
    }
    switch (snap.branch_state[k]) {
      case BranchState::Closed: cand.closed[k] = true; break;
      case BranchState::Open: cand.closed[k] = false; break;
      case BranchState::Unknown: cs.unknown.push_back(k); break;
    }
  }
  if (cs.unknown.size() > max_unknowns)
    throw TooManyUnknowns(std::to_string(cs.unknown.size()) + " unknown branches exceed the limit of " +
                          std::to_string(max_unknowns));

  const std::uint64_t total = std::uint64_t{1} << cs.unknown.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t b = 0; b < cs.unknown.size(); ++b) cand.closed[cs.unknown[b]] = (mask >> b) & 1U;
    auto scan = scan_components(net, cand);
    bool admissible = true;
    for (std::size_t c = 0; c < scan.dgs.size() && admissible; ++c)
      if (!scan.dgs[c].empty() && (scan.cyclic[c] || scan.dgs[c].size() > 1)) admissible = false;
    if (!admissible) continue;
    if (observe(net, cand, scan.el, solve_flows(net, cand, scan.el)) != snap) continue;

    bool probes_match = true;
    for (const auto& entry : probes) {
      if (!entry.result) continue;
      try {
        if (observed_probe(net, cand, entry.bus, entry.delta_p) != *entry.result) probes_match = false;
      } catch (const Error&) {
        probes_match = false;
      }
      if (!probes_match) break;
    }
    if (!probes_match) continue;

    std::vector<bool> a(cs.unknown.size());
    for (std::size_t b = 0; b < cs.unknown.size(); ++b) a[b] = cand.closed[cs.unknown[b]];
    cs.assignments.push_back(std::move(a));
  }

  if (cs.assignments.empty()) return cs;
  for (std::size_t b = 0; b < cs.unknown.size(); ++b) {
    const bool first = cs.assignments.front()[b];
    bool agree = true;
    for (const auto& a : cs.assignments)
      if (a[b] != first) {
        agree = false;
        break;
      }
    if (agree) cs.forced[cs.unknown[b]] = first ? BranchState::Closed : BranchState::Open;
  }
  return cs;
}

// Share of the forced states that inference also resolved (to the same value).
inline double completeness_ratio(const InferenceResult& inf, const ConsistentSet& cs) {
  if (cs.forced.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& [k, s] : cs.forced) {
    auto it = inf.resolved_branch.find(k);
    if (it != inf.resolved_branch.end() && it->second == s) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(cs.forced.size());
}

// Resolved entries that the oracle does not force (to the same value).
inline std::vector<BranchIndex> uncontained(const InferenceResult& inf, const ConsistentSet& cs) {
  std::vector<BranchIndex> out;
  for (const auto& [k, s] : inf.resolved_branch) {
    auto it = cs.forced.find(k);
    if (it == cs.forced.end() || it->second != s) out.push_back(k);
  }
  return out;
}

}  // namespace mgform
