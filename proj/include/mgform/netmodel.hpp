#pragma once

// Feeder data model: buses, branches, the immutable Network graph and the
// Scenario document that wraps it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mgform/errors.hpp"

namespace mgform {

using BusIndex = std::size_t;
using BranchIndex = std::size_t;

// Active/reactive pair in integer kW / kvar.
struct Power {
  std::int64_t p = 0;
  std::int64_t q = 0;

  Power& operator+=(const Power& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  Power& operator-=(const Power& o) {
    p -= o.p;
    q -= o.q;
    return *this;
  }
  friend Power operator+(Power a, const Power& b) { return a += b; }
  friend Power operator-(Power a, const Power& b) { return a -= b; }
  friend Power operator-(const Power& a) { return {-a.p, -a.q}; }
  friend bool operator==(const Power&, const Power&) = default;

  [[nodiscard]] bool is_zero() const { return p == 0 && q == 0; }
  [[nodiscard]] std::int64_t abs_sum() const { return (p < 0 ? -p : p) + (q < 0 ? -q : q); }
};

struct DgRating {
  std::int64_t cap_p = 0;
  std::int64_t cap_q = 0;
  friend bool operator==(const DgRating&, const DgRating&) = default;
};

struct Bus {
  std::string id;
  std::int64_t load_p = 0;
  std::int64_t load_q = 0;
  double weight = 1.0;
  std::optional<DgRating> dg;
  bool ftu_online = true;
  bool probe_allowed = false;

  [[nodiscard]] Power load() const { return {load_p, load_q}; }
  [[nodiscard]] bool is_dg() const { return dg.has_value(); }
  friend bool operator==(const Bus&, const Bus&) = default;
};

struct Branch {
  std::string id;
  std::string from;
  std::string to;
  bool switchable = true;
  bool faulted = false;
  std::string ctrl_bus;
  bool initial_closed = false;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Violation {
  std::string kind;
  std::string id;
  std::string detail;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Violations of the Network invariants; empty means valid.
using ValidationReport = std::vector<Violation>;

ValidationReport validate_records(const std::vector<Bus>& buses, const std::vector<Branch>& branches);

// Immutable feeder graph. Construction validates and throws ValidationError.
class Network {
 public:
  Network() = default;
  Network(std::vector<Bus> buses, std::vector<Branch> branches);

  [[nodiscard]] const std::vector<Bus>& buses() const { return buses_; }
  [[nodiscard]] const std::vector<Branch>& branches() const { return branches_; }
  [[nodiscard]] std::size_t bus_count() const { return buses_.size(); }
  [[nodiscard]] std::size_t branch_count() const { return branches_.size(); }

  [[nodiscard]] const Bus& bus(BusIndex i) const { return buses_.at(i); }
  [[nodiscard]] const Branch& branch(BranchIndex k) const { return branches_.at(k); }

  [[nodiscard]] std::optional<BusIndex> find_bus(const std::string& id) const {
    auto it = bus_index_.find(id);
    if (it == bus_index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::optional<BranchIndex> find_branch(const std::string& id) const {
    auto it = branch_index_.find(id);
    if (it == branch_index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] BusIndex bus_at(const std::string& id) const {
    if (auto i = find_bus(id)) return *i;
    throw std::out_of_range("unknown bus " + id);
  }
  [[nodiscard]] BranchIndex branch_at(const std::string& id) const {
    if (auto k = find_branch(id)) return *k;
    throw std::out_of_range("unknown branch " + id);
  }

  [[nodiscard]] BusIndex from(BranchIndex k) const { return ends_[k].first; }
  [[nodiscard]] BusIndex to(BranchIndex k) const { return ends_[k].second; }
  [[nodiscard]] BusIndex ctrl(BranchIndex k) const { return ctrl_[k]; }
  [[nodiscard]] BusIndex other_end(BranchIndex k, BusIndex i) const {
    return ends_[k].first == i ? ends_[k].second : ends_[k].first;
  }

  // Branches incident to bus i, in canonical (id) order.
  [[nodiscard]] const std::vector<BranchIndex>& incident(BusIndex i) const { return incidence_[i]; }

  // DG buses in canonical (id) order.
  [[nodiscard]] const std::vector<BusIndex>& dg_buses() const { return dgs_; }

  // Indices sorted by id, for canonical iteration.
  [[nodiscard]] const std::vector<BusIndex>& buses_by_id() const { return bus_order_; }
  [[nodiscard]] const std::vector<BranchIndex>& branches_by_id() const { return branch_order_; }

  [[nodiscard]] bool observable(BusIndex i) const { return buses_[i].ftu_online; }
  [[nodiscard]] bool branch_observable(BranchIndex k) const { return buses_[ctrl_[k]].ftu_online; }

  [[nodiscard]] Power total_load() const {
    Power t;
    for (const auto& b : buses_) t += b.load();
    return t;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.buses_ == b.buses_ && a.branches_ == b.branches_;
  }

 private:
  std::vector<Bus> buses_;
  std::vector<Branch> branches_;
  std::unordered_map<std::string, BusIndex> bus_index_;
  std::unordered_map<std::string, BranchIndex> branch_index_;
  std::vector<std::pair<BusIndex, BusIndex>> ends_;
  std::vector<BusIndex> ctrl_;
  std::vector<std::vector<BranchIndex>> incidence_;
  std::vector<BusIndex> dgs_;
  std::vector<BusIndex> bus_order_;
  std::vector<BranchIndex> branch_order_;
};

struct Scenario {
  Network network;
  std::string description;
  std::int64_t probe_magnitude_default = 100;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------

namespace detail {

inline void connectivity_violations(const std::vector<Bus>& buses, const std::vector<Branch>& branches,
                                    const std::unordered_map<std::string, std::size_t>& index,
                                    ValidationReport& out) {
  if (buses.empty()) return;
  std::vector<std::size_t> parent(buses.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& br : branches) {
    auto a = index.find(br.from);
    auto b = index.find(br.to);
    if (a == index.end() || b == index.end()) continue;
    parent[find(a->second)] = find(b->second);
  }
  // The component holding the first bus (by id) is the reference.
  std::vector<std::size_t> order(buses.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return buses[x].id < buses[y].id; });
  const auto root = find(order.front());
  for (auto i : order)
    if (find(i) != root) out.push_back({"disconnected", buses[i].id, "bus not connected to " + buses[order.front()].id});
}

}  // namespace detail

inline ValidationReport validate_records(const std::vector<Bus>& buses, const std::vector<Branch>& branches) {
  ValidationReport out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    const auto& b = buses[i];
    if (b.id.empty()) out.push_back({"empty-id", "", "bus with empty id"});
    if (!index.emplace(b.id, i).second) out.push_back({"duplicate-id", b.id, "bus id used twice"});
    if (b.load_p < 0 || b.load_q < 0) out.push_back({"negative-load", b.id, "loads must be non-negative"});
    if (!(b.weight >= 0.0)) out.push_back({"negative-weight", b.id, "weight must be non-negative"});
    if (b.dg && (b.dg->cap_p <= 0 || b.dg->cap_q < 0))
      out.push_back({"bad-capacity", b.id, "DG needs cap_p > 0 and cap_q >= 0"});
  }
  std::unordered_map<std::string, int> branch_ids;
  for (const auto& br : branches) {
    if (br.id.empty()) out.push_back({"empty-id", "", "branch with empty id"});
    if (++branch_ids[br.id] == 2) out.push_back({"duplicate-id", br.id, "branch id used twice"});
    bool ends_ok = true;
    for (const auto* end : {&br.from, &br.to}) {
      if (!index.contains(*end)) {
        out.push_back({"dangling-endpoint", br.id, "unknown bus " + *end});
        ends_ok = false;
      }
    }
    if (ends_ok && br.from == br.to) out.push_back({"self-loop", br.id, "endpoints must differ"});
    if (br.ctrl_bus != br.from && br.ctrl_bus != br.to)
      out.push_back({"ctrl-not-endpoint", br.id, "ctrl_bus " + br.ctrl_bus + " is not an endpoint"});
  }
  detail::connectivity_violations(buses, branches, index, out);
  return out;
}

inline Network::Network(std::vector<Bus> buses, std::vector<Branch> branches)
    : buses_(std::move(buses)), branches_(std::move(branches)) {
  if (auto report = validate_records(buses_, branches_); !report.empty()) {
    std::string msg;
    for (const auto& v : report) msg += v.kind + " " + v.id + ": " + v.detail + "; ";
    throw ValidationError(msg);
  }
  for (BusIndex i = 0; i < buses_.size(); ++i) bus_index_.emplace(buses_[i].id, i);
  for (BranchIndex k = 0; k < branches_.size(); ++k) branch_index_.emplace(branches_[k].id, k);

  bus_order_.resize(buses_.size());
  std::iota(bus_order_.begin(), bus_order_.end(), 0);
  std::sort(bus_order_.begin(), bus_order_.end(), [&](auto a, auto b) { return buses_[a].id < buses_[b].id; });
  branch_order_.resize(branches_.size());
  std::iota(branch_order_.begin(), branch_order_.end(), 0);
  std::sort(branch_order_.begin(), branch_order_.end(),
            [&](auto a, auto b) { return branches_[a].id < branches_[b].id; });

  incidence_.assign(buses_.size(), {});
  ends_.resize(branches_.size());
  ctrl_.resize(branches_.size());
  for (auto k : branch_order_) {
    const auto& br = branches_[k];
    ends_[k] = {bus_index_.at(br.from), bus_index_.at(br.to)};
    ctrl_[k] = bus_index_.at(br.ctrl_bus);
    incidence_[ends_[k].first].push_back(k);
    incidence_[ends_[k].second].push_back(k);
  }
  for (auto i : bus_order_)
    if (buses_[i].is_dg()) dgs_.push_back(i);
}

inline ValidationReport validate(const Network& net) { return validate_records(net.buses(), net.branches()); }

// ---------------------------------------------------------------------------
// Scenario document (JSON).

namespace detail {

inline void require_object(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
}

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw SchemaError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw SchemaError(where + ": '" + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw SchemaError(where + ": '" + key + "' must be an integer");
  } else {
    if (!v.is_number()) throw SchemaError(where + ": '" + key + "' must be a number");
  }
  return v.get<T>();
}

template <class T>
T get_field_or(const nlohmann::json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get_field<T>(j, key, where) : fallback;
}

}  // namespace detail

inline Bus bus_from_json(const nlohmann::json& j, const std::string& where) {
  detail::require_object(j, where);
  detail::reject_unknown_keys(j, {"id", "load_p", "load_q", "weight", "dg", "ftu_online", "probe_allowed"}, where);
  Bus b;
  b.id = detail::get_field<std::string>(j, "id", where);
  const auto at = where + " '" + b.id + "'";
  b.load_p = detail::get_field<std::int64_t>(j, "load_p", at);
  b.load_q = detail::get_field<std::int64_t>(j, "load_q", at);
  b.weight = detail::get_field_or<double>(j, "weight", 1.0, at);
  b.ftu_online = detail::get_field<bool>(j, "ftu_online", at);
  b.probe_allowed = detail::get_field_or<bool>(j, "probe_allowed", false, at);
  if (j.contains("dg") && !j.at("dg").is_null()) {
    const auto& d = j.at("dg");
    detail::require_object(d, at + ".dg");
    detail::reject_unknown_keys(d, {"cap_p", "cap_q"}, at + ".dg");
    b.dg = DgRating{detail::get_field<std::int64_t>(d, "cap_p", at + ".dg"),
                    detail::get_field<std::int64_t>(d, "cap_q", at + ".dg")};
  }
  return b;
}

inline Branch branch_from_json(const nlohmann::json& j, const std::string& where) {
  detail::require_object(j, where);
  detail::reject_unknown_keys(j, {"id", "from", "to", "switchable", "faulted", "ctrl_bus", "initial_closed"}, where);
  Branch br;
  br.id = detail::get_field<std::string>(j, "id", where);
  const auto at = where + " '" + br.id + "'";
  br.from = detail::get_field<std::string>(j, "from", at);
  br.to = detail::get_field<std::string>(j, "to", at);
  br.switchable = detail::get_field<bool>(j, "switchable", at);
  br.faulted = detail::get_field_or<bool>(j, "faulted", false, at);
  br.ctrl_bus = detail::get_field<std::string>(j, "ctrl_bus", at);
  br.initial_closed = detail::get_field<bool>(j, "initial_closed", at);
  return br;
}

// The initial switch positions must describe a legal ground truth: every
// component holding a DG is a tree with exactly one DG.
inline void check_initial_state(const Network& net) {
  std::vector<std::size_t> parent(net.bus_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> cyclic(net.bus_count(), false);
  for (auto k : net.branches_by_id()) {
    const auto& br = net.branch(k);
    if (br.faulted || !br.initial_closed) continue;
    auto a = find(net.from(k));
    auto b = find(net.to(k));
    if (a == b) {
      cyclic[a] = true;
    } else {
      parent[a] = b;
      cyclic[b] = cyclic[b] || cyclic[a];
    }
  }
  std::vector<int> dgs(net.bus_count(), 0);
  for (auto x : net.dg_buses()) ++dgs[find(x)];
  for (auto x : net.dg_buses()) {
    auto r = find(x);
    if (cyclic[r]) throw ValidationError("initial state: energized component of DG " + net.bus(x).id + " has a cycle");
    if (dgs[r] > 1) throw ValidationError("initial state: DG " + net.bus(x).id + " shares a component with another DG");
  }
}

inline Scenario scenario_from_json(const nlohmann::json& doc) {
  detail::require_object(doc, "scenario");
  detail::reject_unknown_keys(doc, {"description", "probe_magnitude_default", "buses", "branches"}, "scenario");
  Scenario s;
  s.description = detail::get_field<std::string>(doc, "description", "scenario");
  s.probe_magnitude_default = detail::get_field<std::int64_t>(doc, "probe_magnitude_default", "scenario");
  if (!doc.contains("buses") || !doc["buses"].is_array()) throw SchemaError("scenario: 'buses' must be an array");
  if (!doc.contains("branches") || !doc["branches"].is_array())
    throw SchemaError("scenario: 'branches' must be an array");

  std::vector<Bus> buses;
  for (std::size_t i = 0; i < doc["buses"].size(); ++i)
    buses.push_back(bus_from_json(doc["buses"][i], "buses[" + std::to_string(i) + "]"));
  std::vector<Branch> branches;
  for (std::size_t i = 0; i < doc["branches"].size(); ++i)
    branches.push_back(branch_from_json(doc["branches"][i], "branches[" + std::to_string(i) + "]"));

  if (s.probe_magnitude_default <= 0) throw ValidationError("probe_magnitude_default must be positive");
  s.network = Network(std::move(buses), std::move(branches));
  if (s.network.dg_buses().empty()) throw ValidationError("scenario has no DG bus");
  check_initial_state(s.network);
  return s;
}

inline Scenario load_scenario(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("malformed document: ") + e.what());
  }
  return scenario_from_json(doc);
}

inline nlohmann::ordered_json to_json(const Bus& b) {
  nlohmann::ordered_json j;
  j["id"] = b.id;
  j["load_p"] = b.load_p;
  j["load_q"] = b.load_q;
  j["weight"] = b.weight;
  if (b.dg)
    j["dg"] = {{"cap_p", b.dg->cap_p}, {"cap_q", b.dg->cap_q}};
  else
    j["dg"] = nullptr;
  j["ftu_online"] = b.ftu_online;
  j["probe_allowed"] = b.probe_allowed;
  return j;
}

inline nlohmann::ordered_json to_json(const Branch& br) {
  nlohmann::ordered_json j;
  j["id"] = br.id;
  j["from"] = br.from;
  j["to"] = br.to;
  j["switchable"] = br.switchable;
  j["faulted"] = br.faulted;
  j["ctrl_bus"] = br.ctrl_bus;
  j["initial_closed"] = br.initial_closed;
  return j;
}

inline nlohmann::ordered_json to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["description"] = s.description;
  j["probe_magnitude_default"] = s.probe_magnitude_default;
  j["buses"] = nlohmann::ordered_json::array();
  for (const auto& b : s.network.buses()) j["buses"].push_back(to_json(b));
  j["branches"] = nlohmann::ordered_json::array();
  for (const auto& br : s.network.branches()) j["branches"].push_back(to_json(br));
  return j;
}

inline std::string serialize(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

}  // namespace mgform
