#pragma once

// The shipped default scenario: IEEE 37-node test feeder with the substation
// lost (799-701 faulted) and three DGs, DG1 at 701, DG2 at 727, DG3 at 775.
// Spot loads are the feeder's; ties T1-T3, DG ratings, faults and FTU outages
// are a reconstruction. data/ieee37.scenario.json holds the same document.

#include "mgform/netmodel.hpp"

namespace mgform {

inline constexpr const char* kIeee37Document = R"json({
  "description": "IEEE 37-node feeder after a substation outage, three DGs (DG1 at 701, DG2 at 727, DG3 at 775), partial FTU outage",
  "probe_magnitude_default": 140,
  "buses": [
    {"id": "701", "load_p": 630, "load_q": 315, "weight": 1.0, "dg": {"cap_p": 1200, "cap_q": 600}, "ftu_online": true, "probe_allowed": false},
    {"id": "702", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "703", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "704", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "705", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "706", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "707", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "708", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "709", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "710", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "711", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "712", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "713", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "714", "load_p": 38, "load_q": 18, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "718", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "720", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "722", "load_p": 161, "load_q": 80, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "724", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "725", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "727", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": {"cap_p": 380, "cap_q": 190}, "ftu_online": true, "probe_allowed": false},
    {"id": "728", "load_p": 126, "load_q": 63, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "729", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "730", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "731", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "732", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "733", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "734", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "735", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "736", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "737", "load_p": 140, "load_q": 70, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": true},
    {"id": "738", "load_p": 126, "load_q": 62, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "740", "load_p": 85, "load_q": 40, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "741", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "742", "load_p": 93, "load_q": 44, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false},
    {"id": "744", "load_p": 42, "load_q": 21, "weight": 1.0, "dg": null, "ftu_online": false, "probe_allowed": false},
    {"id": "775", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": {"cap_p": 560, "cap_q": 280}, "ftu_online": true, "probe_allowed": false},
    {"id": "799", "load_p": 0, "load_q": 0, "weight": 1.0, "dg": null, "ftu_online": true, "probe_allowed": false}
  ],
  "branches": [
    {"id": "799-701", "from": "799", "to": "701", "switchable": true, "faulted": true, "ctrl_bus": "701", "initial_closed": false},
    {"id": "701-702", "from": "701", "to": "702", "switchable": true, "faulted": false, "ctrl_bus": "702", "initial_closed": true},
    {"id": "705-702", "from": "705", "to": "702", "switchable": true, "faulted": false, "ctrl_bus": "705", "initial_closed": false},
    {"id": "702-713", "from": "702", "to": "713", "switchable": true, "faulted": false, "ctrl_bus": "713", "initial_closed": true},
    {"id": "702-703", "from": "702", "to": "703", "switchable": true, "faulted": true, "ctrl_bus": "703", "initial_closed": false},
    {"id": "705-742", "from": "705", "to": "742", "switchable": true, "faulted": false, "ctrl_bus": "742", "initial_closed": true},
    {"id": "705-712", "from": "705", "to": "712", "switchable": true, "faulted": false, "ctrl_bus": "712", "initial_closed": true},
    {"id": "713-704", "from": "713", "to": "704", "switchable": true, "faulted": false, "ctrl_bus": "713", "initial_closed": true},
    {"id": "704-714", "from": "704", "to": "714", "switchable": true, "faulted": false, "ctrl_bus": "714", "initial_closed": false},
    {"id": "704-720", "from": "704", "to": "720", "switchable": true, "faulted": false, "ctrl_bus": "720", "initial_closed": true},
    {"id": "714-718", "from": "714", "to": "718", "switchable": true, "faulted": false, "ctrl_bus": "718", "initial_closed": true},
    {"id": "720-707", "from": "720", "to": "707", "switchable": true, "faulted": false, "ctrl_bus": "707", "initial_closed": false},
    {"id": "720-706", "from": "720", "to": "706", "switchable": true, "faulted": false, "ctrl_bus": "720", "initial_closed": true},
    {"id": "707-724", "from": "707", "to": "724", "switchable": true, "faulted": false, "ctrl_bus": "724", "initial_closed": true},
    {"id": "707-722", "from": "707", "to": "722", "switchable": true, "faulted": false, "ctrl_bus": "722", "initial_closed": true},
    {"id": "706-725", "from": "706", "to": "725", "switchable": true, "faulted": false, "ctrl_bus": "725", "initial_closed": true},
    {"id": "703-727", "from": "703", "to": "727", "switchable": true, "faulted": false, "ctrl_bus": "727", "initial_closed": true},
    {"id": "703-730", "from": "703", "to": "730", "switchable": true, "faulted": false, "ctrl_bus": "730", "initial_closed": true},
    {"id": "727-744", "from": "727", "to": "744", "switchable": true, "faulted": false, "ctrl_bus": "727", "initial_closed": true},
    {"id": "744-728", "from": "744", "to": "728", "switchable": true, "faulted": false, "ctrl_bus": "728", "initial_closed": true},
    {"id": "744-729", "from": "744", "to": "729", "switchable": true, "faulted": false, "ctrl_bus": "729", "initial_closed": true},
    {"id": "730-709", "from": "730", "to": "709", "switchable": true, "faulted": false, "ctrl_bus": "709", "initial_closed": false},
    {"id": "709-731", "from": "709", "to": "731", "switchable": true, "faulted": false, "ctrl_bus": "709", "initial_closed": true},
    {"id": "708-709", "from": "708", "to": "709", "switchable": true, "faulted": false, "ctrl_bus": "708", "initial_closed": true},
    {"id": "709-775", "from": "709", "to": "775", "switchable": true, "faulted": false, "ctrl_bus": "775", "initial_closed": true},
    {"id": "708-733", "from": "708", "to": "733", "switchable": true, "faulted": false, "ctrl_bus": "708", "initial_closed": true},
    {"id": "708-732", "from": "708", "to": "732", "switchable": true, "faulted": false, "ctrl_bus": "732", "initial_closed": true},
    {"id": "733-734", "from": "733", "to": "734", "switchable": true, "faulted": false, "ctrl_bus": "734", "initial_closed": true},
    {"id": "734-737", "from": "734", "to": "737", "switchable": true, "faulted": false, "ctrl_bus": "737", "initial_closed": true},
    {"id": "734-710", "from": "734", "to": "710", "switchable": true, "faulted": false, "ctrl_bus": "710", "initial_closed": false},
    {"id": "737-738", "from": "737", "to": "738", "switchable": true, "faulted": false, "ctrl_bus": "738", "initial_closed": true},
    {"id": "738-711", "from": "738", "to": "711", "switchable": true, "faulted": true, "ctrl_bus": "711", "initial_closed": false},
    {"id": "711-741", "from": "711", "to": "741", "switchable": true, "faulted": false, "ctrl_bus": "741", "initial_closed": true},
    {"id": "711-740", "from": "711", "to": "740", "switchable": true, "faulted": false, "ctrl_bus": "740", "initial_closed": true},
    {"id": "710-735", "from": "710", "to": "735", "switchable": true, "faulted": false, "ctrl_bus": "735", "initial_closed": true},
    {"id": "710-736", "from": "710", "to": "736", "switchable": true, "faulted": true, "ctrl_bus": "736", "initial_closed": false},
    {"id": "T1", "from": "713", "to": "727", "switchable": true, "faulted": false, "ctrl_bus": "727", "initial_closed": false},
    {"id": "T2", "from": "708", "to": "729", "switchable": true, "faulted": false, "ctrl_bus": "729", "initial_closed": false},
    {"id": "T3", "from": "720", "to": "742", "switchable": true, "faulted": false, "ctrl_bus": "742", "initial_closed": false}
  ]
}
)json";

inline Scenario builtin_ieee37() { return load_scenario(kIeee37Document); }

}  // namespace mgform
