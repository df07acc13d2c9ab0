#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "bfc/topology/topology.hpp"

namespace bfc {

/// Topology description as loaded from a file or a scenario config:
///
///   {"clos": {"servers_per_tor": 16, "tors": 8, "spines": 8,
///             "link_gbps": 100, "delay_ns": 1000}}
/// or
///   {"nodes": [{"name": "h0", "kind": "server"},
///              {"name": "s0", "kind": "switch", "pipeline_ns": 0}],
///    "links": [{"a": "h0", "b": "s0", "gbps": 100, "delay_ns": 1000}],
///    "routes": [["h0", "s0", "s1", "h1"]]}
///
/// Node kinds: server, tor, spine, switch. `routes` entries are explicit
/// node paths that override ECMP for their (first, last) pair.
struct TopologySpec {
  Topology topology;
  std::vector<std::vector<NodeId>> explicit_routes;
};

TopologySpec parse_topology(const nlohmann::json& j);
TopologySpec load_topology_file(const std::string& path);

}  // namespace bfc
