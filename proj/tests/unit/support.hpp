#pragma once

#include <initializer_list>
#include <json.hpp>
#include <memory>
#include <string>
#include <vector>

#include "bfc/network.hpp"
#include "bfc/scenario/config.hpp"
#include "bfc/sim/event_queue.hpp"
#include "bfc/topology/routing.hpp"
#include "bfc/topology/topology_io.hpp"

namespace bfc::test {

using nlohmann::json;

inline json node(const std::string& name, const char* kind = "server") { return {{"name", name}, {"kind", kind}}; }

inline json link(const std::string& a, const std::string& b, double gbps = 100, SimTime delay = 1000) {
  return {{"a", a}, {"b", b}, {"gbps", gbps}, {"delay_ns", delay}};
}

inline json flow(const std::string& src, const std::string& dst, std::uint64_t size, SimTime start = 0) {
  return {{"src", src}, {"dst", dst}, {"size_bytes", size}, {"start_ns", start}};
}

/// Hosts h0..h<n-1> on one switch `sw`; port i of sw faces h<i>.
inline json star_topology(int hosts, double gbps = 100) {
  json t = {{"nodes", json::array()}, {"links", json::array()}};
  for (int i = 0; i < hosts; ++i) t["nodes"].push_back(node("h" + std::to_string(i)));
  t["nodes"].push_back(node("sw", "switch"));
  for (int i = 0; i < hosts; ++i) t["links"].push_back(link("sw", "h" + std::to_string(i), gbps));
  return t;
}

/// Minimal scenario on a star topology with the given flows.
inline json star_scenario(int hosts, const json& flows, const char* dataplane = "bfc") {
  return {{"name", "test"},
          {"seed", 1},
          {"topology", star_topology(hosts)},
          {"dataplane", {{"kind", dataplane}}},
          {"workload", {{"flows", flows}}},
          {"run", {{"max_time_ns", 10'000'000}, {"audit", true}}}};
}

// A braced list of one flow would otherwise collapse into the flow object.
inline json star_scenario(int hosts, std::initializer_list<json> flows, const char* dataplane = "bfc") {
  return star_scenario(hosts, json(std::vector<json>(flows)), dataplane);
}

/// A live network for scripted tests: packets can be handed to devices
/// directly and the kernel stepped by hand.
struct Rig {
  explicit Rig(const json& topology, NetworkConfig cfg = {}, std::uint64_t seed = 1)
      : spec(parse_topology(topology)), sim(seed), router(spec.topology, seed) {
    for (const auto& p : spec.explicit_routes) router.add_explicit(p);
    net = std::make_unique<Network>(sim, spec.topology, router, std::move(cfg));
  }

  NodeId id(const std::string& name) const { return spec.topology.require(name); }

  TopologySpec spec;
  Simulator sim;
  Router router;
  std::unique_ptr<Network> net;
};

}  // namespace bfc::test
