#include "bfc/topology/topology_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bfc {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown field '" + it.key() + "'");
  }
}

BitRate rate_of(const json& j, const std::string& where) {
  if (j.contains("bps")) return j.at("bps").get<BitRate>();
  if (j.contains("gbps")) return static_cast<BitRate>(j.at("gbps").get<double>() * 1e9);
  throw ConfigError(where + ": missing 'gbps'");
}

}  // namespace

TopologySpec parse_topology(const json& j) {
  if (!j.is_object()) throw ConfigError("topology: expected an object");
  TopologySpec spec;
  if (j.contains("clos")) {
    reject_unknown(j, {"clos"}, "topology");
    const json& c = j.at("clos");
    reject_unknown(c, {"servers_per_tor", "tors", "spines", "link_gbps", "delay_ns", "pipeline_ns"}, "topology.clos");
    spec.topology =
        build_clos(c.at("servers_per_tor").get<std::uint32_t>(), c.at("tors").get<std::uint32_t>(),
                   c.at("spines").get<std::uint32_t>(), static_cast<BitRate>(c.value("link_gbps", 100.0) * 1e9),
                   c.value<SimTime>("delay_ns", 1000));
    const SimTime pipeline = c.value<SimTime>("pipeline_ns", 0);
    for (NodeId n = 0; n < spec.topology.size(); ++n) {
      if (is_switch(spec.topology.node(n).kind)) spec.topology.node(n).pipeline_latency = pipeline;
    }
    return spec;
  }
  reject_unknown(j, {"nodes", "links", "routes"}, "topology");
  for (const json& n : j.at("nodes")) {
    reject_unknown(n, {"name", "kind", "pipeline_ns"}, "topology.nodes[]");
    spec.topology.add_node(node_kind_from_string(n.value("kind", "switch")), n.at("name").get<std::string>(),
                           n.value<SimTime>("pipeline_ns", 0));
  }
  for (const json& l : j.at("links")) {
    reject_unknown(l, {"a", "b", "gbps", "bps", "delay_ns"}, "topology.links[]");
    spec.topology.connect(spec.topology.require(l.at("a").get<std::string>()),
                          spec.topology.require(l.at("b").get<std::string>()), rate_of(l, "topology.links[]"),
                          l.value<SimTime>("delay_ns", 1000));
  }
  if (j.contains("routes")) {
    for (const json& r : j.at("routes")) {
      std::vector<NodeId> path;
      for (const json& name : r) path.push_back(spec.topology.require(name.get<std::string>()));
      spec.explicit_routes.push_back(std::move(path));
    }
  }
  return spec;
}

TopologySpec load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_topology(json::parse(buf.str()));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace bfc
