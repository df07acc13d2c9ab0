#include "bfc/topology/topology.hpp"

#include <algorithm>

namespace bfc {

const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::server:
      return "server";
    case NodeKind::tor:
      return "tor";
    case NodeKind::spine:
      return "spine";
    case NodeKind::generic_switch:
      return "switch";
  }
  return "?";
}

NodeKind node_kind_from_string(std::string_view s) {
  if (s == "server" || s == "host") return NodeKind::server;
  if (s == "tor") return NodeKind::tor;
  if (s == "spine") return NodeKind::spine;
  if (s == "switch") return NodeKind::generic_switch;
  throw ConfigError("unknown node kind '" + std::string(s) + "'");
}

int layer_of(NodeKind k) {
  switch (k) {
    case NodeKind::server:
      return 0;
    case NodeKind::tor:
      return 1;
    case NodeKind::spine:
      return 2;
    case NodeKind::generic_switch:
      return -1;
  }
  return -1;
}

NodeId Topology::add_node(NodeKind kind, std::string name, SimTime pipeline_latency) {
  if (find(name)) throw ConfigError("duplicate node name '" + name + "'");
  Node n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.kind = kind;
  n.name = std::move(name);
  n.pipeline_latency = pipeline_latency;
  nodes_.push_back(std::move(n));
  return nodes_.back().id;
}

std::uint32_t Topology::connect(NodeId a, NodeId b, BitRate rate, SimTime prop_delay) {
  if (rate == 0) throw ConfigError("link rate must be positive");
  if (a == b) throw ConfigError("self-loop link on '" + nodes_.at(a).name + "'");
  const auto index = static_cast<std::uint32_t>(links_.size());
  Link l;
  l.a = {a, static_cast<PortId>(nodes_.at(a).port_links.size())};
  l.b = {b, static_cast<PortId>(nodes_.at(b).port_links.size())};
  l.rate = rate;
  l.prop_delay = prop_delay;
  nodes_[a].port_links.push_back(index);
  nodes_[b].port_links.push_back(index);
  links_.push_back(l);
  return index;
}

PortRef Topology::peer(NodeId n, PortId p) const {
  const Link& l = link_at(n, p);
  return (l.a.node == n && l.a.port == p) ? l.b : l.a;
}

std::optional<PortId> Topology::port_towards(NodeId from, NodeId to) const {
  for (PortId p = 0; p < port_count(from); ++p) {
    if (peer(from, p).node == to) return p;
  }
  return std::nullopt;
}

std::optional<NodeId> Topology::find(std::string_view name) const {
  for (const Node& n : nodes_) {
    if (n.name == name) return n.id;
  }
  return std::nullopt;
}

NodeId Topology::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw ConfigError("unknown node '" + std::string(name) + "'");
}

std::vector<NodeId> Topology::servers() const {
  std::vector<NodeId> out;
  for (const Node& n : nodes_) {
    if (n.kind == NodeKind::server) out.push_back(n.id);
  }
  return out;
}

SimTime Topology::one_way_delay(NodeId n, PortId p) const {
  return link_at(n, p).prop_delay + nodes_.at(peer(n, p).node).pipeline_latency;
}

SimTime Topology::hop_rtt(NodeId n, PortId p) const {
  const PortRef other = peer(n, p);
  return one_way_delay(n, p) + one_way_delay(other.node, other.port);
}

SimTime Topology::hop_rtt(const Link& link) const { return hop_rtt(link.a.node, link.a.port); }

Topology build_clos(std::uint32_t servers_per_tor, std::uint32_t tors, std::uint32_t spines, BitRate link_rate,
                    SimTime prop_delay) {
  if (servers_per_tor == 0 || tors == 0 || spines == 0) {
    throw ConfigError("clos counts must all be >= 1");
  }
  Topology t;
  std::vector<NodeId> servers;
  std::vector<NodeId> tor_ids;
  std::vector<NodeId> spine_ids;
  for (std::uint32_t i = 0; i < servers_per_tor * tors; ++i) {
    servers.push_back(t.add_node(NodeKind::server, "h" + std::to_string(i)));
  }
  for (std::uint32_t i = 0; i < tors; ++i) tor_ids.push_back(t.add_node(NodeKind::tor, "t" + std::to_string(i)));
  for (std::uint32_t i = 0; i < spines; ++i) {
    spine_ids.push_back(t.add_node(NodeKind::spine, "s" + std::to_string(i)));
  }
  for (std::uint32_t r = 0; r < tors; ++r) {
    for (std::uint32_t k = 0; k < servers_per_tor; ++k) {
      t.connect(tor_ids[r], servers[r * servers_per_tor + k], link_rate, prop_delay);
    }
  }
  for (std::uint32_t r = 0; r < tors; ++r) {
    for (std::uint32_t s = 0; s < spines; ++s) t.connect(tor_ids[r], spine_ids[s], link_rate, prop_delay);
  }
  t.set_clos({servers_per_tor, tors, spines, link_rate});
  return t;
}

double oversubscription(const Topology& topo) {
  const auto& c = topo.clos();
  if (!c) return 1.0;
  return static_cast<double>(c->servers_per_tor) / static_cast<double>(c->spines);
}

}  // namespace bfc
