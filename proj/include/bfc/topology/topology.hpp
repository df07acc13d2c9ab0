#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bfc/packet.hpp"
#include "bfc/sim/time.hpp"

namespace bfc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { server, tor, spine, generic_switch };

const char* to_string(NodeKind k);
NodeKind node_kind_from_string(std::string_view s);

inline bool is_switch(NodeKind k) { return k != NodeKind::server; }

/// Layer of a node in a tiered topology, or -1 when the node has none.
int layer_of(NodeKind k);

struct PortRef {
  NodeId node = 0;
  PortId port = 0;
  bool operator==(const PortRef&) const = default;
};

/// Full-duplex link; each direction is an independent transmitter.
struct Link {
  PortRef a;
  PortRef b;
  BitRate rate = 0;
  SimTime prop_delay = 0;
};

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::server;
  std::string name;
  SimTime pipeline_latency = 0;
  std::vector<std::uint32_t> port_links;  // port id -> link index
};

struct ClosShape {
  std::uint32_t servers_per_tor = 0;
  std::uint32_t tors = 0;
  std::uint32_t spines = 0;
  BitRate link_rate = 0;
};

class Topology {
 public:
  NodeId add_node(NodeKind kind, std::string name, SimTime pipeline_latency = 0);
  /// Connects a fresh port on `a` to a fresh port on `b`. Returns the link index.
  std::uint32_t connect(NodeId a, NodeId b, BitRate rate, SimTime prop_delay);

  const Node& node(NodeId id) const { return nodes_.at(id); }
  Node& node(NodeId id) { return nodes_.at(id); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t size() const { return nodes_.size(); }

  const Link& link_at(NodeId n, PortId p) const { return links_.at(nodes_.at(n).port_links.at(p)); }
  PortRef peer(NodeId n, PortId p) const;
  BitRate port_rate(NodeId n, PortId p) const { return link_at(n, p).rate; }
  std::size_t port_count(NodeId n) const { return nodes_.at(n).port_links.size(); }
  /// Port on `from` whose link reaches `to`, if any (first match).
  std::optional<PortId> port_towards(NodeId from, NodeId to) const;

  std::optional<NodeId> find(std::string_view name) const;
  NodeId require(std::string_view name) const;
  std::vector<NodeId> servers() const;

  /// One-way latency of the hop leaving (n, p): propagation plus the
  /// receiving node's pipeline latency.
  SimTime one_way_delay(NodeId n, PortId p) const;
  /// One-hop round trip over the link at (n, p).
  SimTime hop_rtt(NodeId n, PortId p) const;
  SimTime hop_rtt(const Link& link) const;

  const std::optional<ClosShape>& clos() const { return clos_; }
  void set_clos(ClosShape shape) { clos_ = shape; }

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::optional<ClosShape> clos_;
};

/// Two-tier leaf-spine: every server attaches to one ToR, every ToR to every
/// spine. Servers are named h<i>, ToRs t<i>, spines s<i>. ToR ports
/// [0, servers_per_tor) face servers, the rest face spines in spine order.
Topology build_clos(std::uint32_t servers_per_tor, std::uint32_t tors, std::uint32_t spines, BitRate link_rate,
                    SimTime prop_delay);

double oversubscription(const Topology& topo);

}  // namespace bfc
