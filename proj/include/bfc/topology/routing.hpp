#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "bfc/topology/topology.hpp"

namespace bfc {

struct Hop {
  NodeId node = 0;
  PortId egress = 0;
  bool operator==(const Hop&) const = default;
};

/// Path of a flow: hops[0] is the source server, the last hop is the final
/// switch; `dst` is the receiving server.
struct Route {
  std::vector<Hop> hops;
  NodeId src = 0;
  NodeId dst = 0;
};

/// Flow-level ECMP over shortest paths. Servers never act as transit nodes.
/// At a node with k equal-cost next hops the choice is
/// mix64(flow_id ^ seed) mod k, so in a two-tier Clos the spine index is
/// hash(flow) mod spines. Explicit routes override ECMP for a (src, dst) pair.
class Router {
 public:
  Router(const Topology& topo, std::uint64_t hash_seed);

  void add_explicit(const std::vector<NodeId>& path);

  Route route(NodeId src, NodeId dst, FlowId flow) const;
  /// Every route a flow from src to dst could take.
  std::vector<Route> all_routes(NodeId src, NodeId dst) const;
  /// The reverse of `r` over the same links.
  Route reverse(const Route& r) const;

  const Topology& topology() const { return topo_; }
  bool has_explicit(NodeId src, NodeId dst) const { return explicit_.count({src, dst}) != 0; }
  const std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>>& explicit_routes() const { return explicit_; }

 private:
  std::vector<PortId> next_hops(NodeId at, NodeId dst) const;
  Route from_path(const std::vector<NodeId>& path) const;

  const Topology& topo_;
  std::uint64_t seed_;
  std::vector<std::vector<std::uint32_t>> dist_;  // dist_[dst][node]
  std::map<std::pair<NodeId, NodeId>, std::vector<NodeId>> explicit_;
};

/// Round trip along the route with zero queuing and zero serialization.
SimTime base_rtt(const Topology& topo, const Route& r);

}  // namespace bfc
