#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "bfc/topology/elide.hpp"
#include "bfc/topology/routing.hpp"

namespace bfc {

/// Graph whose nodes are switch egress ports. An edge B -> A exists when a
/// packet leaving egress A reaches B's switch and leaves through B, so a
/// queue at B can pause A. Each edge remembers the elide entry that would
/// cut it at B's switch.
class BackpressureGraph {
 public:
  using Vertex = std::uint32_t;

  Vertex vertex(NodeId node, PortId egress);
  std::size_t size() const { return ports_.size(); }
  const Hop& port(Vertex v) const { return ports_[v]; }
  void add_edge(Vertex from, Vertex to, ElideEntry cut);
  const std::map<std::pair<Vertex, Vertex>, ElideEntry>& edges() const { return edges_; }
  std::vector<std::vector<Vertex>> adjacency(const std::set<std::pair<Vertex, Vertex>>& removed = {}) const;

 private:
  std::vector<Hop> ports_;
  std::map<std::pair<NodeId, PortId>, Vertex> index_;
  std::map<std::pair<Vertex, Vertex>, ElideEntry> edges_;
};

/// Builds the graph from every one-hop switch-to-switch transition of the
/// given routes.
BackpressureGraph build_backpressure_graph(const Topology& topo, const std::vector<Route>& routes);
/// All routes between every ordered pair of distinct servers.
std::vector<Route> all_server_routes(const Router& router);

/// Strongly connected components, each sorted ascending; components are
/// listed in order of their smallest vertex.
std::vector<std::vector<BackpressureGraph::Vertex>> strongly_connected_components(
    const std::vector<std::vector<BackpressureGraph::Vertex>>& adj);
bool has_cycle(const std::vector<std::vector<BackpressureGraph::Vertex>>& adj);

/// Elide entries whose removal leaves the graph acyclic. Cyclic transitions
/// that come down from a higher layer and return to a higher layer are cut
/// first; any remaining cycles lose their DFS back edges.
std::vector<ElideEntry> edges_to_elide(const BackpressureGraph& g, const Topology& topo);

}  // namespace bfc
