#include "bfc/topology/routing.hpp"

#include <deque>
#include <functional>
#include <limits>

#include "bfc/sim/rng.hpp"

namespace bfc {
namespace {
constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();
}

Router::Router(const Topology& topo, std::uint64_t hash_seed) : topo_(topo), seed_(hash_seed) {
  const std::size_t n = topo.size();
  dist_.assign(n, std::vector<std::uint32_t>(n, kUnreachable));
  for (NodeId dst = 0; dst < n; ++dst) {
    auto& d = dist_[dst];
    std::deque<NodeId> frontier{dst};
    d[dst] = 0;
    while (!frontier.empty()) {
      const NodeId x = frontier.front();
      frontier.pop_front();
      if (x != dst && !is_switch(topo.node(x).kind)) continue;
      for (PortId p = 0; p < topo.port_count(x); ++p) {
        const NodeId y = topo.peer(x, p).node;
        if (d[y] == kUnreachable) {
          d[y] = d[x] + 1;
          frontier.push_back(y);
        }
      }
    }
  }
}

void Router::add_explicit(const std::vector<NodeId>& path) {
  if (path.size() < 2) throw ConfigError("explicit route needs at least two nodes");
  from_path(path);  // validates adjacency
  explicit_[{path.front(), path.back()}] = path;
}

std::vector<PortId> Router::next_hops(NodeId at, NodeId dst) const {
  std::vector<PortId> out;
  const auto& d = dist_[dst];
  if (d[at] == kUnreachable || d[at] == 0) return out;
  for (PortId p = 0; p < topo_.port_count(at); ++p) {
    const NodeId v = topo_.peer(at, p).node;
    if (d[v] + 1 != d[at]) continue;
    if (v != dst && !is_switch(topo_.node(v).kind)) continue;
    out.push_back(p);
  }
  return out;
}

Route Router::from_path(const std::vector<NodeId>& path) const {
  Route r;
  r.src = path.front();
  r.dst = path.back();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    auto port = topo_.port_towards(path[i], path[i + 1]);
    if (!port) {
      throw ConfigError("route hop " + topo_.node(path[i]).name + " -> " + topo_.node(path[i + 1]).name +
                        " has no link");
    }
    r.hops.push_back({path[i], *port});
  }
  return r;
}

Route Router::route(NodeId src, NodeId dst, FlowId flow) const {
  if (src == dst) throw ConfigError("route source equals destination");
  if (auto it = explicit_.find({src, dst}); it != explicit_.end()) return from_path(it->second);
  const std::uint64_t h = mix64(flow ^ seed_);
  Route r;
  r.src = src;
  r.dst = dst;
  NodeId at = src;
  while (at != dst) {
    const auto choices = next_hops(at, dst);
    if (choices.empty()) {
      throw ConfigError("no path from " + topo_.node(src).name + " to " + topo_.node(dst).name);
    }
    const PortId p = choices[h % choices.size()];
    r.hops.push_back({at, p});
    at = topo_.peer(at, p).node;
  }
  return r;
}

std::vector<Route> Router::all_routes(NodeId src, NodeId dst) const {
  if (auto it = explicit_.find({src, dst}); it != explicit_.end()) return {from_path(it->second)};
  std::vector<Route> out;
  Route partial;
  partial.src = src;
  partial.dst = dst;
  std::function<void(NodeId)> walk = [&](NodeId at) {
    if (at == dst) {
      out.push_back(partial);
      return;
    }
    for (PortId p : next_hops(at, dst)) {
      partial.hops.push_back({at, p});
      walk(topo_.peer(at, p).node);
      partial.hops.pop_back();
    }
  };
  walk(src);
  return out;
}

Route Router::reverse(const Route& r) const {
  Route back;
  back.src = r.dst;
  back.dst = r.src;
  NodeId at = r.dst;
  for (auto it = r.hops.rbegin(); it != r.hops.rend(); ++it) {
    const PortRef far = topo_.peer(it->node, it->egress);
    if (far.node != at) throw ConfigError("route is not contiguous");
    back.hops.push_back({far.node, far.port});
    at = it->node;
  }
  return back;
}

SimTime base_rtt(const Topology& topo, const Route& r) {
  SimTime total = 0;
  for (const Hop& h : r.hops) total += topo.hop_rtt(h.node, h.egress);
  return total;
}

}  // namespace bfc
