#include "bfc/analysis/deadlock.hpp"

#include <algorithm>
#include <functional>

namespace bfc {

using Vertex = BackpressureGraph::Vertex;

Vertex BackpressureGraph::vertex(NodeId node, PortId egress) {
  auto [it, inserted] = index_.try_emplace({node, egress}, static_cast<Vertex>(ports_.size()));
  if (inserted) ports_.push_back({node, egress});
  return it->second;
}

void BackpressureGraph::add_edge(Vertex from, Vertex to, ElideEntry cut) { edges_.try_emplace({from, to}, cut); }

std::vector<std::vector<Vertex>> BackpressureGraph::adjacency(
    const std::set<std::pair<Vertex, Vertex>>& removed) const {
  std::vector<std::vector<Vertex>> adj(ports_.size());
  for (const auto& [e, cut] : edges_) {
    if (!removed.count(e)) adj[e.first].push_back(e.second);
  }
  return adj;
}

BackpressureGraph build_backpressure_graph(const Topology& topo, const std::vector<Route>& routes) {
  BackpressureGraph g;
  for (const Route& r : routes) {
    for (std::size_t i = 1; i + 1 < r.hops.size(); ++i) {
      const Hop& a = r.hops[i];
      const Hop& b = r.hops[i + 1];
      if (!is_switch(topo.node(a.node).kind) || !is_switch(topo.node(b.node).kind)) continue;
      const Vertex va = g.vertex(a.node, a.egress);
      const Vertex vb = g.vertex(b.node, b.egress);
      const PortId ingress = topo.peer(a.node, a.egress).port;
      g.add_edge(vb, va, ElideEntry{b.node, ingress, b.egress});
    }
  }
  return g;
}

std::vector<Route> all_server_routes(const Router& router) {
  std::vector<Route> out;
  const auto servers = router.topology().servers();
  for (NodeId s : servers) {
    for (NodeId d : servers) {
      if (s == d) continue;
      auto rs = router.all_routes(s, d);
      out.insert(out.end(), rs.begin(), rs.end());
    }
  }
  return out;
}

std::vector<std::vector<Vertex>> strongly_connected_components(const std::vector<std::vector<Vertex>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::uint32_t kUnvisited = ~std::uint32_t{0};
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> out;
  std::uint32_t counter = 0;

  // Iterative Tarjan to keep deep graphs off the call stack.
  struct Frame {
    Vertex v;
    std::size_t next;
  };
  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < adj[f.v].size()) {
        const Vertex w = adj[f.v][f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const Vertex v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<Vertex> comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

bool has_cycle(const std::vector<std::vector<Vertex>>& adj) {
  for (Vertex v = 0; v < adj.size(); ++v) {
    if (std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end()) return true;
  }
  for (const auto& c : strongly_connected_components(adj)) {
    if (c.size() > 1) return true;
  }
  return false;
}

namespace {

std::set<std::pair<Vertex, Vertex>> cyclic_edges(const BackpressureGraph& g,
                                                 const std::set<std::pair<Vertex, Vertex>>& removed) {
  const auto adj = g.adjacency(removed);
  std::vector<std::size_t> comp_of(adj.size(), 0);
  const auto comps = strongly_connected_components(adj);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (Vertex v : comps[c]) comp_of[v] = c;
  }
  std::set<std::pair<Vertex, Vertex>> out;
  for (Vertex v = 0; v < adj.size(); ++v) {
    for (Vertex w : adj[v]) {
      if (comp_of[v] == comp_of[w]) out.insert({v, w});
    }
  }
  return out;
}

// Back edges of a DFS visiting vertices and neighbours in ascending order.
std::vector<std::pair<Vertex, Vertex>> back_edges(std::vector<std::vector<Vertex>> adj) {
  for (auto& a : adj) std::sort(a.begin(), a.end());
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> color(adj.size(), kWhite);
  std::vector<std::pair<Vertex, Vertex>> out;
  for (Vertex root = 0; root < adj.size(); ++root) {
    if (color[root] != kWhite) continue;
    std::vector<std::pair<Vertex, std::size_t>> frames{{root, 0}};
    color[root] = kGrey;
    while (!frames.empty()) {
      auto& [v, next] = frames.back();
      if (next < adj[v].size()) {
        const Vertex w = adj[v][next++];
        if (color[w] == kGrey) {
          out.emplace_back(v, w);
        } else if (color[w] == kWhite) {
          color[w] = kGrey;
          frames.emplace_back(w, 0);
        }
        continue;
      }
      color[v] = kBlack;
      frames.pop_back();
    }
  }
  return out;
}

}  // namespace

std::vector<ElideEntry> edges_to_elide(const BackpressureGraph& g, const Topology& topo) {
  std::set<std::pair<Vertex, Vertex>> removed;
  // An edge B -> A is a valley when the packet came down from A's switch to
  // B's switch and leaves B towards a higher layer.
  for (const auto& e : cyclic_edges(g, removed)) {
    const Hop& a = g.port(e.second);
    const Hop& b = g.port(e.first);
    const int la = layer_of(topo.node(a.node).kind);
    const int lb = layer_of(topo.node(b.node).kind);
    const int lc = layer_of(topo.node(topo.peer(b.node, b.egress).node).kind);
    if (la >= 0 && lb >= 0 && lc >= 0 && la > lb && lc > lb) removed.insert(e);
  }
  for (const auto& e : back_edges(g.adjacency(removed))) removed.insert(e);

  std::vector<ElideEntry> out;
  for (const auto& e : removed) out.push_back(g.edges().at(e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace bfc
