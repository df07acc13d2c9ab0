#include <doctest.h>

#include <algorithm>
#include <vector>

#include "bfc/topology/routing.hpp"
#include "bfc/topology/topology.hpp"
#include "bfc/topology/topology_io.hpp"
#include "support.hpp"

using namespace bfc;

TEST_SUITE("topology") {
  TEST_CASE("16x8x8 Clos has 128 servers, 2:1 oversubscription and an 8 us max base RTT") {
    const Topology t = build_clos(16, 8, 8, gbps(100), kMicrosecond);
    CHECK(t.servers().size() == 128);
    CHECK(oversubscription(t) == doctest::Approx(2.0));
    for (const Link& l : t.links()) CHECK(t.hop_rtt(l) == 2 * kMicrosecond);

    Router r(t, 5);
    SimTime max_rtt = 0;
    const auto servers = t.servers();
    for (NodeId dst : servers) {
      if (dst != servers[0]) max_rtt = std::max(max_rtt, base_rtt(t, r.route(servers[0], dst, 1)));
    }
    CHECK(max_rtt == 8 * kMicrosecond);
  }

  TEST_CASE("1x1x1 Clos is one server under two switches") {
    const Topology t = build_clos(1, 1, 1, gbps(100), kMicrosecond);
    CHECK(t.servers().size() == 1);
    CHECK(t.size() == 3);
    CHECK(t.links().size() == 2);
  }

  TEST_CASE("cross-rack path crosses five links") {
    const Topology t = build_clos(2, 2, 1, gbps(100), kMicrosecond);
    Router r(t, 1);
    const Route rt = r.route(t.require("h0"), t.require("h2"), 1);
    // Hops leave h0, ToR, spine and ToR; the last hop's link reaches h2.
    CHECK(rt.hops.size() + 1 == 5);
    CHECK(t.node(rt.hops[2].node).kind == NodeKind::spine);
    CHECK(base_rtt(t, rt) == 8 * kMicrosecond);
  }

  TEST_CASE("same-ToR route stays under the ToR") {
    const Topology t = build_clos(2, 2, 1, gbps(100), kMicrosecond);
    Router r(t, 1);
    const Route rt = r.route(t.require("h0"), t.require("h1"), 1);
    REQUIRE(rt.hops.size() == 2);
    CHECK(t.node(rt.hops[1].node).kind == NodeKind::tor);
    CHECK(base_rtt(t, rt) == 4 * kMicrosecond);
  }

  TEST_CASE("ECMP spreads 10000 flows evenly over 8 spines") {
    const Topology t = build_clos(16, 8, 8, gbps(100), kMicrosecond);
    Router r(t, 77);
    std::vector<int> per_spine(8, 0);
    const NodeId a = t.require("h0");
    const NodeId b = t.require("h100");
    for (FlowId f = 1; f <= 10'000; ++f) {
      const Route rt = r.route(a, b, f);
      const std::string& spine = t.node(rt.hops[2].node).name;
      ++per_spine.at(std::stoul(spine.substr(1)));
    }
    double chi2 = 0.0;
    for (int c : per_spine) chi2 += (c - 1250.0) * (c - 1250.0) / 1250.0;
    // 7 degrees of freedom, upper 0.1% point.
    CHECK(chi2 < 24.32);
  }

  TEST_CASE("routes are deterministic and up-down") {
    const Topology t = build_clos(4, 4, 2, gbps(100), kMicrosecond);
    Router r1(t, 3);
    Router r2(t, 3);
    for (NodeId s : t.servers()) {
      for (NodeId d : t.servers()) {
        if (s == d) continue;
        for (FlowId f : {1, 2, 3}) {
          const Route a = r1.route(s, d, f);
          CHECK(a.hops == r2.route(s, d, f).hops);
          bool went_down = false;
          for (std::size_t i = 1; i < a.hops.size(); ++i) {
            const int here = layer_of(t.node(a.hops[i].node).kind);
            const int next = i + 1 < a.hops.size() ? layer_of(t.node(a.hops[i + 1].node).kind) : 0;
            if (next < here) went_down = true;
            CHECK_FALSE((went_down && next > here));
          }
        }
      }
    }
  }

  TEST_CASE("empty route has zero RTT and pipeline latency counts both ways") {
    Topology t;
    const NodeId a = t.add_node(NodeKind::server, "a");
    const NodeId s = t.add_node(NodeKind::generic_switch, "s", 100);
    t.connect(a, s, gbps(100), kMicrosecond);
    CHECK(base_rtt(t, Route{}) == 0);
    CHECK(t.hop_rtt(a, 0) == 2 * kMicrosecond + 100);
  }

  TEST_CASE("topology file with explicit routes and bad references") {
    using test::json;
    json j = {{"nodes", {test::node("a"), test::node("x", "switch"), test::node("y", "switch"), test::node("b")}},
              {"links", {test::link("a", "x"), test::link("x", "y"), test::link("y", "b"), test::link("a", "y")}},
              {"routes", {{"a", "x", "y", "b"}}}};
    const TopologySpec spec = parse_topology(j);
    Router r(spec.topology, 1);
    for (const auto& p : spec.explicit_routes) r.add_explicit(p);
    const Route rt = r.route(spec.topology.require("a"), spec.topology.require("b"), 1);
    CHECK(rt.hops.size() == 3);

    json bad = j;
    bad["links"].push_back(test::link("a", "nowhere"));
    CHECK_THROWS_AS(parse_topology(bad), ConfigError);
  }
}
