#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bfc/analysis/deadlock.hpp"
#include "bfc/analysis/pause_model.hpp"
#include "bfc/analysis/queueing.hpp"
#include "bfc/scenario/experiments.hpp"
#include "bfc/scenario/runner.hpp"
#include "bfc/sim/rng.hpp"
#include "support.hpp"

using namespace bfc;
using test::json;

namespace {

constexpr double kHrtt = 2e-6;
constexpr double kMu = 12.5e9;  // 100 Gbps in bytes per second

EfParams params(double x, double th_over_bdp) { return {x, th_over_bdp * kHrtt * kMu, kHrtt, kMu}; }

std::size_t cyclic_components(const BackpressureGraph& g) {
  std::size_t n = 0;
  for (const auto& scc : strongly_connected_components(g.adjacency())) n += scc.size() > 1;
  return n;
}

}  // namespace

TEST_SUITE("analysis.pause_model") {
  TEST_CASE("phase times at Th = one hop BDP") {
    const EfPhases a = ef_phase_times(params(2.0, 1.0));
    CHECK(a.t1 == doctest::Approx(2 * kHrtt));
    CHECK(a.t2 == doctest::Approx(2 * kHrtt));
    CHECK(a.t3 == doctest::Approx(kHrtt));
    const EfPhases b = ef_phase_times(params(1.1, 1.0));
    CHECK(b.t1 == doctest::Approx(11 * kHrtt));
    CHECK(b.t2 == doctest::Approx(1.1 * kHrtt));
    const EfPhases c = ef_phase_times(params(2.0, 0.0));
    CHECK(c.t1 == doctest::Approx(kHrtt));
    CHECK(c.t2 == doctest::Approx(kHrtt));
  }

  TEST_CASE("idle fraction anchors") {
    CHECK(ef_fraction(params(2.0, 1.0)) == doctest::Approx(0.2));
    CHECK(ef_fraction(params(1.1, 1.0)) == doctest::Approx(0.0763).epsilon(0.001));
    CHECK(ef_fraction(params(1.0 + 1e-9, 1.0)) < 1e-8);
    CHECK_THROWS_AS(ef_fraction(params(1.0, 1.0)), ConfigError);
  }

  TEST_CASE("closed form equals t3 over the cycle for random parameters") {
    Rng rng(17);
    for (int i = 0; i < 1000; ++i) {
      const EfParams p{1.0 + 10.0 * rng.uniform() + 1e-6, 1e6 * rng.uniform(), 1e-7 + 1e-5 * rng.uniform(),
                       1e8 + 1e11 * rng.uniform()};
      const EfPhases t = ef_phase_times(p);
      CHECK(std::abs(ef_fraction(p) - t.t3 / (t.t1 + t.t2 + t.t3)) < 1e-12);
    }
  }

  TEST_CASE("maximum over x") {
    const EfMax a = ef_max(kHrtt * kMu, kHrtt, kMu);
    CHECK(a.x == doctest::Approx(2.0));
    CHECK(a.e == doctest::Approx(0.2));
    const EfMax b = ef_max(4 * kHrtt * kMu, kHrtt, kMu);
    CHECK(b.x == doctest::Approx(3.0));
    CHECK(b.e == doctest::Approx(0.1));
  }

  TEST_CASE("at Th = 0 the supremum sits at the x -> 1 boundary") {
    const EfMax m = ef_max(0.0, kHrtt, kMu);
    CHECK(m.x == 1.0);
    CHECK(m.e == doctest::Approx(0.5));
    CHECK(ef_fraction(params(1.0 + 1e-9, 0.0)) == doctest::Approx(0.5));
    CHECK(ef_fraction(params(1.001, 0.0)) < m.e);
  }

  TEST_CASE("maximum decreases in Th and dominates a grid search") {
    double prev = ef_max(0.0, kHrtt, kMu).e;
    for (double k = 0.25; k <= 16.0; k += 0.25) {
      const EfMax m = ef_max(k * kHrtt * kMu, kHrtt, kMu);
      CHECK(m.e < prev);
      prev = m.e;
      double best_x = 0.0;
      double best_e = -1.0;
      for (double x = 1.001; x < 20.0; x += 0.001) {
        const double e = ef_fraction(params(x, k));
        if (e > best_e) {
          best_e = e;
          best_x = x;
        }
      }
      CHECK(best_e <= m.e + 1e-12);
      CHECK(best_x == doctest::Approx(m.x).epsilon(0.002));
      CHECK(best_e == doctest::Approx(m.e).epsilon(1e-5));
    }
  }
}

TEST_SUITE("analysis.queueing") {
  TEST_CASE("geometric active-flow distribution") {
    CHECK(geometric_mean(0.9) == doctest::Approx(9.0));
    CHECK(geometric_mean(0.75) == doctest::Approx(3.0));
    CHECK(geometric_mean(0.0) == 0.0);
    CHECK(geometric_pmf(0.0, 0) == 1.0);
    double sum = 0.0;
    double mean = 0.0;
    for (std::uint32_t k = 0; k < 2000; ++k) {
      sum += geometric_pmf(0.9, k);
      mean += k * geometric_pmf(0.9, k);
    }
    CHECK(sum == doctest::Approx(1.0));
    CHECK(mean == doctest::Approx(9.0));
    CHECK_THROWS_AS(geometric_mean(1.0), ConfigError);
    CHECK_THROWS_AS(geometric_pmf(1.5, 0), ConfigError);
  }

  TEST_CASE("birthday collision probability") {
    CHECK(birthday_collision_prob(5, 32) == doctest::Approx(0.2798).epsilon(0.0005));
    CHECK(birthday_collision_prob(1, 32) == 0.0);
    CHECK(birthday_collision_prob(0, 32) == 0.0);
    CHECK(birthday_collision_prob(33, 32) == 1.0);
  }

  TEST_CASE("per-flow index collision fraction") {
    CHECK(index_collision_fraction(1, 3200) == 0.0);
    CHECK(index_collision_fraction(32, 3200) == doctest::Approx(0.00964).epsilon(0.01));
    CHECK(index_collision_fraction(32, 3200) < 0.01);
  }
}

TEST_SUITE("analysis.deadlock") {
  TEST_CASE("one-way two-switch chain is a path") {
    json t = {{"nodes", {test::node("h0"), test::node("h1"), test::node("a", "switch"), test::node("b", "switch")}},
              {"links", {test::link("h0", "a"), test::link("a", "b"), test::link("b", "h1")}}};
    const TopologySpec spec = parse_topology(t);
    Router r(spec.topology, 1);
    const NodeId h0 = spec.topology.require("h0");
    const NodeId h1 = spec.topology.require("h1");
    const BackpressureGraph g = build_backpressure_graph(spec.topology, {r.route(h0, h1, 1)});
    CHECK(g.size() == 2);
    CHECK(g.edges().size() == 1);
    CHECK_FALSE(has_cycle(g.adjacency()));
    CHECK(edges_to_elide(g, spec.topology).empty());
  }

  TEST_CASE("Clos with up-down routing is acyclic") {
    const Topology t = build_clos(4, 4, 2, gbps(100), kMicrosecond);
    Router r(t, 1);
    const BackpressureGraph g = build_backpressure_graph(t, all_server_routes(r));
    CHECK(g.edges().size() > 0);
    CHECK_FALSE(has_cycle(g.adjacency()));
    CHECK(edges_to_elide(g, t).empty());
  }

  TEST_CASE("three-switch ring has one cycle broken by one entry") {
    const json topo = experiments::ring_scenario({})["topology"];
    const TopologySpec spec = parse_topology(topo);
    Router r(spec.topology, 1);
    for (const auto& p : spec.explicit_routes) r.add_explicit(p);
    const BackpressureGraph g = build_backpressure_graph(spec.topology, all_server_routes(r));
    CHECK(has_cycle(g.adjacency()));
    CHECK(cyclic_components(g) == 1);
    const auto elide = edges_to_elide(g, spec.topology);
    CHECK(elide.size() == 1);

    std::set<std::pair<BackpressureGraph::Vertex, BackpressureGraph::Vertex>> removed;
    for (const auto& [edge, cut] : g.edges()) {
      if (std::find(elide.begin(), elide.end(), cut) != elide.end()) removed.insert(edge);
    }
    CHECK_FALSE(has_cycle(g.adjacency(removed)));
  }

  TEST_CASE("Clos detours are cut exactly at their down-then-up transitions") {
    const Topology t = build_clos(4, 4, 2, gbps(100), kMicrosecond);
    Router r(t, 1);
    auto path = [&](std::initializer_list<const char*> names) {
      std::vector<NodeId> p;
      for (const char* n : names) p.push_back(t.require(n));
      return p;
    };
    r.add_explicit(path({"h0", "t0", "s0", "t1", "s1", "t2", "h8"}));
    r.add_explicit(path({"h12", "t3", "s1", "t2", "s0", "t1", "h4"}));
    const BackpressureGraph g = build_backpressure_graph(t, all_server_routes(r));
    REQUIRE(has_cycle(g.adjacency()));

    auto port = [&](const char* from, const char* to) { return *t.port_towards(t.require(from), t.require(to)); };
    std::vector<ElideEntry> expect = {{t.require("t1"), port("t1", "s0"), port("t1", "s1")},
                                      {t.require("t2"), port("t2", "s1"), port("t2", "s0")}};
    std::sort(expect.begin(), expect.end());
    auto got = edges_to_elide(g, t);
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
  }

  TEST_CASE("elided ring drains and the unelided ring deadlocks") {
    const RunResult stuck = run_scenario(parse_scenario(experiments::ring_scenario({}), BFC_DATA_DIR));
    CHECK(stuck.conservation.resident > 0);
    CHECK(stuck.records.size() < stuck.flows_total);

    const RunResult ok =
        run_scenario(parse_scenario(experiments::ring_scenario(experiments::ring_elide_table()), BFC_DATA_DIR));
    CHECK(ok.records.size() == ok.flows_total);
    CHECK(ok.conservation.resident == 0);
    CHECK(ok.conservation.in_transit == 0);
  }
}
