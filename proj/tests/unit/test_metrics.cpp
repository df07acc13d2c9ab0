#include <doctest.h>

#include <vector>

#include "bfc/metrics/fct.hpp"
#include "bfc/metrics/percentiles.hpp"
#include "bfc/metrics/time_stats.hpp"
#include "bfc/scenario/experiments.hpp"
#include "bfc/scenario/runner.hpp"
#include "support.hpp"

using namespace bfc;
using test::json;

namespace {

FlowRecord record(std::uint64_t size, SimTime fct, SimTime ideal) {
  FlowRecord r;
  r.size = size;
  r.start = 0;
  r.finish = fct;
  r.ideal_fct = ideal;
  return r;
}

json chain_scenario(std::uint64_t size) {
  json j = test::star_scenario(1, {test::flow("h0", "h1", size)});
  j["topology"] = {
      {"nodes", {test::node("h0"), test::node("h1"), test::node("a", "switch"), test::node("b", "switch")}},
      {"links", {test::link("h0", "a"), test::link("a", "b"), test::link("b", "h1")}}};
  // Periodic pause bitmaps share the wire; keep them off to time the data path alone.
  j["dataplane"]["bitmap_period_ns"] = 0;
  return j;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("ideal FCT over one link is propagation plus serialization") {
    Topology t;
    const NodeId a = t.add_node(NodeKind::server, "a");
    const NodeId b = t.add_node(NodeKind::server, "b");
    t.connect(a, b, gbps(100), kMicrosecond);
    Router r(t, 1);
    const Route rt = r.route(a, b, 1);
    CHECK(ideal_fct(1000, t, rt, 1000) == kMicrosecond + 80);
  }

  TEST_CASE("ideal FCT of a huge flow approaches size over rate") {
    const Topology t = build_clos(2, 2, 1, gbps(100), kMicrosecond);
    Router r(t, 1);
    const Route rt = r.route(t.require("h0"), t.require("h3"), 1);
    const std::uint64_t size = 10'000'000'000ULL;
    const double ratio =
        static_cast<double>(ideal_fct(size, t, rt, 1000)) / static_cast<double>(serialization_time(size, gbps(100)));
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("ideal FCT on a three-link path matches an empty-network run exactly") {
    // Three 1 us hops plus three serializations of the single packet.
    const ScenarioConfig cfg = parse_scenario(chain_scenario(1000));
    const RunResult r = run_scenario(cfg);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].ideal_fct == 3 * kMicrosecond + 3 * 80);
    CHECK(r.records[0].fct() == r.records[0].ideal_fct);

    const RunResult big = run_scenario(parse_scenario(chain_scenario(100'000)));
    CHECK(big.records[0].fct() == big.records[0].ideal_fct);

    // With bitmaps on, each one can delay the flow by at most its own serialization.
    json with_bitmaps = chain_scenario(100'000);
    with_bitmaps["dataplane"].erase("bitmap_period_ns");
    const FlowRecord f = run_scenario(parse_scenario(with_bitmaps)).records.at(0);
    const SimTime bitmaps = f.fct() / kMicrosecond + 1;
    CHECK(f.fct() >= f.ideal_fct);
    CHECK(f.fct() <= f.ideal_fct + bitmaps * serialization_time(64, gbps(100)));
  }

  TEST_CASE("ideal FCT uses the slowest link for the bulk of the flow") {
    json j = chain_scenario(10'000);
    j["topology"]["links"][1]["gbps"] = 25;
    const RunResult r = run_scenario(parse_scenario(j));
    // 10 KB at 25 Gbps, plus one packet at each 100 Gbps hop, plus 3 us.
    CHECK(r.records[0].ideal_fct == 3 * kMicrosecond + 3200 + 2 * 80);
    CHECK(r.records[0].fct() == r.records[0].ideal_fct);
  }

  TEST_CASE("nearest-rank percentile") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    CHECK(*nearest_rank(v, 99) == 100);
    CHECK(*nearest_rank(v, 50) == 51);
    CHECK(*nearest_rank(v, 100) == 100);
    CHECK(*nearest_rank(v, 0) == 1);
    CHECK(*nearest_rank({3.0}, 99) == 3.0);
    CHECK_FALSE(nearest_rank({}, 50).has_value());
  }

  TEST_CASE("all-ones slowdowns give a table of ones") {
    std::vector<FlowRecord> recs;
    for (std::uint64_t s : {500, 2000, 50'000, 2'000'000}) recs.push_back(record(s, 1000, 1000));
    const auto table = slowdown_table(recs, default_size_buckets());
    CHECK_FALSE(table.empty());
    for (const SlowdownRow& row : table) {
      CHECK(row.avg == 1.0);
      CHECK(row.p95 == 1.0);
      CHECK(row.p99 == 1.0);
    }
  }

  TEST_CASE("buckets are independent and empty buckets are absent") {
    std::vector<FlowRecord> recs;
    for (int i = 0; i < 10; ++i) recs.push_back(record(100, 2000, 1000));
    for (int i = 0; i < 10; ++i) recs.push_back(record(100'000, 5000, 1000));
    const std::vector<std::uint64_t> edges = {0, 1000, 10'000, 1'000'000};
    const auto table = slowdown_table(recs, edges);
    REQUIRE(table.size() == 2);
    CHECK(table[0].size_lo == 0);
    CHECK(table[0].avg == 2.0);
    CHECK(table[0].count == 10);
    CHECK(table[1].size_lo == 10'000);
    CHECK(table[1].avg == 5.0);
    CHECK_FALSE(slowdown_summary(recs, 1000, 10'000).has_value());
  }

  TEST_CASE("time histogram weights values by duration") {
    TimeHistogram h;
    h.set(0, 1);
    h.set(30, 3);
    h.set(40, 0);
    h.accumulate(100);
    const auto& w = h.weights();
    CHECK(w[0] == 60);
    CHECK(w[1] == 30);
    CHECK(w[3] == 10);
    CHECK(histogram_mean(w) == doctest::Approx((30.0 + 30.0) / 100.0));
    CHECK(histogram_fraction_below(w, 1) == doctest::Approx(0.6));
    CHECK(histogram_percentile(w, 50) == 0);
    CHECK(histogram_percentile(w, 95) == 3);
  }

  TEST_CASE("every completed flow has slowdown at least one") {
    json j = test::star_scenario(5, json::array());
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 5; ++k) {
        j["workload"]["flows"].push_back(
            test::flow("h" + std::to_string(i), "h4", 3000 + 7919 * k, 13'000 * k + 100 * i));
      }
    }
    const RunResult r = run_scenario(parse_scenario(j));
    CHECK(r.records.size() == 20);
    for (const FlowRecord& f : r.records) CHECK(f.slowdown() >= 0.999);
  }

  TEST_CASE("link utilization stays in [0, 1] and matches one backlogged flow") {
    json j = test::star_scenario(2, {test::flow("h0", "h1", 10'000'000)});
    j["run"] = {{"max_time_ns", 500'000}, {"drain", false}, {"warmup_ns", 100'000}};
    j["dataplane"]["bitmap_period_ns"] = 0;
    j["metrics"] = {{"watch_ports", {{{"from", "sw"}, {"to", "h1"}}}}};
    const RunResult r = run_scenario(parse_scenario(j));
    const double u = r.summary["ports"][0]["utilization"];
    CHECK(u <= 1.0);
    CHECK(u == doctest::Approx(1.0).epsilon(0.001));
  }

  TEST_CASE("conservation balances with packets still in flight") {
    json j = test::star_scenario(3, {test::flow("h0", "h2", 5'000'000), test::flow("h1", "h2", 5'000'000)});
    j["run"] = {{"max_time_ns", 123'456}, {"drain", false}};
    const RunResult r = run_scenario(parse_scenario(j));
    CHECK(r.conservation.balanced());
    CHECK(r.conservation.resident + r.conservation.in_transit > 0);
    CHECK(r.records.empty());
  }

  TEST_CASE("mean active flows under Poisson load 0.75 is close to 3") {
    const json j = experiments::active_flows_scenario(0.75, 3);
    const RunResult r = run_scenario(parse_scenario(j, BFC_DATA_DIR));
    const double mean = r.summary["ports"][0]["mean_active_flows"];
    MESSAGE("mean active flows " << mean);
    CHECK(mean == doctest::Approx(3.0).epsilon(0.15));
  }
}
