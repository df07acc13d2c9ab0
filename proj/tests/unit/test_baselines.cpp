#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <string>

#include "bfc/analysis/queueing.hpp"
#include "bfc/baselines/assigners.hpp"
#include "bfc/scenario/runner.hpp"
#include "bfc/switch/switch.hpp"
#include "support.hpp"

using namespace bfc;
using test::json;

namespace {

// h0 -> s1 -> s2 -> {h1, h3}; h2 also feeds h1 through s2.
json hol_topology() {
  json t = {{"nodes",
             {test::node("h0"), test::node("h1"), test::node("h2"), test::node("h3"), test::node("s1", "switch"),
              test::node("s2", "switch")}},
            {"links",
             {test::link("h0", "s1"), test::link("s1", "s2"), test::link("s2", "h1"), test::link("h2", "s2"),
              test::link("s2", "h3")}}};
  return t;
}

json hol_scenario(const char* dataplane) {
  json j = test::star_scenario(1, json::array(), dataplane);
  j["topology"] = hol_topology();
  j["workload"]["flows"] = {test::flow("h0", "h1", 2'000'000), test::flow("h2", "h1", 2'000'000),
                            test::flow("h0", "h3", 2'000'000)};
  return j;
}

SimTime fct_of(const RunResult& r, NodeId src, NodeId dst) {
  for (const FlowRecord& f : r.records) {
    if (f.src == src && f.dst == dst) return f.fct();
  }
  FAIL("flow not found");
  return 0;
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("hash assignment picks the same queue index at every switch") {
    json j = test::star_scenario(1, json::array(), "sfq_strawman");
    j["topology"] = {
        {"nodes", {test::node("h0"), test::node("h1"), test::node("a", "switch"), test::node("b", "switch")}},
        {"links", {test::link("h0", "a"), test::link("a", "b"), test::link("b", "h1")}}};
    for (int i = 0; i < 6; ++i) j["workload"]["flows"].push_back(test::flow("h0", "h1", 3000, i * 10'000));
    std::ostringstream trace;
    RunOptions opts;
    opts.trace = &trace;
    run_scenario(parse_scenario(j), opts);

    // fid -> queue per switch, from the enqueue trace lines.
    std::map<std::string, std::set<std::string>> queues;
    std::istringstream in(trace.str());
    std::string line;
    int enq = 0;
    while (std::getline(in, line)) {
      if (line.find("op=enq") == std::string::npos) continue;
      ++enq;
      auto field = [&](const char* k) {
        const auto at = line.find(k) + std::string(k).size();
        return line.substr(at, line.find(' ', at) - at);
      };
      queues[field("fid=")].insert(field("q="));
    }
    CHECK(enq == 6 * 3 * 2);
    CHECK(queues.size() == 6);
    for (const auto& [fid, qs] : queues) CHECK(qs.size() == 1);
  }

  TEST_CASE("hash assignment of 5 flows onto 32 queues collides 28% of the time") {
    constexpr int kTrials = 20'000;
    Rng rng(5);
    int hits = 0;
    for (int t = 0; t < kTrials; ++t) {
      const std::uint64_t salt = rng.next();
      std::set<std::uint32_t> qs;
      for (int f = 0; f < 5; ++f) qs.insert(sfq_queue(rng.next(), salt, 32));
      if (qs.size() < 5) ++hits;
    }
    const double freq = static_cast<double>(hits) / kTrials;
    CHECK(freq == doctest::Approx(birthday_collision_prob(5, 32)).epsilon(0.05));
    CHECK(freq == doctest::Approx(0.28).epsilon(0.1));
  }

  TEST_CASE("one queue means every flow shares it") {
    for (FlowId f = 1; f < 100; ++f) CHECK(sfq_queue(f, 123, 1) == 0);
  }

  TEST_CASE("single queue stalls an uncongested flow behind a congested one") {
    const ScenarioConfig single = parse_scenario(hol_scenario("single_queue_pfc"));
    const ScenarioConfig dynamic = parse_scenario(hol_scenario("bfc"));
    const RunResult rs = run_scenario(single);
    const RunResult rd = run_scenario(dynamic);
    const Topology& t = single.topology.topology;
    const SimTime victim_single = fct_of(rs, t.require("h0"), t.require("h3"));
    const SimTime victim_dynamic = fct_of(rd, t.require("h0"), t.require("h3"));
    MESSAGE("victim FCT single " << victim_single << " ns, dynamic " << victim_dynamic << " ns");
    CHECK(victim_single > victim_dynamic * 1.2);
  }

  TEST_CASE("single queue with one flow matches BFC") {
    json j = test::star_scenario(2, {test::flow("h0", "h1", 1'000'000)}, "single_queue_pfc");
    const RunResult single = run_scenario(parse_scenario(j));
    j["dataplane"]["kind"] = "bfc";
    const RunResult dynamic = run_scenario(parse_scenario(j));
    CHECK(single.records.at(0).fct() == dynamic.records.at(0).fct());
  }

  TEST_CASE("ideal FQ splits a link evenly between backlogged flows") {
    json j = test::star_scenario(5, json::array(), "ideal_fq");
    for (int i = 0; i < 4; ++i) j["workload"]["flows"].push_back(test::flow("h" + std::to_string(i), "h4", 1'000'000));
    j["metrics"] = {{"watch_ports", {{{"from", "sw"}, {"to", "h4"}}}}};
    const RunResult r = run_scenario(parse_scenario(j));
    REQUIRE(r.records.size() == 4);
    const SimTime alone = serialization_time(1'000'000, gbps(100));
    for (const FlowRecord& f : r.records) {
      CHECK(static_cast<double>(f.fct()) == doctest::Approx(4.0 * alone).epsilon(0.03));
    }
    CHECK(r.summary["switches"]["pauses"] == 0);
    CHECK(r.summary["switches"]["drops"] == 0);
  }

  TEST_CASE("ideal FQ buffer grows past any finite switch buffer under incast") {
    json j = test::star_scenario(101, json::array(), "ideal_fq");
    for (int i = 0; i < 100; ++i)
      j["workload"]["flows"].push_back(test::flow("h" + std::to_string(i), "h100", 200'000));
    j["nic"] = {{"bdp_inflight_cap", false}};
    const RunResult r = run_scenario(parse_scenario(j));
    CHECK(r.records.size() == 100);
    CHECK(r.summary["switches"]["drops"] == 0);
    CHECK(r.summary["switches"]["peak_buffer_bytes"].get<std::uint64_t>() > 12'000'000);
  }

  TEST_CASE("ideal FQ single flow on an empty network has slowdown 1") {
    const RunResult r =
        run_scenario(parse_scenario(test::star_scenario(2, {test::flow("h0", "h1", 1000)}, "ideal_fq")));
    CHECK(r.records.at(0).slowdown() == 1.0);
  }

  TEST_CASE("strawman pauses at a fixed BDP regardless of active queues") {
    NetworkConfig cfg;
    cfg.dataplane.kind = Dataplane::sfq_strawman;
    test::Rig rig(test::star_topology(2), cfg);
    const Switch* sw = rig.net->switch_at(rig.id("sw"));
    CHECK(sw->pause_threshold(0, 1) == 25'000);
    CHECK(sw->pause_threshold(0, 8) == 25'000);
  }
}
