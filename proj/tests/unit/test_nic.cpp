#include <doctest.h>

#include <cmath>

#include "bfc/nic/e2e_cc.hpp"
#include "bfc/nic/nic.hpp"
#include "bfc/scenario/runner.hpp"
#include "support.hpp"

using namespace bfc;
using test::json;

namespace {

json pair_scenario(std::uint64_t size) {
  json j = test::star_scenario(2, {test::flow("h0", "h1", size)});
  j["run"]["max_time_ns"] = 5'000'000;
  return j;
}

json drop_data(SimTime after) {
  return json::array({{{"from", "h0"}, {"to", "sw"}, {"packet", "data"}, {"count", 1}, {"after_ns", after}}});
}

}  // namespace

TEST_SUITE("nic") {
  TEST_CASE("one-packet flow on an empty network has slowdown 1") {
    const RunResult r = run_scenario(parse_scenario(pair_scenario(1000)));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].fct() == r.records[0].ideal_fct);
    CHECK(r.records[0].slowdown() == 1.0);
  }

  TEST_CASE("two flows from one NIC each get at most half the link") {
    json j = test::star_scenario(3, {test::flow("h0", "h1", 1'000'000), test::flow("h0", "h2", 1'000'000)});
    const RunResult r = run_scenario(parse_scenario(j));
    REQUIRE(r.records.size() == 2);
    const SimTime full_rate = serialization_time(1'000'000, gbps(100));
    for (const FlowRecord& f : r.records) CHECK(f.fct() >= 2 * full_rate - 1000);
  }

  TEST_CASE("flow on a paused NIC queue sends nothing until resumed") {
    NetworkConfig cfg;
    cfg.dataplane.bitmap_period = 0;
    test::Rig rig(test::star_topology(2), cfg);
    Nic* nic = rig.net->nic_at(rig.id("h0"));
    Packet pause;
    pause.type = PacketType::pause;
    pause.control_queue = 0;
    nic->receive(std::move(pause), 0);
    FlowSpec f;
    f.src = rig.id("h0");
    f.dst = rig.id("h1");
    f.size = 10'000;
    rig.net->add_flow(f);
    rig.net->run(20 * kMicrosecond, false);
    CHECK(nic->stats().data_sent == 0);
    CHECK(nic->stats().timeouts == 0);

    Packet resume;
    resume.type = PacketType::resume;
    resume.control_queue = 0;
    nic->receive(std::move(resume), 0);
    rig.net->run(kMillisecond, true);
    CHECK(nic->stats().data_sent == 10);
    CHECK(rig.net->flow(1).acked);
  }

  TEST_CASE("no losses means no retransmissions") {
    const RunResult r = run_scenario(parse_scenario(pair_scenario(100'000)));
    CHECK(r.summary["flows"]["retransmitted_bytes"] == 0);
    CHECK(r.summary["flows"]["timeouts"] == 0);
  }

  TEST_CASE("Go-Back-N resends everything after a lost packet") {
    // Ten packets leave h0 every 80 ns; the one sent at 400 ns is seq 5.
    json j = pair_scenario(10'000);
    j["faults"] = drop_data(400);
    const RunResult r = run_scenario(parse_scenario(j));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].retransmitted_bytes == 5'000);
    CHECK(r.summary["flows"]["timeouts"] == 1);
    CHECK(r.summary["conservation"]["dropped"] == 1);
    // Packets 6..9 arrive once before and once after the timeout.
    CHECK(r.summary["conservation"]["delivered"] == 10 - 1 + 5);
  }

  TEST_CASE("losing the last packet resends exactly the tail after one timeout") {
    json j = pair_scenario(10'000);
    j["faults"] = drop_data(720);
    const RunResult r = run_scenario(parse_scenario(j));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].retransmitted_bytes == 1'000);
    // Timeout is 3 x base RTT (4 us) after the send at 720 ns.
    CHECK(r.records[0].finish >= 720 + 12 * kMicrosecond);
  }

  TEST_CASE("window update follows the delay rule") {
    CHECK(e2e_window_update(10.0, 1000, 1000) == 10.0);
    CHECK(e2e_window_update(10.0, 2000, 1000) == doctest::Approx(9.5));
    CHECK(e2e_window_update(10.0, 500, 1000) == doctest::Approx(11.0));
    CHECK(e2e_window_update(1.2, 100'000, 1000) == 1.0);
  }

  TEST_CASE("windowed flows start at one BDP and cap in-flight packets") {
    for (bool e2e : {false, true}) {
      NetworkConfig cfg;
      cfg.nic.e2e_cc = e2e;
      cfg.nic.bdp_inflight_cap = !e2e;
      test::Rig rig(test::star_topology(2), cfg);
      FlowSpec f;
      f.src = rig.id("h0");
      f.dst = rig.id("h1");
      f.size = 1'000'000;
      const FlowId fid = rig.net->add_flow(f);
      rig.net->run(1, false);
      // Base RTT 4 us at 100 Gbps is 50 KB, or 50 packets.
      CHECK(rig.net->nic_at(f.src)->window(fid) == 50.0);
      rig.net->run(3 * kMicrosecond, false);
      CHECK(rig.net->nic_at(f.src)->stats().data_sent <= 50);
      rig.net->run(kMillisecond, true);
      CHECK(rig.net->flow(fid).acked);
    }
  }

  TEST_CASE("e2e CC shrinks the window under a standing queue") {
    // Without backpressure or an inflight cap only the window limits the queue.
    json j = test::star_scenario(5, json::array(), "ideal_fq");
    for (int i = 0; i < 4; ++i) j["workload"]["flows"].push_back(test::flow("h" + std::to_string(i), "h4", 2'000'000));
    j["nic"] = {{"bdp_inflight_cap", false}};
    const RunResult plain = run_scenario(parse_scenario(j));
    j["nic"] = {{"bdp_inflight_cap", false}, {"e2e_cc", true}};
    const RunResult cc = run_scenario(parse_scenario(j));
    CHECK(cc.records.size() == 4);
    CHECK(cc.summary["switches"]["peak_buffer_bytes"].get<double>() <
          plain.summary["switches"]["peak_buffer_bytes"].get<double>());
  }
}
