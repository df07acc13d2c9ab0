#include <doctest.h>

#include <vector>

#include "bfc/sim/event_queue.hpp"
#include "bfc/sim/rng.hpp"
#include "bfc/sim/time.hpp"

using namespace bfc;

namespace {

struct Recorder final : EventTarget {
  std::vector<std::uint64_t> tags;
  std::vector<SimTime> times;
  Simulator* sim = nullptr;
  void handle(Event& ev) override {
    tags.push_back(ev.tag);
    times.push_back(sim->now());
  }
};

struct Heartbeat final : EventTarget {
  Simulator& sim;
  SimTime period;
  int firings = 0;
  Heartbeat(Simulator& s, SimTime p) : sim(s), period(p) {}
  void handle(Event&) override {
    ++firings;
    sim.schedule_timer(sim.now() + period, this, 0);
  }
};

struct LateScheduler final : EventTarget {
  Simulator& sim;
  explicit LateScheduler(Simulator& s) : sim(s) {}
  void handle(Event&) override { sim.schedule_timer(50, this, 0); }
};

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("event scheduled at time zero on an empty queue fires first") {
    Simulator sim(1);
    Recorder r;
    r.sim = &sim;
    sim.schedule_timer(0, &r, 7);
    const RunStats s = sim.run_until(1000);
    CHECK(s.events_processed == 1);
    CHECK(r.tags == std::vector<std::uint64_t>{7});
    CHECK(r.times == std::vector<SimTime>{0});
  }

  TEST_CASE("simultaneous events fire in scheduling order") {
    Simulator sim(1);
    Recorder r;
    r.sim = &sim;
    for (std::uint64_t i = 0; i < 5; ++i) sim.schedule_timer(200, &r, 100 + i);
    const EventHandle a = sim.schedule_timer(100, &r, 5);
    const EventHandle b = sim.schedule_timer(100, &r, 6);
    CHECK(a < b);
    sim.run_until(kForever);
    CHECK(r.tags == std::vector<std::uint64_t>{5, 6, 100, 101, 102, 103, 104});
  }

  TEST_CASE("scheduling into the past aborts") {
    Simulator sim(1);
    LateScheduler late(sim);
    sim.schedule_timer(60, &late, 0);
    CHECK_THROWS_AS(sim.run_until(kForever), SimulationError);
  }

  TEST_CASE("run_until with no events only advances the clock") {
    Simulator sim(1);
    const RunStats s = sim.run_until(1000);
    CHECK(s.events_processed == 0);
    CHECK(s.clock == 1000);
  }

  TEST_CASE("run_until stops at the end time and leaves later events pending") {
    Simulator sim(1);
    Recorder r;
    r.sim = &sim;
    for (SimTime t : {10, 20, 30}) sim.schedule_timer(t, &r, t);
    const RunStats s = sim.run_until(25);
    CHECK(s.events_processed == 2);
    CHECK(r.times.back() == 20);
    CHECK(s.clock == 25);
    CHECK(sim.pending() == 1);
    sim.run_until(kForever);
    CHECK(r.times.back() == 30);
  }

  TEST_CASE("self-rescheduling heartbeat fires ten times in 100 ns") {
    Simulator sim(1);
    Heartbeat hb(sim, 10);
    sim.schedule_timer(10, &hb, 0);
    sim.run_until(100);
    CHECK(hb.firings == 10);
  }

  TEST_CASE("serialization time rounds up to whole nanoseconds") {
    CHECK(serialization_time(1000, gbps(100)) == 80);
    CHECK(serialization_time(1, gbps(100)) == 1);
    CHECK(serialization_time(64, gbps(100)) == 6);  // 5.12 ns
    CHECK(bytes_in(2 * kMicrosecond, gbps(100)) == 25'000);
  }

  TEST_CASE("child streams are stable and independent of one another") {
    CHECK(Rng::derive_seed(1, "a") == Rng::derive_seed(1, "a"));
    CHECK(Rng::derive_seed(1, "a") != Rng::derive_seed(1, "b"));
    CHECK(Rng::derive_seed(1, "a") != Rng::derive_seed(2, "a"));
    Rng x = Rng::for_component(9, "switch/3");
    Rng y = Rng::for_component(9, "switch/3");
    for (int i = 0; i < 100; ++i) CHECK(x.next() == y.next());
  }

  TEST_CASE("rng draws stay in range and have the right means") {
    Rng r(42);
    double sum_u = 0.0;
    double sum_e = 0.0;
    constexpr int n = 200'000;
    for (int i = 0; i < n; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      sum_u += u;
      sum_e += r.exponential(3.0);
      REQUIRE(r.below(7) < 7);
    }
    CHECK(sum_u / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(sum_e / n == doctest::Approx(3.0).epsilon(0.02));
  }
}
