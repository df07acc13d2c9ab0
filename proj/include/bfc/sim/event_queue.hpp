#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bfc/packet.hpp"
#include "bfc/sim/rng.hpp"
#include "bfc/sim/time.hpp"

namespace bfc {

/// Raised when the run violates a simulator invariant. The run is aborted.
class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void sim_check(bool ok, std::string_view what) {
  if (!ok) throw SimulationError(std::string(what));
}

enum class EventKind : std::uint8_t { packet_arrival, tx_done, timer };

struct Event;

class EventTarget {
 public:
  virtual ~EventTarget() = default;
  virtual void handle(Event& ev) = 0;
};

struct Event {
  SimTime fire_at = 0;
  std::uint64_t sequence = 0;
  EventTarget* target = nullptr;
  EventKind kind = EventKind::timer;
  PortId port = 0;
  std::uint64_t tag = 0;
  Packet packet;
};

using EventHandle = std::uint64_t;

struct RunStats {
  std::uint64_t events_processed = 0;
  SimTime clock = 0;
};

/// Single-threaded discrete-event kernel. Events are ordered by
/// (fire_at, sequence); sequence numbers are assigned at schedule time so
/// simultaneous events fire in scheduling order.
class Simulator {
 public:
  explicit Simulator(std::uint64_t seed) : seed_(seed) {}
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }

  /// Schedules `ev`, overwriting its sequence number. Throws SimulationError
  /// when ev.fire_at lies in the past.
  EventHandle schedule(Event ev);

  EventHandle schedule_timer(SimTime at, EventTarget* target, std::uint64_t tag) {
    Event ev;
    ev.fire_at = at;
    ev.target = target;
    ev.kind = EventKind::timer;
    ev.tag = tag;
    return schedule(std::move(ev));
  }

  /// Processes every event with fire_at <= end, then advances the clock to
  /// `end` (unless end is kForever or stop() was called).
  RunStats run_until(SimTime end);

  /// Makes the current run_until return after the in-flight event.
  void stop() { stopped_ = true; }

  bool idle() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }
  std::uint64_t total_events() const { return total_events_; }

  /// Independent random stream for a named component.
  Rng stream(std::string_view component) const { return Rng::for_component(seed_, component); }

 private:
  std::vector<Event> heap_;
  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t total_events_ = 0;
  std::uint64_t seed_;
  bool stopped_ = false;
};

}  // namespace bfc
