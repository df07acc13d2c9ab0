#include "bfc/sim/event_queue.hpp"

#include <algorithm>

namespace bfc {
namespace {

// std heap functions build a max-heap; "later" events compare greater.
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
    return a.sequence > b.sequence;
  }
};

}  // namespace

EventHandle Simulator::schedule(Event ev) {
  if (ev.fire_at < now_) {
    throw SimulationError("event scheduled in the past: fire_at=" + std::to_string(ev.fire_at) +
                          " now=" + std::to_string(now_));
  }
  ev.sequence = next_sequence_++;
  const EventHandle handle = ev.sequence;
  heap_.push_back(std::move(ev));
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return handle;
}

RunStats Simulator::run_until(SimTime end) {
  RunStats stats;
  stopped_ = false;
  while (!heap_.empty() && !stopped_) {
    if (heap_.front().fire_at > end) break;
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    sim_check(ev.fire_at >= now_, "clock went backwards");
    now_ = ev.fire_at;
    ++stats.events_processed;
    ++total_events_;
    ev.target->handle(ev);
  }
  if (!stopped_ && end != kForever && end > now_) now_ = end;
  stats.clock = now_;
  return stats;
}

}  // namespace bfc
