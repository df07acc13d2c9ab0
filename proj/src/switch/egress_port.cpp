#include "bfc/switch/egress_port.hpp"

#include "bfc/sim/event_queue.hpp"

namespace bfc {

EgressPort::EgressPort(std::uint32_t data_queues, std::uint32_t quantum) : queues_(data_queues), quantum_(quantum) {
  sim_check(quantum > 0, "DRR quantum must be positive");
}

std::uint32_t EgressPort::add_queue() {
  queues_.emplace_back();
  return queue_count() - 1;
}

void EgressPort::touch(Queue& q, SimTime now) {
  if (now > q.last_change) {
    q.byte_time += static_cast<double>(q.bytes) * static_cast<double>(now - q.last_change);
    q.last_change = now;
  }
}

void EgressPort::make_ready(std::uint32_t q) {
  if (!queues_[q].in_ring) {
    queues_[q].in_ring = true;
    ring_.push_back(q);
  }
}

void EgressPort::push(std::uint32_t q, Packet&& p, SimTime now) {
  sim_check(q < queues_.size(), "enqueue to a nonexistent queue");
  Queue& queue = queues_[q];
  touch(queue, now);
  const bool was_empty = queue.packets.empty();
  queue.bytes += p.size;
  data_bytes_ += p.size;
  ++data_packets_;
  queue.packets.push_back(std::move(p));
  if (was_empty) {
    ++n_nonempty_;
    if (!queue.paused) {
      ++n_active_;
      make_ready(q);
    }
  }
}

void EgressPort::set_paused(std::uint32_t q, bool paused) {
  Queue& queue = queues_[q];
  if (queue.paused == paused) return;
  queue.paused = paused;
  if (queue.packets.empty()) return;
  if (paused) {
    --n_active_;
  } else {
    ++n_active_;
    make_ready(q);
  }
}

std::optional<Packet> EgressPort::dequeue(SimTime now) {
  if (!control_.empty()) {
    Packet p = std::move(control_.front());
    control_.pop_front();
    return p;
  }
  while (!ring_.empty()) {
    const std::uint32_t qi = ring_.front();
    Queue& q = queues_[qi];
    if (!eligible(q)) {
      ring_.pop_front();
      q.in_ring = false;
      q.deficit = 0;
      fresh_turn_ = true;
      continue;
    }
    if (fresh_turn_) {
      q.deficit += quantum_;
      fresh_turn_ = false;
    }
    const std::uint32_t head = q.packets.front().size;
    if (q.deficit < static_cast<std::int64_t>(head)) {
      ring_.pop_front();
      ring_.push_back(qi);
      fresh_turn_ = true;
      continue;
    }
    touch(q, now);
    q.deficit -= head;
    Packet p = std::move(q.packets.front());
    q.packets.pop_front();
    q.bytes -= head;
    data_bytes_ -= head;
    --data_packets_;
    if (q.packets.empty()) {
      --n_nonempty_;
      --n_active_;
      q.deficit = 0;
      q.in_ring = false;
      ring_.pop_front();
      fresh_turn_ = true;
    }
    return p;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> EgressPort::first_empty_queue() const {
  for (std::uint32_t i = 0; i < queues_.size(); ++i) {
    if (queues_[i].packets.empty()) return i;
  }
  return std::nullopt;
}

double EgressPort::queue_byte_time(std::uint32_t q, SimTime now) const {
  const Queue& queue = queues_[q];
  const SimTime dt = now > queue.last_change ? now - queue.last_change : 0;
  return queue.byte_time + static_cast<double>(queue.bytes) * static_cast<double>(dt);
}

void EgressPort::reset_stats(SimTime now) {
  for (Queue& q : queues_) {
    q.byte_time = 0.0;
    q.last_change = now;
  }
}

}  // namespace bfc
