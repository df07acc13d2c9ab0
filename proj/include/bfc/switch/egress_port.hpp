#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "bfc/packet.hpp"

namespace bfc {

/// One switch egress: FIFO data queues scheduled by deficit round robin over
/// the queues that are nonempty and not paused, plus one strict-priority
/// control queue that is never paused.
class EgressPort {
 public:
  EgressPort(std::uint32_t data_queues, std::uint32_t quantum);

  std::uint32_t queue_count() const { return static_cast<std::uint32_t>(queues_.size()); }
  /// Appends a fresh data queue (per-flow queuing grows the port on demand).
  std::uint32_t add_queue();

  void push(std::uint32_t q, Packet&& p, SimTime now);
  void push_control(Packet&& p) { control_.push_back(std::move(p)); }

  /// Next packet to put on the wire: control first, then DRR. Empty when
  /// every nonempty data queue is paused.
  std::optional<Packet> dequeue(SimTime now);

  void set_paused(std::uint32_t q, bool paused);
  bool paused(std::uint32_t q) const { return queues_[q].paused; }
  bool empty(std::uint32_t q) const { return queues_[q].packets.empty(); }
  std::uint64_t queue_bytes(std::uint32_t q) const { return queues_[q].bytes; }
  std::size_t queue_packets(std::uint32_t q) const { return queues_[q].packets.size(); }
  const std::deque<Packet>& contents(std::uint32_t q) const { return queues_[q].packets; }

  /// Lowest-index queue holding zero packets.
  std::optional<std::uint32_t> first_empty_queue() const;
  /// Queues that are nonempty and not paused.
  std::uint32_t active_queues() const { return n_active_; }
  std::uint32_t nonempty_queues() const { return n_nonempty_; }

  bool has_work() const { return !control_.empty() || n_active_ > 0; }
  std::uint64_t data_bytes() const { return data_bytes_; }
  std::size_t data_packets() const { return data_packets_; }
  std::size_t control_packets() const { return control_.size(); }

  /// Time integral of the queue's byte length since the last reset, in byte*ns.
  double queue_byte_time(std::uint32_t q, SimTime now) const;
  void reset_stats(SimTime now);

 private:
  struct Queue {
    std::deque<Packet> packets;
    std::uint64_t bytes = 0;
    std::int64_t deficit = 0;
    bool paused = false;
    bool in_ring = false;
    double byte_time = 0.0;
    SimTime last_change = 0;
  };

  bool eligible(const Queue& q) const { return !q.paused && !q.packets.empty(); }
  void touch(Queue& q, SimTime now);
  void make_ready(std::uint32_t q);

  std::vector<Queue> queues_;
  std::deque<Packet> control_;
  std::deque<std::uint32_t> ring_;
  bool fresh_turn_ = true;
  std::uint32_t quantum_;
  std::uint32_t n_active_ = 0;
  std::uint32_t n_nonempty_ = 0;
  std::uint64_t data_bytes_ = 0;
  std::size_t data_packets_ = 0;
};

}  // namespace bfc
