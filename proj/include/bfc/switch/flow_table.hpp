#pragma once

#include <cstdint>
#include <vector>

#include "bfc/packet.hpp"
#include "bfc/sim/rng.hpp"

namespace bfc {

struct FlowTableEntry {
  std::uint32_t queue = kNoQueue;  // qAssignment
  std::uint32_t size = 0;          // resident packets of flows mapped here
  SimTime last_activity = 0;
  bool used = false;
};

/// Per-egress slices of entries indexed by hash(FID) mod slice. Flows whose
/// hashes collide share an entry and therefore a queue.
class FlowTable {
 public:
  FlowTable(std::size_t ports, std::uint32_t slice, std::uint64_t salt)
      : slice_(slice), salt_(salt), entries_(ports * slice) {}

  std::uint32_t slice() const { return slice_; }
  std::uint32_t index_of(FlowId fid) const { return static_cast<std::uint32_t>(mix64(fid ^ salt_) % slice_); }
  FlowTableEntry& at(PortId egress, std::uint32_t index) { return entries_[egress * slice_ + index]; }
  const FlowTableEntry& at(PortId egress, std::uint32_t index) const { return entries_[egress * slice_ + index]; }

 private:
  std::uint32_t slice_;
  std::uint64_t salt_;
  std::vector<FlowTableEntry> entries_;
};

/// Counters indexed by (ingress port, upstreamQ). An upstream queue is paused
/// exactly when its counter is nonzero.
class PauseCounterTable {
 public:
  explicit PauseCounterTable(std::size_t ports) : counters_(ports) {}

  /// Returns the counter value after the change.
  std::uint32_t increment(PortId ingress, std::uint32_t upstream_q);
  std::uint32_t decrement(PortId ingress, std::uint32_t upstream_q);
  std::uint32_t get(PortId ingress, std::uint32_t upstream_q) const;

  /// Upstream queues with a nonzero counter, ascending.
  std::vector<std::uint32_t> paused_set(PortId ingress) const;
  std::uint64_t total() const { return total_; }
  std::size_t ports() const { return counters_.size(); }

 private:
  std::vector<std::vector<std::uint32_t>> counters_;
  std::uint64_t total_ = 0;
};

class SharedBuffer {
 public:
  static constexpr std::uint64_t kUnbounded = ~std::uint64_t{0};

  explicit SharedBuffer(std::uint64_t capacity) : capacity_(capacity) {}

  bool try_admit(std::uint32_t bytes) {
    if (capacity_ != kUnbounded && occupied_ + bytes > capacity_) return false;
    occupied_ += bytes;
    if (occupied_ > peak_) peak_ = occupied_;
    return true;
  }
  void release(std::uint32_t bytes) { occupied_ -= bytes; }

  std::uint64_t occupied() const { return occupied_; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t peak() const { return peak_; }

 private:
  std::uint64_t capacity_;
  std::uint64_t occupied_ = 0;
  std::uint64_t peak_ = 0;
};

}  // namespace bfc
