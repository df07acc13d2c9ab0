#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bfc/packet.hpp"
#include "bfc/sim/rng.hpp"
#include "bfc/switch/dataplane.hpp"
#include "bfc/switch/egress_port.hpp"
#include "bfc/switch/flow_table.hpp"

namespace bfc {

struct Assignment {
  std::uint32_t queue = 0;
  std::uint32_t entry = kNoQueue;
  // Packets already resident under the same flow-table entry, or kNoQueue
  // when the strategy keeps no table.
  std::uint32_t entry_resident = kNoQueue;
  bool reassigned = false;
  bool random_fallback = false;
};

/// Strategy that maps an arriving packet to a data queue at its egress.
class QueueAssigner {
 public:
  virtual ~QueueAssigner() = default;
  virtual Assignment on_enqueue(PortId egress, EgressPort& port, const Packet& p, SimTime now) = 0;
  virtual void on_dequeue(PortId egress, EgressPort& port, const Packet& p, SimTime now) = 0;
};

/// BFC's dynamic assignment: a flow-table entry with zero resident packets
/// whose last activity is older than the sticky threshold is (re)assigned.
/// It takes the lowest-index free queue, where free means no entry holds
/// packets in it and none drained from it within the sticky threshold, so a
/// queue momentarily empty under a sticky entry stays with that entry. When
/// no queue is free it takes a uniformly random one. With incast labeling,
/// labeled packets at an egress share one extra entry.
class DynamicAssigner final : public QueueAssigner {
 public:
  DynamicAssigner(std::size_t ports, std::uint32_t slice, std::uint64_t hash_salt, SimTime sticky_threshold,
                  bool incast_label, Rng rng);

  Assignment on_enqueue(PortId egress, EgressPort& port, const Packet& p, SimTime now) override;
  void on_dequeue(PortId egress, EgressPort& port, const Packet& p, SimTime now) override;

  const FlowTable& table() const { return table_; }
  const FlowTableEntry& incast_entry(PortId egress) const { return incast_[egress]; }
  /// Entry index used for the shared incast entry.
  std::uint32_t incast_index() const { return table_.slice(); }

 private:
  struct QueueHold {
    std::uint32_t holders = 0;   // entries with resident packets here
    std::int64_t released = -1;  // time the last holder drained
  };

  FlowTableEntry& entry_for(PortId egress, std::uint32_t index);
  std::vector<QueueHold>& holds(PortId egress, std::uint32_t queues);
  std::optional<std::uint32_t> free_queue(PortId egress, const EgressPort& port, SimTime now);

  FlowTable table_;
  std::vector<std::vector<QueueHold>> holds_;
  std::vector<FlowTableEntry> incast_;
  SimTime sticky_;
  bool incast_label_;
  Rng rng_;
};

}  // namespace bfc
