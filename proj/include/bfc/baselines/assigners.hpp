#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "bfc/sim/rng.hpp"
#include "bfc/switch/queue_assignment.hpp"

namespace bfc {

/// Queue index used by the stochastic strategies: the same hash at every
/// switch, so a flow lands on the same index everywhere.
std::uint32_t sfq_queue(FlowId fid, std::uint64_t hash_salt, std::uint32_t queues);

class StochasticAssigner final : public QueueAssigner {
 public:
  explicit StochasticAssigner(std::uint64_t hash_salt) : salt_(hash_salt) {}
  Assignment on_enqueue(PortId, EgressPort& port, const Packet& p, SimTime) override {
    return {sfq_queue(p.fid, salt_, port.queue_count())};
  }
  void on_dequeue(PortId, EgressPort&, const Packet&, SimTime) override {}

 private:
  std::uint64_t salt_;
};

class SingleQueueAssigner final : public QueueAssigner {
 public:
  Assignment on_enqueue(PortId, EgressPort&, const Packet&, SimTime) override { return {0}; }
  void on_dequeue(PortId, EgressPort&, const Packet&, SimTime) override {}
};

/// Ideal fair queuing: every resident flow owns a queue; queues are
/// recycled once drained.
class PerFlowAssigner final : public QueueAssigner {
 public:
  explicit PerFlowAssigner(std::size_t ports) : ports_(ports) {}
  Assignment on_enqueue(PortId egress, EgressPort& port, const Packet& p, SimTime now) override;
  void on_dequeue(PortId egress, EgressPort& port, const Packet& p, SimTime now) override;

 private:
  struct PortState {
    std::unordered_map<FlowId, std::pair<std::uint32_t, std::uint32_t>> flows;  // queue, resident
    std::vector<std::uint32_t> free_queues;
  };
  std::vector<PortState> ports_;
};

struct AssignerParams {
  std::size_t ports = 0;
  std::uint32_t table_slice = 0;
  std::uint64_t hash_salt = 0;
  SimTime sticky_threshold = 0;
  bool incast_label = false;
};

std::unique_ptr<QueueAssigner> make_assigner(Dataplane kind, const AssignerParams& params, Rng rng);

}  // namespace bfc
