#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "bfc/device.hpp"
#include "bfc/metrics/time_stats.hpp"
#include "bfc/switch/dataplane.hpp"
#include "bfc/switch/egress_port.hpp"
#include "bfc/switch/flow_table.hpp"
#include "bfc/switch/queue_assignment.hpp"

namespace bfc {

struct SwitchStats {
  std::uint64_t enqueues = 0;
  std::uint64_t drops = 0;
  std::uint64_t data_dequeues = 0;
  std::uint64_t pauses_sent = 0;
  std::uint64_t resumes_sent = 0;
  std::uint64_t bitmaps_sent = 0;
  std::uint64_t unknown_pause_ids = 0;
  // Enqueues into a queue already holding another flow's packets.
  std::uint64_t shared_enqueues = 0;
  // Enqueues into a queue holding packets of another flow-table entry.
  std::uint64_t entry_shared_enqueues = 0;
  std::uint64_t reassignments = 0;
  std::uint64_t random_assignments = 0;
};

class Switch final : public Device {
 public:
  Switch(Network& net, NodeId id, const DataplaneConfig& cfg, std::uint64_t hash_salt, Rng rng);

  void receive(Packet&& p, PortId port) override;
  void on_tx_done(PortId port) override;
  void on_timer(std::uint64_t tag) override;

  /// Arms the periodic pause-bitmap timer.
  void start();
  /// Skips backpressure for traffic from `ingress` to `egress`.
  void elide(PortId ingress, PortId egress);

  std::size_t port_count() const { return ports_.size(); }
  EgressPort& port(PortId p) { return ports_[p].queue; }
  const EgressPort& port(PortId p) const { return ports_[p].queue; }
  /// Pause threshold in bytes at `egress` given `n_active` active queues.
  std::uint64_t pause_threshold(PortId egress, std::uint32_t n_active) const;
  SimTime th_time() const { return th_time_; }
  SimTime sticky_threshold() const { return sticky_; }

  const SwitchStats& stats() const { return stats_; }
  const SharedBuffer& buffer() const { return buffer_; }
  const PauseCounterTable& counters() const { return counters_; }
  const QueueAssigner& assigner() const { return *assigner_; }
  std::size_t resident_flows(PortId egress) const { return ports_[egress].resident.size(); }
  /// Time-weighted histogram of distinct resident flows at an egress.
  const TimeHistogram& flow_histogram(PortId egress) const { return ports_[egress].flows; }
  std::uint64_t resident_data_packets() const;

  void reset_stats(SimTime now);
  /// Throws SimulationError when counters, buffer or flow state disagree.
  void audit() const;

 private:
  struct Egress {
    explicit Egress(std::uint32_t queues, std::uint32_t quantum) : queue(queues, quantum) {}
    EgressPort queue;
    bool busy = false;
    BitRate rate = 0;
    std::unordered_map<FlowId, std::uint32_t> resident;
    TimeHistogram flows;
  };

  void enqueue_data(Packet&& p, PortId ingress);
  void forward_control(Packet&& p);
  void send_control(PortId port, PacketType type, std::uint32_t q);
  void apply_pause(PortId port, std::uint32_t q, bool paused);
  void try_send(PortId port);
  void send_bitmaps();
  PortId egress_of(const Packet& p) const;
  void trace_line(const char* op, const Packet& p, std::uint32_t qlen, std::uint32_t ctr) const;

  DataplaneConfig cfg_;
  std::vector<Egress> ports_;
  std::unique_ptr<QueueAssigner> assigner_;
  PauseCounterTable counters_;
  SharedBuffer buffer_;
  std::vector<bool> elided_;  // ingress * ports + egress
  SimTime th_time_ = 0;
  SimTime sticky_ = 0;
  SimTime bitmap_period_ = 0;
  SwitchStats stats_;
};

}  // namespace bfc
