#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bfc/device.hpp"
#include "bfc/metrics/fct.hpp"
#include "bfc/metrics/time_stats.hpp"
#include "bfc/nic/nic_config.hpp"
#include "bfc/sim/event_queue.hpp"
#include "bfc/switch/dataplane.hpp"
#include "bfc/topology/elide.hpp"
#include "bfc/topology/routing.hpp"
#include "bfc/topology/topology.hpp"

namespace bfc {

class Switch;
class Nic;

struct FlowSpec {
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t size = 0;
  SimTime start = 0;
  bool incast = false;
  // Packets carry the incast label (used by incast-aware queue assignment).
  bool labeled = false;
  std::uint32_t group = 0;
};

struct FlowInfo {
  FlowId fid = 0;
  FlowSpec spec;
  Route route;
  Route reverse;
  std::uint32_t packets = 0;
  SimTime base_rtt = 0;
  SimTime ideal_fct = 0;
  bool delivered = false;
  bool acked = false;
  SimTime finish = 0;
  std::uint64_t retransmitted_bytes = 0;
};

/// Drops up to `count` packets of `type` sent from `from` to `to` at or
/// after `after`.
struct FaultSpec {
  NodeId from = 0;
  NodeId to = 0;
  PacketType type = PacketType::resume;
  std::uint32_t count = 1;
  SimTime after = 0;
};

struct NetworkConfig {
  DataplaneConfig dataplane;
  NicConfig nic;
  SimTime sample_period = 10 * kMicrosecond;
  bool audit = false;
  std::vector<ElideEntry> elide;
  std::vector<FaultSpec> faults;
};

/// Per directed link (transmitter side) counters.
struct LinkStats {
  SimTime busy = 0;       // any packet, clipped to the measurement window
  SimTime data_busy = 0;  // data packets only
  std::uint64_t data_packets = 0;
  std::uint64_t control_packets = 0;
};

struct Conservation {
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t resident = 0;
  std::uint64_t in_transit = 0;
  bool balanced() const { return injected == delivered + dropped + resident + in_transit; }
};

/// Owns the devices and link transmitters of one run and the flow registry.
class Network final : public EventTarget {
 public:
  Network(Simulator& sim, const Topology& topo, const Router& router, NetworkConfig cfg);
  ~Network() override;
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Simulator& sim() { return sim_; }
  SimTime now() const { return sim_.now(); }
  const Topology& topology() const { return topo_; }
  const Router& router() const { return router_; }
  const NetworkConfig& config() const { return cfg_; }

  /// Registers a flow and schedules its start. Routes are fixed here.
  FlowId add_flow(const FlowSpec& spec);

  /// Runs until `max_time`, or until every registered flow completed when
  /// stop_when_done is set.
  RunStats run(SimTime max_time, bool stop_when_done);

  // Device services.
  void transmit(NodeId from, PortId port, Packet&& p);
  const FlowInfo& flow(FlowId fid) const { return flows_.at(fid - 1); }
  FlowInfo& flow(FlowId fid) { return flows_.at(fid - 1); }
  void on_data_injected() { ++conservation_.injected; }
  void on_data_dropped() { ++conservation_.dropped; }
  void on_data_arrived_at_host() { ++conservation_.delivered; }
  void on_data_left_link() { --conservation_.in_transit; }
  void on_flow_delivered(FlowId fid);
  void on_flow_acked(FlowId fid);
  void on_retransmit(FlowId fid, std::uint64_t bytes) { flow(fid).retransmitted_bytes += bytes; }

  /// Debug trace sink; null when tracing is off.
  std::ostream* trace() const { return trace_; }
  void set_trace(std::ostream* out) { trace_ = out; }

  // Measurement.
  void set_measure_from(SimTime t);
  SimTime measure_from() const { return measure_from_; }
  const LinkStats& link_stats(NodeId node, PortId port) const { return link_stats_[port_index(node, port)]; }
  double utilization(NodeId node, PortId port, SimTime until) const;
  const std::deque<FlowInfo>& flows() const { return flows_; }
  std::vector<FlowRecord> flow_records() const;
  Conservation conservation() const;
  const std::vector<std::vector<std::uint64_t>>& occupancy_samples() const { return occupancy_samples_; }
  /// Last time any switch dequeued a data packet.
  SimTime last_switch_dequeue() const { return last_switch_dequeue_; }
  void note_switch_dequeue() { last_switch_dequeue_ = now(); }
  std::uint64_t flows_delivered() const { return delivered_count_; }

  Switch* switch_at(NodeId n) const { return switches_[n]; }
  Nic* nic_at(NodeId n) const { return nics_[n]; }
  std::vector<Switch*> switches() const;
  Device& device(NodeId n) { return *devices_[n]; }

  /// Checks buffer, pause-counter and packet conservation invariants;
  /// throws SimulationError on violation.
  void audit() const;

  void handle(Event& ev) override;

 private:
  std::size_t port_index(NodeId node, PortId port) const { return port_base_[node] + port; }
  bool fault_drops(NodeId from, PortId port, const Packet& p);

  Simulator& sim_;
  const Topology& topo_;
  const Router& router_;
  NetworkConfig cfg_;
  std::vector<std::unique_ptr<Device>> devices_;
  std::vector<Switch*> switches_;
  std::vector<Nic*> nics_;
  std::deque<FlowInfo> flows_;  // stable addresses: packets point at routes
  std::vector<std::size_t> port_base_;
  std::vector<LinkStats> link_stats_;
  std::vector<FaultSpec> faults_;
  std::vector<std::vector<std::uint64_t>> occupancy_samples_;
  Conservation conservation_;
  std::uint64_t delivered_count_ = 0;
  std::uint64_t acked_count_ = 0;
  bool stop_when_done_ = false;
  SimTime measure_from_ = 0;
  SimTime last_switch_dequeue_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace bfc
