#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>
#include <vector>

#include "bfc/device.hpp"
#include "bfc/nic/nic_config.hpp"

namespace bfc {

struct NicStats {
  std::uint64_t data_sent = 0;
  std::uint64_t retransmits = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t pauses_received = 0;
};

/// Host interface. Each active outgoing flow owns a pausable queue (a slot);
/// unpaused slots with sendable packets are served round robin and acks go
/// out with strict priority. Loss recovery is Go-Back-N on a timeout.
class Nic final : public Device {
 public:
  Nic(Network& net, NodeId id, const NicConfig& cfg);

  void receive(Packet&& p, PortId port) override;
  void on_tx_done(PortId port) override;
  void on_timer(std::uint64_t tag) override;

  /// Begins transmitting a registered flow.
  void start_flow(FlowId fid);

  bool slot_paused(std::uint32_t slot) const { return slot < paused_.size() && paused_[slot]; }
  std::size_t active_flows() const { return by_slot_.size(); }
  /// Current congestion window of a flow, if it is active.
  double window(FlowId fid) const;
  const NicStats& stats() const { return stats_; }

 private:
  struct SendFlow {
    FlowId fid = 0;
    std::uint32_t slot = 0;
    std::uint32_t packets = 0;
    std::uint32_t next_seq = 0;
    std::uint32_t acked = 0;
    std::uint32_t high_water = 0;  // highest sequence ever sent + 1
    double window = 0.0;           // packets; 0 means unlimited
    SimTime rto = 0;
    SimTime rto_base = 0;
    SimTime rtt_target = 0;
    SimTime deadline = 0;
    bool timer_armed = false;
  };
  struct RecvFlow {
    std::uint32_t expected = 0;
    std::uint32_t packets = 0;
  };

  bool sendable(const SendFlow& f) const;
  void try_send();
  void send_data(SendFlow& f);
  void on_ack(const Packet& ack);
  void on_data(Packet&& p);
  void arm_timer(SendFlow& f);
  void set_paused(std::uint32_t slot, bool paused);

  NicConfig cfg_;
  std::map<std::uint32_t, SendFlow> by_slot_;
  std::unordered_map<FlowId, std::uint32_t> slot_of_;
  std::vector<bool> paused_;
  std::vector<bool> slot_used_;
  std::uint32_t rr_next_ = 0;
  std::deque<Packet> acks_;
  std::unordered_map<FlowId, RecvFlow> recv_;
  bool busy_ = false;
  NicStats stats_;
};

}  // namespace bfc
