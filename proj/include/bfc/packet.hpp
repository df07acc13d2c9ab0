#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "bfc/sim/time.hpp"

namespace bfc {

using FlowId = std::uint64_t;
using NodeId = std::uint32_t;
using PortId = std::uint32_t;

inline constexpr std::uint32_t kNoQueue = ~std::uint32_t{0};

struct Route;

enum class PacketType : std::uint8_t { data, ack, pause, resume, pause_bitmap };

const char* to_string(PacketType t);

/// The unit moving through the simulated network.
///
/// `upstream_q` is rewritten by every transmitting device to the local queue
/// the packet departs from. The fields below `switch-local` are scratch state
/// owned by the switch currently holding the packet.
struct Packet {
  PacketType type = PacketType::data;
  FlowId fid = 0;
  std::uint32_t size = 0;
  std::uint32_t seq = 0;
  std::uint32_t upstream_q = kNoQueue;
  bool incast_label = false;
  bool first_of_flow = false;

  // Forwarding state: `route` is owned by the network's flow registry.
  const Route* route = nullptr;
  std::uint16_t hop = 0;

  // Transport: NIC transmit time (echoed in the ack) and cumulative ack.
  SimTime sent_at = 0;
  std::uint32_t ack_next = 0;

  // Control payload: queue id for pause/resume, the paused set for bitmaps.
  std::uint32_t control_queue = kNoQueue;
  std::shared_ptr<const std::vector<std::uint32_t>> paused_set;

  // switch-local
  PortId ingress_port = 0;
  std::uint32_t queue = kNoQueue;
  std::uint32_t entry = kNoQueue;
  bool counter_incr = false;
};

}  // namespace bfc
