#pragma once

#include <cstdint>

#include "bfc/packet.hpp"
#include "bfc/topology/routing.hpp"

namespace bfc {

struct FlowRecord {
  FlowId fid = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint64_t size = 0;
  SimTime start = 0;
  SimTime finish = 0;
  SimTime ideal_fct = 0;
  std::uint64_t retransmitted_bytes = 0;
  bool is_incast = false;
  std::uint32_t group = 0;

  SimTime fct() const { return finish - start; }
  double slowdown() const { return static_cast<double>(fct()) / static_cast<double>(ideal_fct); }
};

/// Best-case completion time on an empty network: one-way latency of every
/// hop, the whole flow serialized at the route's slowest link, and one extra
/// serialization of the final packet at every other hop (store and forward).
SimTime ideal_fct(std::uint64_t size, const Topology& topo, const Route& route, std::uint32_t mtu);

}  // namespace bfc
