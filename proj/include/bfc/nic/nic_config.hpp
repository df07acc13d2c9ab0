#pragma once

#include <cstdint>
#include <optional>

#include "bfc/sim/time.hpp"

namespace bfc {

struct NicConfig {
  // Delay-based window supplement; off by default.
  bool e2e_cc = false;
  double rtt_target_multiplier = 2.5;
  // Go-Back-N timeout as a multiple of the route's base RTT.
  double rto_multiplier = 3.0;
  std::optional<SimTime> rto;
  // Caps unacked packets of a flow at one BDP (used by the ideal-FQ baseline).
  bool bdp_inflight_cap = false;
  std::uint32_t mtu = 1000;
  std::uint32_t ack_bytes = 64;
};

}  // namespace bfc
