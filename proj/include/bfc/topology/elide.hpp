#pragma once

#include "bfc/packet.hpp"

namespace bfc {

/// Backpressure is skipped for packets arriving on `ingress` and leaving on
/// `egress` at switch `node`.
struct ElideEntry {
  NodeId node = 0;
  PortId ingress = 0;
  PortId egress = 0;
  auto operator<=>(const ElideEntry&) const = default;
};

}  // namespace bfc
