#include "bfc/metrics/fct.hpp"

#include <algorithm>

namespace bfc {

SimTime ideal_fct(std::uint64_t size, const Topology& topo, const Route& route, std::uint32_t mtu) {
  if (route.hops.empty() || size == 0) return 0;
  std::size_t bottleneck = 0;
  for (std::size_t i = 0; i < route.hops.size(); ++i) {
    const Hop& h = route.hops[i];
    if (topo.port_rate(h.node, h.egress) < topo.port_rate(route.hops[bottleneck].node, route.hops[bottleneck].egress)) {
      bottleneck = i;
    }
  }
  const std::uint64_t first = std::min<std::uint64_t>(mtu, size);
  const std::uint64_t last = size - (size - 1) / mtu * mtu;
  SimTime t = 0;
  for (std::size_t i = 0; i < route.hops.size(); ++i) {
    const Hop& h = route.hops[i];
    const BitRate rate = topo.port_rate(h.node, h.egress);
    t += topo.one_way_delay(h.node, h.egress);
    if (i < bottleneck) {
      t += serialization_time(first, rate);
    } else if (i == bottleneck) {
      t += serialization_time(size, rate);
    } else {
      t += serialization_time(last, rate);
    }
  }
  return t;
}

}  // namespace bfc
