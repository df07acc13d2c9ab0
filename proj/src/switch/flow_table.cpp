#include "bfc/switch/flow_table.hpp"

#include "bfc/sim/event_queue.hpp"

namespace bfc {

std::uint32_t PauseCounterTable::increment(PortId ingress, std::uint32_t upstream_q) {
  auto& row = counters_.at(ingress);
  if (row.size() <= upstream_q) row.resize(upstream_q + 1, 0);
  ++total_;
  return ++row[upstream_q];
}

std::uint32_t PauseCounterTable::decrement(PortId ingress, std::uint32_t upstream_q) {
  auto& row = counters_.at(ingress);
  sim_check(upstream_q < row.size() && row[upstream_q] > 0, "pause counter underflow");
  --total_;
  return --row[upstream_q];
}

std::uint32_t PauseCounterTable::get(PortId ingress, std::uint32_t upstream_q) const {
  const auto& row = counters_.at(ingress);
  return upstream_q < row.size() ? row[upstream_q] : 0;
}

std::vector<std::uint32_t> PauseCounterTable::paused_set(PortId ingress) const {
  std::vector<std::uint32_t> out;
  const auto& row = counters_.at(ingress);
  for (std::uint32_t q = 0; q < row.size(); ++q) {
    if (row[q] != 0) out.push_back(q);
  }
  return out;
}

}  // namespace bfc
