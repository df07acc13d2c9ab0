#include "bfc/switch/queue_assignment.hpp"

namespace bfc {

DynamicAssigner::DynamicAssigner(std::size_t ports, std::uint32_t slice, std::uint64_t hash_salt,
                                 SimTime sticky_threshold, bool incast_label, Rng rng)
    : table_(ports, slice, hash_salt),
      holds_(ports),
      incast_(ports),
      sticky_(sticky_threshold),
      incast_label_(incast_label),
      rng_(rng) {}

FlowTableEntry& DynamicAssigner::entry_for(PortId egress, std::uint32_t index) {
  return index == incast_index() ? incast_[egress] : table_.at(egress, index);
}

std::vector<DynamicAssigner::QueueHold>& DynamicAssigner::holds(PortId egress, std::uint32_t queues) {
  auto& h = holds_[egress];
  if (h.size() < queues) h.resize(queues);
  return h;
}

std::optional<std::uint32_t> DynamicAssigner::free_queue(PortId egress, const EgressPort& port, SimTime now) {
  auto& h = holds(egress, port.queue_count());
  for (std::uint32_t q = 0; q < port.queue_count(); ++q) {
    const bool cooled =
        h[q].released < 0 || static_cast<std::int64_t>(now) - h[q].released > static_cast<std::int64_t>(sticky_);
    if (h[q].holders == 0 && cooled && port.empty(q)) return q;
  }
  return std::nullopt;
}

Assignment DynamicAssigner::on_enqueue(PortId egress, EgressPort& port, const Packet& p, SimTime now) {
  Assignment a;
  a.entry = incast_label_ && p.incast_label ? incast_index() : table_.index_of(p.fid);
  FlowTableEntry& e = entry_for(egress, a.entry);
  const bool expired = e.size == 0 && now - e.last_activity > sticky_;
  if (!e.used || expired) {
    if (auto q = free_queue(egress, port, now)) {
      e.queue = *q;
    } else {
      e.queue = static_cast<std::uint32_t>(rng_.below(port.queue_count()));
      a.random_fallback = true;
    }
    e.used = true;
    a.reassigned = true;
  }
  a.queue = e.queue;
  a.entry_resident = e.size;
  if (e.size == 0) ++holds(egress, port.queue_count())[e.queue].holders;
  ++e.size;
  e.last_activity = now;
  return a;
}

void DynamicAssigner::on_dequeue(PortId egress, EgressPort& port, const Packet& p, SimTime now) {
  FlowTableEntry& e = entry_for(egress, p.entry);
  --e.size;
  e.last_activity = now;
  if (e.size == 0) {
    QueueHold& h = holds(egress, port.queue_count())[e.queue];
    --h.holders;
    h.released = static_cast<std::int64_t>(now);
  }
}

}  // namespace bfc
