#include "bfc/baselines/assigners.hpp"

namespace bfc {

std::uint32_t sfq_queue(FlowId fid, std::uint64_t hash_salt, std::uint32_t queues) {
  return static_cast<std::uint32_t>(mix64(fid ^ hash_salt) % queues);
}

Assignment PerFlowAssigner::on_enqueue(PortId egress, EgressPort& port, const Packet& p, SimTime) {
  PortState& st = ports_[egress];
  auto it = st.flows.find(p.fid);
  if (it == st.flows.end()) {
    std::uint32_t q;
    if (!st.free_queues.empty()) {
      q = st.free_queues.back();
      st.free_queues.pop_back();
    } else {
      q = port.add_queue();
    }
    it = st.flows.emplace(p.fid, std::pair{q, 0u}).first;
  }
  Assignment a;
  a.queue = it->second.first;
  a.entry_resident = it->second.second;
  ++it->second.second;
  return a;
}

void PerFlowAssigner::on_dequeue(PortId egress, EgressPort&, const Packet& p, SimTime) {
  PortState& st = ports_[egress];
  auto it = st.flows.find(p.fid);
  if (--it->second.second == 0) {
    st.free_queues.push_back(it->second.first);
    st.flows.erase(it);
  }
}

std::unique_ptr<QueueAssigner> make_assigner(Dataplane kind, const AssignerParams& params, Rng rng) {
  switch (kind) {
    case Dataplane::bfc:
      return std::make_unique<DynamicAssigner>(params.ports, params.table_slice, params.hash_salt,
                                               params.sticky_threshold, params.incast_label, rng);
    case Dataplane::bfc_stochastic:
    case Dataplane::sfq_strawman:
      return std::make_unique<StochasticAssigner>(params.hash_salt);
    case Dataplane::single_queue_pfc:
      return std::make_unique<SingleQueueAssigner>();
    case Dataplane::ideal_fq:
      return std::make_unique<PerFlowAssigner>(params.ports);
  }
  return nullptr;
}

}  // namespace bfc
