#include "bfc/switch/switch.hpp"

#include <algorithm>
#include <ostream>

#include "bfc/baselines/assigners.hpp"
#include "bfc/network.hpp"

namespace bfc {
namespace {

constexpr std::uint64_t kBitmapTimer = 1;

}  // namespace

Switch::Switch(Network& net, NodeId id, const DataplaneConfig& cfg, std::uint64_t hash_salt, Rng rng)
    : Device(net, id),
      cfg_(cfg),
      counters_(net.topology().port_count(id)),
      buffer_(cfg.kind == Dataplane::ideal_fq ? SharedBuffer::kUnbounded : cfg.buffer_bytes) {
  const Topology& topo = net.topology();
  const std::size_t n = topo.port_count(id);
  SimTime max_hrtt = 0;
  ports_.reserve(n);
  for (PortId p = 0; p < n; ++p) {
    ports_.emplace_back(data_queue_count(cfg), cfg.mtu);
    ports_.back().rate = topo.port_rate(id, p);
    max_hrtt = std::max(max_hrtt, topo.hop_rtt(id, p));
  }
  elided_.assign(n * n, false);
  th_time_ = cfg.th_time.value_or(max_hrtt);
  sticky_ = cfg.sticky_threshold.value_or(2 * max_hrtt);
  bitmap_period_ = cfg.bitmap_period.value_or(max_hrtt / 2);

  AssignerParams params;
  params.ports = n;
  params.table_slice = cfg.flow_table_multiplier * cfg.queues_per_port;
  params.hash_salt = hash_salt;
  params.sticky_threshold = sticky_;
  params.incast_label = cfg.incast_label;
  assigner_ = make_assigner(cfg.kind, params, rng);
}

void Switch::start() {
  if (uses_backpressure(cfg_.kind) && bitmap_period_ > 0) {
    net_.sim().schedule_timer(net_.now() + bitmap_period_, this, kBitmapTimer);
  }
}

void Switch::elide(PortId ingress, PortId egress) {
  sim_check(ingress < ports_.size() && egress < ports_.size(), "elide entry names a nonexistent port");
  elided_[ingress * ports_.size() + egress] = true;
}

std::uint64_t Switch::pause_threshold(PortId egress, std::uint32_t n_active) const {
  const std::uint64_t bdp = bytes_in(th_time_, ports_[egress].rate);
  if (cfg_.kind == Dataplane::sfq_strawman) return bdp;
  return bdp / std::max<std::uint32_t>(n_active, 1);
}

PortId Switch::egress_of(const Packet& p) const {
  sim_check(p.route != nullptr && p.hop < p.route->hops.size(), "packet without a route reached a switch");
  const Hop& h = p.route->hops[p.hop];
  sim_check(h.node == id_, "packet route does not pass through this switch");
  return h.egress;
}

void Switch::receive(Packet&& p, PortId port) {
  switch (p.type) {
    case PacketType::data:
      enqueue_data(std::move(p), port);
      return;
    case PacketType::ack:
      forward_control(std::move(p));
      return;
    case PacketType::pause:
    case PacketType::resume:
      apply_pause(port, p.control_queue, p.type == PacketType::pause);
      return;
    case PacketType::pause_bitmap: {
      EgressPort& q = ports_[port].queue;
      const auto& set = *p.paused_set;
      for (std::uint32_t id : set) {
        if (id >= q.queue_count()) ++stats_.unknown_pause_ids;
      }
      for (std::uint32_t i = 0; i < q.queue_count(); ++i) {
        apply_pause(port, i, std::binary_search(set.begin(), set.end(), i));
      }
      return;
    }
  }
}

void Switch::apply_pause(PortId port, std::uint32_t q, bool paused) {
  EgressPort& eq = ports_[port].queue;
  if (q >= eq.queue_count()) {
    ++stats_.unknown_pause_ids;
    return;
  }
  eq.set_paused(q, paused);
  if (!paused) try_send(port);
}

void Switch::forward_control(Packet&& p) {
  ++p.hop;
  const PortId out = egress_of(p);
  ports_[out].queue.push_control(std::move(p));
  try_send(out);
}

void Switch::enqueue_data(Packet&& p, PortId ingress) {
  ++p.hop;
  const PortId out = egress_of(p);
  Egress& eg = ports_[out];
  const SimTime now = net_.now();
  if (!buffer_.try_admit(p.size)) {
    ++stats_.drops;
    net_.on_data_dropped();
    if (net_.trace()) trace_line("drop", p, 0, 0);
    return;
  }

  const Assignment a = assigner_->on_enqueue(out, eg.queue, p, now);
  p.queue = a.queue;
  p.entry = a.entry;
  p.ingress_port = ingress;
  ++stats_.enqueues;
  if (a.reassigned) ++stats_.reassignments;
  if (a.random_fallback) ++stats_.random_assignments;

  auto [it, inserted] = eg.resident.try_emplace(p.fid, 0);
  const std::size_t before = eg.queue.queue_packets(a.queue);
  if (before > it->second) ++stats_.shared_enqueues;
  if (a.entry_resident != kNoQueue && before > a.entry_resident) ++stats_.entry_shared_enqueues;
  ++it->second;
  if (inserted) eg.flows.set(now, static_cast<std::uint32_t>(eg.resident.size()));

  std::uint32_t ctr = 0;
  const bool elided = elided_[ingress * ports_.size() + out];
  if (uses_backpressure(cfg_.kind) && !elided && p.upstream_q != kNoQueue) {
    const bool becomes_active = eg.queue.empty(a.queue) && !eg.queue.paused(a.queue);
    const std::uint32_t n_active = eg.queue.active_queues() + (becomes_active ? 1 : 0);
    const std::uint64_t bytes_after = eg.queue.queue_bytes(a.queue) + p.size;
    if (bytes_after > pause_threshold(out, n_active)) {
      p.counter_incr = true;
      ctr = counters_.increment(ingress, p.upstream_q);
      if (ctr == 1) send_control(ingress, PacketType::pause, p.upstream_q);
    }
  }

  if (net_.trace()) trace_line("enq", p, static_cast<std::uint32_t>(before + 1), ctr);
  eg.queue.push(a.queue, std::move(p), now);
  try_send(out);
}

void Switch::send_control(PortId port, PacketType type, std::uint32_t q) {
  Packet c;
  c.type = type;
  c.size = cfg_.control_bytes;
  c.control_queue = q;
  if (type == PacketType::pause) ++stats_.pauses_sent;
  if (type == PacketType::resume) ++stats_.resumes_sent;
  ports_[port].queue.push_control(std::move(c));
  try_send(port);
}

void Switch::try_send(PortId port) {
  Egress& eg = ports_[port];
  if (eg.busy) return;
  std::optional<Packet> next = eg.queue.dequeue(net_.now());
  if (!next) return;
  Packet& p = *next;
  if (p.type == PacketType::data) {
    const SimTime now = net_.now();
    assigner_->on_dequeue(port, eg.queue, p, now);
    auto it = eg.resident.find(p.fid);
    if (--it->second == 0) {
      eg.resident.erase(it);
      eg.flows.set(now, static_cast<std::uint32_t>(eg.resident.size()));
    }
    std::uint32_t ctr = 0;
    if (p.counter_incr) {
      ctr = counters_.decrement(p.ingress_port, p.upstream_q);
      if (ctr == 0) send_control(p.ingress_port, PacketType::resume, p.upstream_q);
    }
    buffer_.release(p.size);
    ++stats_.data_dequeues;
    net_.note_switch_dequeue();
    if (net_.trace()) trace_line("deq", p, static_cast<std::uint32_t>(eg.queue.queue_packets(p.queue)), ctr);
    p.upstream_q = p.queue;
    p.queue = kNoQueue;
    p.entry = kNoQueue;
    p.counter_incr = false;
  }
  eg.busy = true;
  net_.transmit(id_, port, std::move(p));
}

void Switch::on_tx_done(PortId port) {
  ports_[port].busy = false;
  try_send(port);
}

void Switch::on_timer(std::uint64_t tag) {
  if (tag != kBitmapTimer) return;
  send_bitmaps();
  net_.sim().schedule_timer(net_.now() + bitmap_period_, this, kBitmapTimer);
}

void Switch::send_bitmaps() {
  for (PortId p = 0; p < ports_.size(); ++p) {
    Packet c;
    c.type = PacketType::pause_bitmap;
    c.size = cfg_.control_bytes;
    c.paused_set = std::make_shared<const std::vector<std::uint32_t>>(counters_.paused_set(p));
    ++stats_.bitmaps_sent;
    ports_[p].queue.push_control(std::move(c));
    try_send(p);
  }
}

std::uint64_t Switch::resident_data_packets() const {
  std::uint64_t n = 0;
  for (const Egress& e : ports_) n += e.queue.data_packets();
  return n;
}

void Switch::reset_stats(SimTime now) {
  stats_ = SwitchStats{};
  for (Egress& e : ports_) {
    e.queue.reset_stats(now);
    e.flows.reset(now);
  }
}

void Switch::audit() const {
  std::uint64_t bytes = 0;
  std::uint64_t marked = 0;
  std::vector<std::vector<std::uint32_t>> expect(ports_.size());
  for (const Egress& e : ports_) {
    bytes += e.queue.data_bytes();
    std::uint64_t flow_total = 0;
    for (const auto& [fid, n] : e.resident) flow_total += n;
    sim_check(flow_total == e.queue.data_packets(), "resident flow counts disagree with queue contents");
    for (std::uint32_t q = 0; q < e.queue.queue_count(); ++q) {
      for (const Packet& p : e.queue.contents(q)) {
        if (!p.counter_incr) continue;
        ++marked;
        auto& row = expect[p.ingress_port];
        if (row.size() <= p.upstream_q) row.resize(p.upstream_q + 1, 0);
        ++row[p.upstream_q];
      }
    }
  }
  sim_check(bytes == buffer_.occupied(), "shared buffer occupancy disagrees with queue contents");
  sim_check(marked == counters_.total(), "pause counters disagree with marked packets");
  for (PortId in = 0; in < expect.size(); ++in) {
    for (std::uint32_t q = 0; q < expect[in].size(); ++q) {
      sim_check(expect[in][q] == counters_.get(in, q), "pause counter mismatch");
    }
  }
}

void Switch::trace_line(const char* op, const Packet& p, std::uint32_t qlen, std::uint32_t ctr) const {
  *net_.trace() << "t=" << net_.now() << " sw=" << id_ << " op=" << op << " fid=" << p.fid << " q=" << p.queue
                << " qlen=" << qlen << " ctr=" << ctr << '\n';
}

}  // namespace bfc
