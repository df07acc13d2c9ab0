#include "bfc/network.hpp"

#include <algorithm>
#include <string>

#include "bfc/nic/nic.hpp"
#include "bfc/switch/switch.hpp"

namespace bfc {
namespace {

constexpr std::uint64_t kTagShift = 56;
constexpr std::uint64_t kFlowStart = 1;
constexpr std::uint64_t kSample = 2;

std::uint64_t make_tag(std::uint64_t kind, std::uint64_t value) { return (kind << kTagShift) | value; }

}  // namespace

Network::Network(Simulator& sim, const Topology& topo, const Router& router, NetworkConfig cfg)
    : sim_(sim), topo_(topo), router_(router), cfg_(std::move(cfg)) {
  const std::size_t n = topo.size();
  switches_.assign(n, nullptr);
  nics_.assign(n, nullptr);
  port_base_.resize(n);
  std::size_t ports = 0;
  const std::uint64_t salt = Rng::derive_seed(sim.seed(), "queue_hash");
  for (NodeId id = 0; id < n; ++id) {
    port_base_[id] = ports;
    ports += topo.port_count(id);
    if (is_switch(topo.node(id).kind)) {
      auto sw = std::make_unique<Switch>(*this, id, cfg_.dataplane, salt, sim.stream("switch/" + std::to_string(id)));
      switches_[id] = sw.get();
      devices_.push_back(std::move(sw));
    } else {
      auto nic = std::make_unique<Nic>(*this, id, cfg_.nic);
      nics_[id] = nic.get();
      devices_.push_back(std::move(nic));
    }
  }
  link_stats_.resize(ports);
  occupancy_samples_.resize(n);
  for (const ElideEntry& e : cfg_.elide) {
    if (e.node >= n || switches_[e.node] == nullptr) throw ConfigError("elide entry does not name a switch");
    switches_[e.node]->elide(e.ingress, e.egress);
  }
  faults_ = cfg_.faults;
  for (Switch* sw : switches_) {
    if (sw) sw->start();
  }
  if (cfg_.sample_period > 0) sim_.schedule_timer(sim_.now() + cfg_.sample_period, this, make_tag(kSample, 0));
}

Network::~Network() = default;

std::vector<Switch*> Network::switches() const {
  std::vector<Switch*> out;
  for (Switch* s : switches_) {
    if (s) out.push_back(s);
  }
  return out;
}

FlowId Network::add_flow(const FlowSpec& spec) {
  if (spec.size == 0) throw ConfigError("flow size must be positive");
  if (spec.src >= topo_.size() || nics_[spec.src] == nullptr) throw ConfigError("flow source is not a server");
  if (spec.dst >= topo_.size() || nics_[spec.dst] == nullptr) throw ConfigError("flow destination is not a server");
  if (spec.start < sim_.now()) throw ConfigError("flow starts in the past");
  const FlowId fid = flows_.size() + 1;
  FlowInfo& f = flows_.emplace_back();
  f.fid = fid;
  f.spec = spec;
  f.route = router_.route(spec.src, spec.dst, fid);
  f.reverse = router_.reverse(f.route);
  const std::uint32_t mtu = cfg_.nic.mtu;
  f.packets = static_cast<std::uint32_t>((spec.size + mtu - 1) / mtu);
  f.base_rtt = base_rtt(topo_, f.route);
  f.ideal_fct = ideal_fct(spec.size, topo_, f.route, mtu);
  sim_.schedule_timer(spec.start, this, make_tag(kFlowStart, fid));
  return fid;
}

RunStats Network::run(SimTime max_time, bool stop_when_done) {
  stop_when_done_ = stop_when_done;
  if (stop_when_done && !flows_.empty() && acked_count_ == flows_.size()) return {0, sim_.now()};
  return sim_.run_until(max_time);
}

void Network::handle(Event& ev) {
  const std::uint64_t kind = ev.tag >> kTagShift;
  const std::uint64_t value = ev.tag & ((std::uint64_t{1} << kTagShift) - 1);
  if (kind == kFlowStart) {
    nics_[flow(value).spec.src]->start_flow(value);
  } else if (kind == kSample) {
    for (Switch* sw : switches_) {
      if (sw) occupancy_samples_[sw->id()].push_back(sw->buffer().occupied());
    }
    if (cfg_.audit) audit();
    sim_.schedule_timer(sim_.now() + cfg_.sample_period, this, ev.tag);
  }
}

bool Network::fault_drops(NodeId from, PortId port, const Packet& p) {
  if (faults_.empty()) return false;
  const NodeId to = topo_.peer(from, port).node;
  for (FaultSpec& f : faults_) {
    if (f.count > 0 && f.from == from && f.to == to && f.type == p.type && sim_.now() >= f.after) {
      --f.count;
      return true;
    }
  }
  return false;
}

void Network::transmit(NodeId from, PortId port, Packet&& p) {
  const SimTime now = sim_.now();
  const SimTime ser = serialization_time(p.size, topo_.port_rate(from, port));
  LinkStats& ls = link_stats_[port_index(from, port)];
  const SimTime begin = std::max(now, measure_from_);
  const SimTime busy = now + ser > begin ? now + ser - begin : 0;
  ls.busy += busy;
  if (p.type == PacketType::data) {
    ls.data_busy += busy;
    ++ls.data_packets;
  } else {
    ++ls.control_packets;
  }

  Event done;
  done.fire_at = now + ser;
  done.target = devices_[from].get();
  done.kind = EventKind::tx_done;
  done.port = port;
  sim_.schedule(std::move(done));

  if (fault_drops(from, port, p)) {
    if (p.type == PacketType::data) on_data_dropped();
    return;
  }
  if (p.type == PacketType::data) ++conservation_.in_transit;
  const PortRef peer = topo_.peer(from, port);
  Event arrive;
  arrive.fire_at = now + ser + topo_.one_way_delay(from, port);
  arrive.target = devices_[peer.node].get();
  arrive.kind = EventKind::packet_arrival;
  arrive.port = peer.port;
  arrive.packet = std::move(p);
  sim_.schedule(std::move(arrive));
}

void Network::on_flow_delivered(FlowId fid) {
  FlowInfo& f = flow(fid);
  if (f.delivered) return;
  f.delivered = true;
  f.finish = sim_.now();
  ++delivered_count_;
}

void Network::on_flow_acked(FlowId fid) {
  FlowInfo& f = flow(fid);
  if (f.acked) return;
  f.acked = true;
  ++acked_count_;
  if (stop_when_done_ && acked_count_ == flows_.size()) sim_.stop();
}

void Network::set_measure_from(SimTime t) {
  measure_from_ = t;
  for (LinkStats& ls : link_stats_) ls = LinkStats{};
}

double Network::utilization(NodeId node, PortId port, SimTime until) const {
  if (until <= measure_from_) return 0.0;
  const double u = static_cast<double>(link_stats(node, port).data_busy) / static_cast<double>(until - measure_from_);
  return std::min(u, 1.0);
}

std::vector<FlowRecord> Network::flow_records() const {
  std::vector<FlowRecord> out;
  for (const FlowInfo& f : flows_) {
    if (!f.delivered) continue;
    FlowRecord r;
    r.fid = f.fid;
    r.src = f.spec.src;
    r.dst = f.spec.dst;
    r.size = f.spec.size;
    r.start = f.spec.start;
    r.finish = f.finish;
    r.ideal_fct = f.ideal_fct;
    r.retransmitted_bytes = f.retransmitted_bytes;
    r.is_incast = f.spec.incast;
    r.group = f.spec.group;
    out.push_back(r);
  }
  return out;
}

Conservation Network::conservation() const {
  Conservation c = conservation_;
  c.resident = 0;
  for (const Switch* sw : switches_) {
    if (sw) c.resident += sw->resident_data_packets();
  }
  return c;
}

void Network::audit() const {
  for (const Switch* sw : switches_) {
    if (sw) sw->audit();
  }
  sim_check(conservation().balanced(), "packet conservation violated");
}

}  // namespace bfc
