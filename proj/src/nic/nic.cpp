#include "bfc/nic/nic.hpp"

#include <algorithm>
#include <cmath>

#include "bfc/network.hpp"
#include "bfc/nic/e2e_cc.hpp"

namespace bfc {
namespace {

constexpr PortId kPort = 0;
constexpr SimTime kMaxBackoff = 64;

}  // namespace

Nic::Nic(Network& net, NodeId id, const NicConfig& cfg) : Device(net, id), cfg_(cfg) {}

double Nic::window(FlowId fid) const {
  auto it = slot_of_.find(fid);
  if (it == slot_of_.end()) return 0.0;
  return by_slot_.at(it->second).window;
}

void Nic::start_flow(FlowId fid) {
  const FlowInfo& info = net_.flow(fid);
  std::uint32_t slot = 0;
  while (slot < slot_used_.size() && slot_used_[slot]) ++slot;
  if (slot == slot_used_.size()) slot_used_.push_back(false);
  slot_used_[slot] = true;

  SendFlow f;
  f.fid = fid;
  f.slot = slot;
  f.packets = info.packets;
  f.rto_base = cfg_.rto.value_or(static_cast<SimTime>(std::llround(cfg_.rto_multiplier * info.base_rtt)));
  f.rto = f.rto_base;
  const BitRate rate = net_.topology().port_rate(id_, kPort);
  const double bdp = std::ceil(static_cast<double>(bytes_in(info.base_rtt, rate)) / cfg_.mtu);
  if (cfg_.e2e_cc) {
    f.window = std::max(bdp, 1.0);
    f.rtt_target = static_cast<SimTime>(std::llround(cfg_.rtt_target_multiplier * info.base_rtt));
  } else if (cfg_.bdp_inflight_cap) {
    f.window = std::max(bdp, 1.0);
  }
  by_slot_.emplace(slot, f);
  slot_of_.emplace(fid, slot);
  try_send();
}

bool Nic::sendable(const SendFlow& f) const {
  if (f.next_seq >= f.packets || slot_paused(f.slot)) return false;
  if (f.window > 0.0 && static_cast<double>(f.next_seq - f.acked) >= f.window) return false;
  return true;
}

void Nic::try_send() {
  if (busy_) return;
  if (!acks_.empty()) {
    Packet a = std::move(acks_.front());
    acks_.pop_front();
    busy_ = true;
    net_.transmit(id_, kPort, std::move(a));
    return;
  }
  if (by_slot_.empty()) return;
  // Round robin in slot order starting at rr_next_.
  auto it = by_slot_.lower_bound(rr_next_);
  for (std::size_t n = 0; n < by_slot_.size(); ++n) {
    if (it == by_slot_.end()) it = by_slot_.begin();
    if (sendable(it->second)) {
      rr_next_ = it->first + 1;
      send_data(it->second);
      return;
    }
    ++it;
  }
}

void Nic::send_data(SendFlow& f) {
  const FlowInfo& info = net_.flow(f.fid);
  Packet p;
  p.type = PacketType::data;
  p.fid = f.fid;
  p.seq = f.next_seq;
  const std::uint64_t offset = static_cast<std::uint64_t>(p.seq) * cfg_.mtu;
  p.size = static_cast<std::uint32_t>(std::min<std::uint64_t>(cfg_.mtu, info.spec.size - offset));
  p.upstream_q = f.slot;
  p.incast_label = info.spec.labeled;
  p.first_of_flow = p.seq == 0;
  p.route = &info.route;
  p.hop = 0;
  p.sent_at = net_.now();
  if (f.next_seq < f.high_water) {
    ++stats_.retransmits;
    net_.on_retransmit(f.fid, p.size);
  }
  ++f.next_seq;
  f.high_water = std::max(f.high_water, f.next_seq);
  ++stats_.data_sent;
  net_.on_data_injected();
  if (!f.timer_armed) {
    f.deadline = net_.now() + f.rto;
    arm_timer(f);
  }
  busy_ = true;
  net_.transmit(id_, kPort, std::move(p));
}

void Nic::arm_timer(SendFlow& f) {
  f.timer_armed = true;
  net_.sim().schedule_timer(f.deadline, this, f.fid);
}

void Nic::on_timer(std::uint64_t tag) {
  auto sit = slot_of_.find(tag);
  if (sit == slot_of_.end()) return;
  SendFlow& f = by_slot_.at(sit->second);
  f.timer_armed = false;
  if (f.acked >= f.packets) return;
  const SimTime now = net_.now();
  if (now < f.deadline) {
    arm_timer(f);
    return;
  }
  if (f.acked == f.next_seq) return;  // nothing outstanding; re-armed on next send
  if (slot_paused(f.slot)) {
    // Packets held back by backpressure are not lost.
    f.deadline = now + f.rto;
    arm_timer(f);
    return;
  }
  ++stats_.timeouts;
  f.next_seq = f.acked;
  f.rto = std::min(f.rto * 2, f.rto_base * kMaxBackoff);
  f.deadline = now + f.rto;
  arm_timer(f);
  try_send();
}

void Nic::receive(Packet&& p, PortId) {
  switch (p.type) {
    case PacketType::data:
      on_data(std::move(p));
      return;
    case PacketType::ack:
      on_ack(p);
      return;
    case PacketType::pause:
    case PacketType::resume:
      ++stats_.pauses_received;
      set_paused(p.control_queue, p.type == PacketType::pause);
      return;
    case PacketType::pause_bitmap: {
      const auto& set = *p.paused_set;
      const std::size_t n = std::max<std::size_t>(paused_.size(), set.empty() ? 0 : set.back() + 1);
      for (std::uint32_t q = 0; q < n; ++q) {
        set_paused(q, std::binary_search(set.begin(), set.end(), q));
      }
      return;
    }
  }
}

void Nic::set_paused(std::uint32_t slot, bool paused) {
  if (slot >= paused_.size()) {
    if (!paused) return;
    paused_.resize(slot + 1, false);
  }
  paused_[slot] = paused;
  if (!paused) try_send();
}

void Nic::on_data(Packet&& p) {
  net_.on_data_arrived_at_host();
  auto [it, inserted] = recv_.try_emplace(p.fid);
  RecvFlow& r = it->second;
  if (inserted) r.packets = net_.flow(p.fid).packets;
  if (p.seq == r.expected) {
    ++r.expected;
    if (r.expected == r.packets) net_.on_flow_delivered(p.fid);
  }
  Packet a;
  a.type = PacketType::ack;
  a.fid = p.fid;
  a.size = cfg_.ack_bytes;
  a.ack_next = r.expected;
  a.sent_at = p.sent_at;
  a.route = &net_.flow(p.fid).reverse;
  a.hop = 0;
  ++stats_.acks_sent;
  acks_.push_back(std::move(a));
  try_send();
}

void Nic::on_ack(const Packet& ack) {
  auto sit = slot_of_.find(ack.fid);
  if (sit == slot_of_.end()) return;
  SendFlow& f = by_slot_.at(sit->second);
  const SimTime now = net_.now();
  if (cfg_.e2e_cc) f.window = e2e_window_update(f.window, now - ack.sent_at, f.rtt_target);
  if (ack.ack_next > f.acked) {
    f.acked = ack.ack_next;
    f.next_seq = std::max(f.next_seq, f.acked);
    f.rto = f.rto_base;
    f.deadline = now + f.rto;
  }
  if (f.acked >= f.packets) {
    const FlowId fid = f.fid;
    slot_used_[f.slot] = false;
    by_slot_.erase(sit->second);
    slot_of_.erase(sit);
    net_.on_flow_acked(fid);
  }
  try_send();
}

void Nic::on_tx_done(PortId) {
  busy_ = false;
  try_send();
}

}  // namespace bfc
