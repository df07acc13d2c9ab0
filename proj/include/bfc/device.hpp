#pragma once

#include <cstdint>

#include "bfc/packet.hpp"
#include "bfc/sim/event_queue.hpp"

namespace bfc {

class Network;

/// A node in the simulated network. All state changes happen inside the
/// handlers below, called by the event kernel.
class Device : public EventTarget {
 public:
  Device(Network& net, NodeId id) : net_(net), id_(id) {}

  NodeId id() const { return id_; }

  virtual void receive(Packet&& p, PortId port) = 0;
  virtual void on_tx_done(PortId port) = 0;
  virtual void on_timer(std::uint64_t tag) = 0;

  void handle(Event& ev) final;

 protected:
  Network& net_;
  NodeId id_;
};

}  // namespace bfc
