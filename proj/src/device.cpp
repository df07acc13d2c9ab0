#include "bfc/device.hpp"

#include "bfc/network.hpp"

namespace bfc {

void Device::handle(Event& ev) {
  switch (ev.kind) {
    case EventKind::packet_arrival:
      if (ev.packet.type == PacketType::data) net_.on_data_left_link();
      receive(std::move(ev.packet), ev.port);
      return;
    case EventKind::tx_done:
      on_tx_done(ev.port);
      return;
    case EventKind::timer:
      on_timer(ev.tag);
      return;
  }
}

}  // namespace bfc
