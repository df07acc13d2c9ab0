#include "bfc/packet.hpp"

namespace bfc {

const char* to_string(PacketType t) {
  switch (t) {
    case PacketType::data:
      return "data";
    case PacketType::ack:
      return "ack";
    case PacketType::pause:
      return "pause";
    case PacketType::resume:
      return "resume";
    case PacketType::pause_bitmap:
      return "pause_bitmap";
  }
  return "?";
}

}  // namespace bfc
