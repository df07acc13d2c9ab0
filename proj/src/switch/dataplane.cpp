#include "bfc/switch/dataplane.hpp"

#include <string>

#include "bfc/topology/topology.hpp"

namespace bfc {

const char* to_string(Dataplane d) {
  switch (d) {
    case Dataplane::bfc:
      return "bfc";
    case Dataplane::bfc_stochastic:
      return "bfc_stochastic";
    case Dataplane::sfq_strawman:
      return "sfq_strawman";
    case Dataplane::single_queue_pfc:
      return "single_queue_pfc";
    case Dataplane::ideal_fq:
      return "ideal_fq";
  }
  return "?";
}

Dataplane dataplane_from_string(std::string_view s) {
  for (Dataplane d : {Dataplane::bfc, Dataplane::bfc_stochastic, Dataplane::sfq_strawman, Dataplane::single_queue_pfc,
                      Dataplane::ideal_fq}) {
    if (s == to_string(d)) return d;
  }
  throw ConfigError("unknown dataplane '" + std::string(s) + "'");
}

std::uint32_t data_queue_count(const DataplaneConfig& cfg) {
  switch (cfg.kind) {
    case Dataplane::single_queue_pfc:
      return 1;
    case Dataplane::ideal_fq:
      return 0;
    default:
      break;
  }
  const std::uint32_t reserved = cfg.reserve_control_queue ? 1 : 0;
  if (cfg.queues_per_port <= reserved) throw ConfigError("queues_per_port leaves no data queue");
  return cfg.queues_per_port - reserved;
}

bool uses_backpressure(Dataplane d) { return d != Dataplane::ideal_fq; }

}  // namespace bfc
