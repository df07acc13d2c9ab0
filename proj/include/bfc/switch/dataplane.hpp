#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "bfc/sim/time.hpp"

namespace bfc {

/// Switch dataplane model. Exactly one per run.
///   bfc             dynamic queue assignment + BFC backpressure
///   bfc_stochastic  hash assignment + BFC backpressure
///   sfq_strawman    hash assignment + pause at a fixed 1-hop BDP
///   single_queue_pfc one data queue per egress + BFC backpressure
///   ideal_fq        a queue per flow, unbounded buffer, no backpressure
enum class Dataplane : std::uint8_t { bfc, bfc_stochastic, sfq_strawman, single_queue_pfc, ideal_fq };

const char* to_string(Dataplane d);
Dataplane dataplane_from_string(std::string_view s);

struct DataplaneConfig {
  Dataplane kind = Dataplane::bfc;
  std::uint32_t queues_per_port = 32;
  // One of the physical queues serves pause/resume traffic.
  bool reserve_control_queue = true;
  std::uint64_t buffer_bytes = 12'000'000;
  // Time component of the pause threshold; defaults to the max ingress HRTT.
  std::optional<SimTime> th_time;
  // Defaults to 2 x max ingress HRTT.
  std::optional<SimTime> sticky_threshold;
  // Defaults to HRTT / 2; zero disables the periodic bitmap.
  std::optional<SimTime> bitmap_period;
  bool incast_label = false;
  std::uint32_t flow_table_multiplier = 100;
  std::uint32_t mtu = 1000;
  std::uint32_t control_bytes = 64;
};

/// Data queues per egress at construction time.
std::uint32_t data_queue_count(const DataplaneConfig& cfg);
bool uses_backpressure(Dataplane d);

}  // namespace bfc
