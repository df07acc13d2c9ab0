#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bfc/network.hpp"
#include "bfc/topology/topology_io.hpp"
#include "bfc/workload/generator.hpp"

namespace bfc {

struct BackgroundConfig {
  std::string cdf;  // path, resolved against the config's directory
  BackgroundSpec spec;
};

/// `count` copies of one flow; each copy starts at start + U[0, jitter).
struct FlowGroupConfig {
  std::string src;
  std::string dst;
  std::uint64_t size = 0;
  SimTime start = 0;
  std::uint32_t count = 1;
  SimTime jitter = 0;
  std::uint32_t group = 0;
  bool labeled = false;
};

struct WorkloadConfig {
  SimTime start = 0;
  SimTime duration = 0;
  std::optional<BackgroundConfig> background;
  std::optional<IncastSpec> incast;
  std::vector<FlowGroupConfig> flows;
};

struct RunConfig {
  SimTime max_time = 100 * kMillisecond;
  // Stop as soon as every flow has been acknowledged.
  bool drain = true;
  SimTime warmup = 0;
  bool audit = false;
};

struct WatchPort {
  std::string from;
  std::string to;
};

struct MetricsConfig {
  SimTime sample_period = 10 * kMicrosecond;
  std::vector<WatchPort> watch_ports;
  bool flow_csv = false;
  std::vector<std::uint64_t> size_buckets;
};

struct NamedElide {
  std::string node;
  PortId ingress = 0;
  PortId egress = 0;
};

struct NamedFault {
  std::string from;
  std::string to;
  PacketType packet = PacketType::resume;
  std::uint32_t count = 1;
  SimTime after = 0;
};

/// A complete, validated run description.
struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  TopologySpec topology;
  DataplaneConfig dataplane;
  NicConfig nic;
  // Unset means: on for ideal_fq, off otherwise.
  std::optional<bool> bdp_inflight_cap;
  WorkloadConfig workload;
  RunConfig run;
  MetricsConfig metrics;
  std::vector<NamedElide> elide;
  std::vector<NamedFault> faults;
};

/// Validates `j`, rejecting unknown fields. Relative file paths are resolved
/// against `base_dir`.
ScenarioConfig parse_scenario(const nlohmann::json& j, const std::string& base_dir = ".");

/// Reads and parses a config file; errors carry `path:line:` prefixes.
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json load_json_file(const std::string& path);

/// Sets the value at a dotted path ("workload.background.load"), creating
/// intermediate objects. Array elements are addressed by index.
void set_dotted(nlohmann::json& j, const std::string& path, const nlohmann::json& value);

/// Line (1-based) of the first occurrence of `"key"` in `text`, or 0.
int line_of_key(const std::string& text, const std::string& key);

PacketType packet_type_from_string(const std::string& s);

}  // namespace bfc
