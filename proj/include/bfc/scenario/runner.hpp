#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "bfc/metrics/fct.hpp"
#include "bfc/network.hpp"
#include "bfc/scenario/config.hpp"

namespace bfc {

inline constexpr int kSummaryVersion = 1;

struct RunOptions {
  std::ostream* trace = nullptr;
  // Called after the run ends, before the network is torn down.
  std::function<void(Network&)> inspect;
  // Called once flows are registered, before the first event.
  std::function<void(Network&)> prepare;
};

struct RunResult {
  nlohmann::json summary;
  std::vector<FlowRecord> records;
  std::uint64_t flows_total = 0;
  Conservation conservation;
  SimTime end_time = 0;
};

/// Flows described by the workload section, sorted by start time.
std::vector<FlowSpec> build_flows(const ScenarioConfig& cfg, const Topology& topo);

/// Runs one scenario. Throws SimulationError when an invariant breaks.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

/// Versioned CSV of per-flow records.
void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records);

}  // namespace bfc
