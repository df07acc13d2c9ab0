#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bfc/scenario/config.hpp"
#include "bfc/switch/dataplane.hpp"

namespace bfc::experiments {

struct Context {
  std::uint64_t seed = 1;
  // Directory holding cdf/*.txt.
  std::string data_dir;
};

/// Verdict of one acceptance criterion.
struct Outcome {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  nlohmann::json data;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct Criterion {
  int id;
  const char* key;  // name of the canned experiment
  const char* title;
  double budget_seconds;
  Outcome (*run)(const Context&);
};

/// All acceptance criteria in order.
const std::vector<Criterion>& criteria();
const Criterion* find_criterion(const std::string& key);
/// Runs one criterion and fills in timing; a runtime over budget fails it.
Outcome run_criterion(const Criterion& c, const Context& ctx);

// Scenario builders. Each returns a config accepted by parse_scenario with
// ctx.data_dir as the base directory.

/// Two backlogged flows into one 100 Gbps port, 2 us hop RTT.
nlohmann::json threshold_scenario(SimTime th_time);
/// One backlogged flow whose access link runs at x times the bottleneck.
nlohmann::json ef_scenario(double x);
/// Poisson arrivals at load rho onto one 100 Gbps port under ideal FQ.
nlohmann::json active_flows_scenario(double rho, std::uint64_t seed);
/// Five simultaneous flows through one 32-queue egress.
nlohmann::json birthday_scenario(Dataplane kind, std::uint64_t seed);
/// Three-switch testbed with flow groups 1, 2 and 3.
nlohmann::json spreading_scenario(Dataplane kind, std::uint32_t group2, std::uint64_t seed);
/// Three switches in a ring with circular two-hop routes.
nlohmann::json ring_scenario(const std::vector<NamedElide>& elide);
/// Incast of `flows` senders spread over `upstreams` switches feeding one port.
nlohmann::json incast_spread_scenario(std::uint32_t flows, std::uint32_t upstreams, std::uint32_t queues);
/// 16-server Clos with hadoop-like background at 60% load.
nlohmann::json clos_scenario(Dataplane kind, bool incast, std::uint64_t seed);
/// 64 persistent elephants into one receiver plus 1 KB mice.
nlohmann::json elephants_scenario(Dataplane kind, bool e2e, std::uint64_t seed);

/// Names accepted by canned().
std::vector<std::string> canned_names();
/// A canned scenario by name, or nullopt.
std::optional<nlohmann::json> canned(const std::string& name, std::uint64_t seed);

/// Elide entries that make the ring scenario's backpressure graph acyclic.
std::vector<NamedElide> ring_elide_table();

}  // namespace bfc::experiments
