#pragma once

#include <vector>

#include "bfc/scenario/config.hpp"
#include "bfc/scenario/runner.hpp"

namespace bfc {

/// Runs independent scenarios in parallel with OpenMP. Each run owns its
/// simulator and network, so results equal the serial reference exactly and
/// are returned in input order.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs);

/// Serial reference for run_batch.
std::vector<RunResult> run_batch_serial(const std::vector<ScenarioConfig>& configs);

}  // namespace bfc
