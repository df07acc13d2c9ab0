#include "bfc/scenario/batch.hpp"

#include <exception>

namespace bfc {

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs) {
  std::vector<RunResult> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  const auto n = static_cast<long>(configs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = run_scenario(configs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RunResult> run_batch_serial(const std::vector<ScenarioConfig>& configs) {
  std::vector<RunResult> out;
  out.reserve(configs.size());
  for (const ScenarioConfig& c : configs) out.push_back(run_scenario(c));
  return out;
}

}  // namespace bfc
