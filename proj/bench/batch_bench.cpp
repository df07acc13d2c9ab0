// Times the OpenMP batch runner against the serial reference on a set of
// independent short Clos runs and checks that both produce identical summaries.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bfc/scenario/batch.hpp"
#include "bfc/scenario/experiments.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int runs = argc > 1 ? std::atoi(argv[1]) : 8;
  const bfc::SimTime duration = argc > 2 ? std::atoll(argv[2]) : 1'000'000;
  if (runs <= 0 || duration <= 0) {
    std::fprintf(stderr, "usage: %s [runs] [duration_ns]\n", argv[0]);
    return 2;
  }

  std::vector<bfc::ScenarioConfig> cfgs;
  for (int i = 0; i < runs; ++i) {
    auto j = bfc::experiments::clos_scenario(bfc::Dataplane::bfc, false, static_cast<std::uint64_t>(i + 1));
    j["workload"]["duration_ns"] = duration;
    j["run"]["max_time_ns"] = 4 * duration;
    cfgs.push_back(bfc::parse_scenario(j, BFC_DATA_DIR));
  }

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = bfc::run_batch_serial(cfgs);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = bfc::run_batch(cfgs);
  const double t_parallel = seconds_since(t0);

  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i) same = serial[i].summary.dump() == parallel[i].summary.dump();

  std::printf("runs=%d duration_ns=%lld threads=%d\n", runs, static_cast<long long>(duration), omp_get_max_threads());
  std::printf("serial   %.3f s\n", t_serial);
  std::printf("parallel %.3f s  speedup %.2fx\n", t_parallel, t_serial / t_parallel);
  std::printf("identical %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
