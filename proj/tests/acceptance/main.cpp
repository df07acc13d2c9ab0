#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>

#include "bfc/scenario/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite: one PASS/FAIL line per criterion"};
  bfc::experiments::Context ctx;
  ctx.data_dir = BFC_DATA_DIR;
  std::vector<int> only;
  std::string json_out;
  app.add_option("--seed", ctx.seed, "Root seed");
  app.add_option("--data-dir", ctx.data_dir, "Directory holding cdf/*.txt");
  app.add_option("--only", only, "Run only these criterion numbers");
  app.add_option("--json", json_out, "Write detailed results to this file");
  CLI11_PARSE(app, argc, argv);

  nlohmann::json report = nlohmann::json::array();
  int failed = 0;
  for (const auto& c : bfc::experiments::criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const bfc::experiments::Outcome o = bfc::experiments::run_criterion(c, ctx);
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %-32s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", o.criterion, o.name.c_str(), o.seconds,
                o.detail.c_str());
    std::fflush(stdout);
    report.push_back({{"criterion", o.criterion},
                      {"name", o.name},
                      {"pass", o.pass},
                      {"detail", o.detail},
                      {"seconds", o.seconds},
                      {"budget_seconds", o.budget_seconds},
                      {"data", o.data}});
  }
  if (!json_out.empty()) std::ofstream(json_out) << report.dump(2) << "\n";
  std::printf("%d of %zu criteria failed\n", failed, report.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
