#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bfc/analysis/deadlock.hpp"
#include "bfc/scenario/batch.hpp"
#include "bfc/scenario/config.hpp"
#include "bfc/scenario/experiments.hpp"
#include "bfc/scenario/runner.hpp"
#include "bfc/topology/topology_io.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace ex = bfc::experiments;

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string trace;
  std::string out_dir;
  std::string data_dir = BFC_DATA_DIR;
};

std::string base_dir_of(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

// A config file, or the name of a canned scenario.
json load_config_json(const std::string& what, const Common& c, std::string& base) {
  if (fs::exists(what)) {
    base = base_dir_of(what);
    return bfc::load_json_file(what);
  }
  if (auto j = ex::canned(what, c.seed.value_or(1))) {
    base = c.data_dir;
    return *j;
  }
  throw bfc::ConfigError("'" + what + "' is neither a config file nor a canned scenario");
}

bfc::ScenarioConfig to_config(const json& j, const std::string& base, const std::string& path) {
  if (!fs::exists(path)) return bfc::parse_scenario(j, base);
  // Re-read from disk so errors carry line numbers.
  return bfc::load_scenario(path);
}

void write_outputs(const fs::path& dir, const std::string& stem, const bfc::RunResult& r) {
  fs::create_directories(dir);
  std::ofstream(dir / (stem + ".summary.json")) << r.summary.dump(2) << "\n";
  std::ofstream csv(dir / (stem + ".flows.csv"));
  bfc::write_flow_csv(csv, r.records);
}

int cmd_run(const std::string& what, const std::vector<std::string>& sets, const Common& c) {
  if (const ex::Criterion* crit = ex::find_criterion(what)) {
    ex::Context ctx;
    ctx.seed = c.seed.value_or(1);
    ctx.data_dir = c.data_dir;
    const ex::Outcome o = ex::run_criterion(*crit, ctx);
    const json out = {{"version", bfc::kSummaryVersion},
                      {"experiment", crit->key},
                      {"seed", ctx.seed},
                      {"result", o.data},
                      {"pass", o.pass},
                      {"detail", o.detail}};
    std::cout << out.dump(2) << "\n";
    if (!c.out_dir.empty()) {
      fs::create_directories(c.out_dir);
      std::ofstream(fs::path(c.out_dir) / (std::string(crit->key) + ".json")) << out.dump(2) << "\n";
    }
    return EXIT_SUCCESS;
  }
  std::string base;
  json j = load_config_json(what, c, base);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw bfc::ConfigError("--set expects path=value, got '" + s + "'");
    const std::string value = s.substr(eq + 1);
    json v;
    try {
      v = json::parse(value);
    } catch (const json::parse_error&) {
      v = value;
    }
    bfc::set_dotted(j, s.substr(0, eq), v);
  }
  if (c.seed) j["seed"] = *c.seed;
  const bfc::ScenarioConfig cfg = sets.empty() && !c.seed ? to_config(j, base, what) : bfc::parse_scenario(j, base);

  std::unique_ptr<std::ofstream> trace;
  bfc::RunOptions opts;
  if (!c.trace.empty()) {
    trace = std::make_unique<std::ofstream>(c.trace);
    if (!*trace) throw bfc::ConfigError("cannot open trace file '" + c.trace + "'");
    opts.trace = trace.get();
  }
  const bfc::RunResult r = bfc::run_scenario(cfg, opts);
  std::cout << r.summary.dump(2) << "\n";
  if (!c.out_dir.empty()) write_outputs(c.out_dir, cfg.name, r);
  return EXIT_SUCCESS;
}

int cmd_sweep(const std::string& what, const std::string& param, const std::vector<std::string>& values,
              const Common& c) {
  std::string base;
  const json j = load_config_json(what, c, base);
  const std::uint64_t root = c.seed.value_or(j.value("seed", std::uint64_t{1}));
  std::vector<bfc::ScenarioConfig> cfgs;
  std::vector<json> points;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json v;
    try {
      v = json::parse(values[i]);
    } catch (const json::parse_error&) {
      v = values[i];
    }
    json point = j;
    bfc::set_dotted(point, param, v);
    point["seed"] = bfc::Rng::derive_seed(root, "sweep/" + std::to_string(i));
    point["name"] = point.value("name", std::string("sweep")) + "_" + std::to_string(i);
    cfgs.push_back(bfc::parse_scenario(point, base));
    points.push_back(v);
  }
  const std::vector<bfc::RunResult> res = bfc::run_batch(cfgs);
  json out = {{"version", bfc::kSummaryVersion}, {"parameter", param}, {"seed", root}, {"runs", json::array()}};
  for (std::size_t i = 0; i < res.size(); ++i) {
    out["runs"].push_back({{"value", points[i]}, {"summary", res[i].summary}});
    if (!c.out_dir.empty()) write_outputs(c.out_dir, cfgs[i].name, res[i]);
  }
  std::cout << out.dump(2) << "\n";
  return EXIT_SUCCESS;
}

int cmd_deadlock(const std::string& topo_path, const Common& c) {
  const bfc::TopologySpec spec = bfc::load_topology_file(topo_path);
  const bfc::Topology& t = spec.topology;
  bfc::Router router(t, 1);
  for (const auto& p : spec.explicit_routes) router.add_explicit(p);
  const bfc::BackpressureGraph g = bfc::build_backpressure_graph(t, bfc::all_server_routes(router));
  const auto adj = g.adjacency();
  std::size_t cyclic = 0;
  for (const auto& scc : bfc::strongly_connected_components(adj)) {
    if (scc.size() > 1) ++cyclic;
  }
  json elide = json::array();
  for (const bfc::ElideEntry& e : bfc::edges_to_elide(g, t)) {
    elide.push_back({{"switch", t.node(e.node).name}, {"ingress_port", e.ingress}, {"egress_port", e.egress}});
  }
  const json out = {{"version", bfc::kSummaryVersion}, {"vertices", g.size()},        {"edges", g.edges().size()},
                    {"cyclic", bfc::has_cycle(adj)},   {"cyclic_components", cyclic}, {"elide", elide}};
  std::cout << out.dump(2) << "\n";
  if (!c.out_dir.empty()) {
    fs::create_directories(c.out_dir);
    std::ofstream(fs::path(c.out_dir) / "elide.json") << out.dump(2) << "\n";
  }
  return EXIT_SUCCESS;
}

int cmd_list() {
  std::cout << "experiments:\n";
  for (const ex::Criterion& c : ex::criteria()) std::cout << "  " << c.key << "  (" << c.title << ")\n";
  std::cout << "scenarios:\n";
  for (const std::string& n : ex::canned_names()) std::cout << "  " << n << "\n";
  return EXIT_SUCCESS;
}

int cmd_show(const std::string& name, const Common& c) {
  auto j = ex::canned(name, c.seed.value_or(1));
  if (!j) throw bfc::ConfigError("unknown canned scenario '" + name + "'");
  std::cout << j->dump(2) << "\n";
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bfcsim: Backpressure Flow Control simulator"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "Root seed (overrides the config)");
  app.add_option("--trace", common.trace, "Write the per-event switch trace to this file");
  app.add_option("--out-dir", common.out_dir, "Directory for summary JSON and flow CSV files");
  app.add_option("--data-dir", common.data_dir, "Directory holding cdf/*.txt for canned scenarios");

  std::string target;
  std::vector<std::string> sets;
  auto* run = app.add_subcommand("run", "Run a config file, canned scenario or canned experiment");
  run->add_option("target", target, "Config path, scenario name or experiment name")->required();
  run->add_option("--set", sets, "Override a config value: dotted.path=json");

  std::string param;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "Run one config over several values of a parameter");
  sweep->add_option("config", target, "Config path or scenario name")->required();
  sweep->add_option("--param", param, "Dotted config path, e.g. workload.background.load")->required();
  sweep->add_option("--values", values, "Values (JSON literals)")->required()->delimiter(',');

  std::string topo;
  auto* dl = app.add_subcommand("deadlock-analyze", "Emit the elide table that makes a topology deadlock-free");
  dl->add_option("topology", topo, "Topology JSON file")->required()->check(CLI::ExistingFile);

  auto* list = app.add_subcommand("list", "List canned experiments and scenarios");
  std::string show_name;
  auto* show = app.add_subcommand("show", "Print a canned scenario config");
  show->add_option("name", show_name)->required();

  for (auto* sub : {run, sweep, dl, list, show}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(target, sets, common);
    if (*sweep) return cmd_sweep(target, param, values, common);
    if (*dl) return cmd_deadlock(topo, common);
    if (*list) return cmd_list();
    if (*show) return cmd_show(show_name, common);
  } catch (const bfc::SimulationError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const bfc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << "\n";
    return kExitConfig;
  }
  return EXIT_SUCCESS;
}
