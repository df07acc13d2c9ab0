#include "bfc/scenario/experiments.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "bfc/analysis/deadlock.hpp"
#include "bfc/analysis/pause_model.hpp"
#include "bfc/analysis/queueing.hpp"
#include "bfc/metrics/percentiles.hpp"
#include "bfc/scenario/batch.hpp"
#include "bfc/scenario/runner.hpp"
#include "bfc/switch/switch.hpp"
#include "bfc/workload/cdf.hpp"

namespace bfc::experiments {
namespace {

using nlohmann::json;

constexpr double kGbps = 100.0;
constexpr SimTime kDelay = 1000;  // 2 us hop RTT

json node(const std::string& name, const char* kind) { return {{"name", name}, {"kind", kind}}; }

json link(const std::string& a, const std::string& b, double gbps = kGbps, SimTime delay = kDelay) {
  return {{"a", a}, {"b", b}, {"gbps", gbps}, {"delay_ns", delay}};
}

json flow(const std::string& src, const std::string& dst, std::uint64_t size, SimTime start = 0,
          std::uint32_t group = 0) {
  return {{"src", src}, {"dst", dst}, {"size_bytes", size}, {"start_ns", start}, {"group", group}};
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ScenarioConfig config_of(const json& j, const Context& ctx) { return parse_scenario(j, ctx.data_dir); }

std::uint64_t child_seed(const Context& ctx, const std::string& name) { return Rng::derive_seed(ctx.seed, name); }

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_slowdown(const std::vector<FlowRecord>& recs) {
  std::vector<double> v;
  for (const FlowRecord& r : recs) v.push_back(r.slowdown());
  return nearest_rank(v, 50).value_or(0.0);
}

std::vector<FlowRecord> in_group(const std::vector<FlowRecord>& recs, std::uint32_t group) {
  std::vector<FlowRecord> out;
  std::copy_if(recs.begin(), recs.end(), std::back_inserter(out),
               [&](const FlowRecord& r) { return r.group == group; });
  return out;
}

// Sum of per-queue time-averaged lengths at one egress since the warmup.
double mean_queued_bytes(const Network& net, const std::string& from, const std::string& to, SimTime end) {
  const Topology& t = net.topology();
  const NodeId a = t.require(from);
  const PortId p = *t.port_towards(a, t.require(to));
  const EgressPort& port = net.switch_at(a)->port(p);
  const double window = static_cast<double>(end - net.measure_from());
  double total = 0.0;
  for (std::uint32_t q = 0; q < port.queue_count(); ++q) total += port.queue_byte_time(q, end) / window;
  return total;
}

// Periodic sampler of the resident-flow count at one egress.
class FlowCountSampler final : public EventTarget {
 public:
  FlowCountSampler(Network& net, NodeId sw, PortId port, SimTime period)
      : net_(net), sw_(sw), port_(port), period_(period) {}
  void start(SimTime first) { net_.sim().schedule_timer(first, this, 0); }
  void handle(Event&) override {
    samples_.push_back(static_cast<std::uint32_t>(net_.switch_at(sw_)->resident_flows(port_)));
    net_.sim().schedule_timer(net_.now() + period_, this, 0);
  }
  const std::vector<std::uint32_t>& samples() const { return samples_; }

 private:
  Network& net_;
  NodeId sw_;
  PortId port_;
  SimTime period_;
  std::vector<std::uint32_t> samples_;
};

// Chi-square goodness of fit against the geometric law; bins are merged so
// that every expected count is at least 5.
std::pair<double, double> geometric_fit(const std::vector<std::uint32_t>& samples, double rho) {
  const double n = static_cast<double>(samples.size());
  std::map<std::uint32_t, double> observed;
  for (std::uint32_t s : samples) observed[s] += 1.0;
  std::vector<double> obs, expv;
  double o = 0.0, e = 0.0, tail_p = 1.0;
  std::uint32_t k = 0;
  while (true) {
    const double p = geometric_pmf(rho, k);
    const double remaining_tail = (tail_p - p) * n;
    o += observed.count(k) ? observed[k] : 0.0;
    e += p * n;
    tail_p -= p;
    ++k;
    if (e >= 5.0 && remaining_tail >= 5.0) {
      obs.push_back(o);
      expv.push_back(e);
      o = e = 0.0;
    } else if (remaining_tail < 5.0) {
      for (const auto& [v, c] : observed) {
        if (v >= k) o += c;
      }
      obs.push_back(o);
      expv.push_back(e + tail_p * n);
      break;
    }
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) stat += (obs[i] - expv[i]) * (obs[i] - expv[i]) / expv[i];
  const double df = static_cast<double>(obs.size()) - 1.0;
  if (df < 1.0) return {stat, 1.0};
  return {stat, boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat))};
}

// ---------------------------------------------------------------------------

Outcome threshold_sweep(const Context& ctx) {
  Outcome out;
  const std::vector<SimTime> ths = {500, 1000, 2000, 4000, 8000};
  const double drain = kGbps * 1e9 / 8.0 / 2.0;  // per-flow fair share, bytes/s
  json rows = json::array();
  double util_2 = 0.0, queue_2 = 0.0;
  for (SimTime th : ths) {
    double queued = 0.0;
    RunOptions opts;
    opts.inspect = [&](Network& net) { queued = mean_queued_bytes(net, "sw", "rx", net.now()) / 2.0; };
    const RunResult r = run_scenario(config_of(threshold_scenario(th), ctx), opts);
    const double util = r.summary["ports"][0]["utilization"].get<double>();
    const double target = static_cast<double>(th) * 1e-9 * drain;
    rows.push_back({{"th_ns", th}, {"utilization", util}, {"mean_flow_queue_bytes", queued}, {"th_bytes", target}});
    if (th == 2000) {
      util_2 = util;
      queue_2 = queued / target;
    }
  }
  out.data = {{"sweep", rows}};
  out.pass = util_2 >= 0.95 && queue_2 >= 0.5 && queue_2 <= 2.0;
  out.detail = "Th=2us: utilization " + fmt("%.3f", util_2) + " (need >= 0.95), mean queue " + fmt("%.2f", queue_2) +
               " x Th (need 0.5..2)";
  return out;
}

Outcome ef_validation(const Context& ctx) {
  Outcome out;
  json rows = json::array();
  bool ok = true;
  std::string detail;
  for (double x : {1.1, 1.5, 2.0, 4.0}) {
    const RunResult r = run_scenario(config_of(ef_scenario(x), ctx));
    const double sim = 1.0 - r.summary["ports"][0]["utilization"].get<double>();
    const double mu = kGbps * 1e9 / 8.0;
    const double hrtt = 2.0 * static_cast<double>(kDelay) * 1e-9;
    const double model = ef_fraction({x, hrtt * mu, hrtt, mu});
    const double rel = std::abs(sim - model) / model;
    ok = ok && rel <= 0.10;
    rows.push_back({{"x", x}, {"simulated", sim}, {"model", model}, {"relative_error", rel}});
    detail += (detail.empty() ? "" : ", ") + fmt("x=%.1f", x) + " " + fmt("%.4f", sim) + "/" + fmt("%.4f", model);
  }
  out.data = {{"points", rows}};
  out.pass = ok;
  out.detail = "sim/model " + detail + " (need within 10%)";
  return out;
}

Outcome active_flow_distribution(const Context& ctx) {
  Outcome out;
  json rows = json::array();
  bool ok = true;
  std::string detail;
  for (double rho : {0.5, 0.75, 0.9}) {
    const ScenarioConfig cfg =
        config_of(active_flows_scenario(rho, child_seed(ctx, "active_flows/" + fmt("%.2f", rho))), ctx);
    const Topology& t = cfg.topology.topology;
    const NodeId sw = t.require("sw");
    const PortId port = *t.port_towards(sw, t.require("rx"));
    std::unique_ptr<FlowCountSampler> sampler;
    RunOptions opts;
    opts.prepare = [&](Network& net) {
      sampler = std::make_unique<FlowCountSampler>(net, sw, port, kMillisecond);
      sampler->start(cfg.run.warmup);
    };
    std::vector<std::uint32_t> samples;
    opts.inspect = [&](Network&) { samples = sampler->samples(); };
    const RunResult r = run_scenario(cfg, opts);
    const double mean = r.summary["ports"][0]["mean_active_flows"].get<double>();
    const double expect = geometric_mean(rho);
    const double rel = std::abs(mean - expect) / expect;
    const auto [stat, p] = geometric_fit(samples, rho);
    ok = ok && rel <= 0.15 && p > 0.001;
    rows.push_back({{"rho", rho},
                    {"mean_active_flows", mean},
                    {"expected", expect},
                    {"relative_error", rel},
                    {"chi_square", stat},
                    {"p_value", p},
                    {"samples", samples.size()}});
    detail += (detail.empty() ? "" : ", ") + fmt("rho=%.2f", rho) + " mean " + fmt("%.2f", mean) + "/" +
              fmt("%.0f", expect) + " p=" + fmt("%.3f", p);
  }
  out.data = {{"points", rows}};
  out.pass = ok;
  out.detail = detail + " (need mean within 15%, p > 0.001)";
  return out;
}

Outcome birthday(const Context& ctx) {
  Outcome out;
  constexpr int kSeeds = 2000;
  std::vector<ScenarioConfig> cfgs;
  for (Dataplane kind : {Dataplane::sfq_strawman, Dataplane::bfc}) {
    for (int i = 0; i < kSeeds; ++i) {
      cfgs.push_back(config_of(birthday_scenario(kind, child_seed(ctx, "birthday/" + std::to_string(i))), ctx));
    }
  }
  const std::vector<RunResult> res = run_batch(cfgs);
  int straw = 0, dyn_entry = 0, dyn_flow = 0;
  for (int i = 0; i < kSeeds; ++i) {
    if (res[i].summary["switches"]["shared_enqueues"].get<std::uint64_t>() > 0) ++straw;
    const json& d = res[kSeeds + i].summary["switches"];
    if (d["entry_shared_enqueues"].get<std::uint64_t>() > 0) ++dyn_entry;
    if (d["shared_enqueues"].get<std::uint64_t>() > 0) ++dyn_flow;
  }
  const double freq = static_cast<double>(straw) / kSeeds;
  out.data = {{"seeds", kSeeds},
              {"strawman_collision_fraction", freq},
              {"birthday_probability", birthday_collision_prob(5, 32)},
              {"dynamic_assignment_collisions", dyn_entry},
              {"dynamic_flow_table_index_collisions", dyn_flow}};
  out.pass = std::abs(freq - 0.28) <= 0.03 && dyn_entry == 0;
  out.detail = "strawman " + fmt("%.4f", freq) + " (need 0.28 +- 0.03), dynamic assignment collisions " +
               std::to_string(dyn_entry) + " (need 0); flow-table index collisions " + std::to_string(dyn_flow) + "/" +
               std::to_string(kSeeds);
  return out;
}

Outcome congestion_spreading(const Context& ctx) {
  Outcome out;
  constexpr int kSeeds = 8;
  const std::vector<std::uint32_t> g2s = {4, 8, 12, 16, 20};
  const std::vector<Dataplane> kinds = {Dataplane::single_queue_pfc, Dataplane::bfc_stochastic, Dataplane::bfc};
  std::vector<ScenarioConfig> cfgs;
  for (std::uint32_t g2 : g2s) {
    for (Dataplane k : kinds) {
      for (int s = 0; s < kSeeds; ++s) {
        const std::uint64_t seed = child_seed(ctx, "spreading/" + std::to_string(g2) + "/" + std::to_string(s));
        cfgs.push_back(config_of(spreading_scenario(k, g2, seed), ctx));
      }
    }
  }
  const std::vector<RunResult> res = run_batch(cfgs);
  DataplaneConfig probe;
  probe.queues_per_port = 16;
  const std::uint32_t queues = data_queue_count(probe);
  json rows = json::array();
  bool ok = true;
  std::string detail;
  std::size_t idx = 0;
  for (std::uint32_t g2 : g2s) {
    std::map<Dataplane, std::pair<double, double>> stats;
    for (Dataplane k : kinds) {
      std::vector<double> fcts;
      for (int s = 0; s < kSeeds; ++s, ++idx) {
        sim_check(res[idx].records.size() == res[idx].flows_total, "congestion spreading run did not complete");
        for (const FlowRecord& r : in_group(res[idx].records, 1)) fcts.push_back(static_cast<double>(r.fct()));
      }
      stats[k] = {mean_of(fcts), stddev_of(fcts)};
    }
    const auto [single, single_sd] = stats[Dataplane::single_queue_pfc];
    const auto [stoch, stoch_sd] = stats[Dataplane::bfc_stochastic];
    const auto [dyn, dyn_sd] = stats[Dataplane::bfc];
    const bool ordered = single > stoch && stoch > dyn;
    const bool sd_applies = 2 + g2 <= queues;
    const bool sd_ok = !sd_applies || dyn_sd < 0.01 * dyn;
    ok = ok && ordered && sd_ok;
    rows.push_back({{"group2", g2},
                    {"single_mean_ns", single},
                    {"single_sd_ns", single_sd},
                    {"stochastic_mean_ns", stoch},
                    {"stochastic_sd_ns", stoch_sd},
                    {"dynamic_mean_ns", dyn},
                    {"dynamic_sd_ns", dyn_sd},
                    {"ordered", ordered},
                    {"sd_checked", sd_applies}});
    detail += (detail.empty() ? "" : "; ") + std::string("G2=") + std::to_string(g2) + " " + fmt("%.0f", single / 1e3) +
              ">" + fmt("%.0f", stoch / 1e3) + ">" + fmt("%.0f", dyn / 1e3) + "us" +
              (sd_applies ? " sd " + fmt("%.2f%%", 100.0 * dyn_sd / dyn) : "");
  }
  out.data = {{"data_queues", queues}, {"seeds", kSeeds}, {"rows", rows}};
  out.pass = ok;
  out.detail = "group-1 FCT single>stochastic>dynamic: " + detail;
  return out;
}

Outcome deadlock(const Context& ctx) {
  Outcome out;
  // (a) Clos with up-down routing.
  const Topology clos = build_clos(4, 4, 2, static_cast<BitRate>(kGbps * 1e9), kDelay);
  const Router router(clos, 1);
  const BackpressureGraph g = build_backpressure_graph(clos, all_server_routes(router));
  const bool clos_acyclic = !has_cycle(g.adjacency());
  const std::size_t clos_elide = edges_to_elide(g, clos).size();

  // (b) ring.
  const ScenarioConfig ring = config_of(ring_scenario({}), ctx);
  const Topology& rt = ring.topology.topology;
  Router rr(rt, 1);
  for (const auto& p : ring.topology.explicit_routes) rr.add_explicit(p);
  const BackpressureGraph rg = build_backpressure_graph(rt, all_server_routes(rr));
  const auto sccs = strongly_connected_components(rg.adjacency());
  const bool ring_cycle = has_cycle(rg.adjacency());
  const std::vector<NamedElide> table = ring_elide_table();

  bool witnessed = false;
  std::uint64_t stuck_packets = 0;
  RunOptions opts;
  opts.inspect = [&](Network& net) {
    const bool quiet = net.now() - net.last_switch_dequeue() >= kMillisecond;
    for (Switch* sw : net.switches()) {
      for (PortId p = 0; p < sw->port_count(); ++p) {
        const EgressPort& port = sw->port(p);
        for (std::uint32_t q = 0; q < port.queue_count(); ++q) {
          if (port.paused(q) && !port.empty(q) && quiet) {
            witnessed = true;
            stuck_packets += port.queue_packets(q);
          }
        }
      }
    }
  };
  const RunResult stuck = run_scenario(ring, opts);
  const RunResult drained = run_scenario(config_of(ring_scenario(table), ctx));
  const bool drains = drained.records.size() == drained.flows_total && drained.conservation.resident == 0 &&
                      drained.conservation.in_transit == 0;

  json elide = json::array();
  for (const NamedElide& e : table)
    elide.push_back({{"switch", e.node}, {"ingress_port", e.ingress}, {"egress_port", e.egress}});
  out.data = {{"clos_acyclic", clos_acyclic},
              {"clos_elide_entries", clos_elide},
              {"ring_cycle", ring_cycle},
              {"ring_scc_count", sccs.size()},
              {"ring_elide", elide},
              {"deadlock_witnessed", witnessed},
              {"stuck_packets", stuck_packets},
              {"flows_completed_without_elide", stuck.records.size()},
              {"flows_completed_with_elide", drained.records.size()},
              {"flows_total", drained.flows_total}};
  out.pass = clos_acyclic && clos_elide == 0 && ring_cycle && witnessed && drains;
  out.detail = std::string("Clos acyclic ") + (clos_acyclic ? "yes" : "no") + " elide " + std::to_string(clos_elide) +
               "; ring cycle " + (ring_cycle ? "yes" : "no") + ", deadlock " + (witnessed ? "witnessed" : "not seen") +
               " (" + std::to_string(stuck_packets) + " packets stuck), with " + std::to_string(table.size()) +
               " elide entries " + std::to_string(drained.records.size()) + "/" + std::to_string(drained.flows_total) +
               " flows drained";
  return out;
}

Outcome incast_spreading(const Context& ctx) {
  Outcome out;
  constexpr std::uint32_t kUp = 4, kQ = 8;
  json rows = json::array();
  std::map<std::uint32_t, std::uint64_t> entry_shared;
  for (std::uint32_t f : {kUp * kQ, 2 * kUp * kQ}) {
    std::uint64_t entry = 0, flow = 0;
    RunOptions opts;
    opts.inspect = [&](Network& net) {
      for (Switch* sw : net.switches()) {
        if (net.topology().node(sw->id()).name == "agg") continue;
        entry += sw->stats().entry_shared_enqueues;
        flow += sw->stats().shared_enqueues;
      }
    };
    (void)ctx;
    const RunResult r = run_scenario(config_of(incast_spread_scenario(f, kUp, kQ), ctx), opts);
    sim_check(r.records.size() == r.flows_total, "incast run did not complete");
    entry_shared[f] = entry;
    rows.push_back({{"flows", f}, {"upstream_assignment_sharing", entry}, {"upstream_flow_sharing", flow}});
  }
  out.data = {{"upstreams", kUp}, {"queues", kQ}, {"rows", rows}};
  const std::uint64_t below = entry_shared[kUp * kQ];
  const std::uint64_t above = entry_shared[2 * kUp * kQ];
  out.pass = below == 0 && above > 0;
  out.detail = "U=4 Q=8: F=32 shared enqueues " + std::to_string(below) + " (need 0), F=64 " + std::to_string(above) +
               " (need > 0)";
  return out;
}

struct ClosNumbers {
  double short_p99 = 0.0;
  double long_avg = 0.0;
};

ClosNumbers clos_numbers(const RunResult& r) {
  sim_check(r.records.size() == r.flows_total, "Clos run did not complete");
  ClosNumbers n;
  n.short_p99 = slowdown_summary(r.records, 0, 3000).value().p99;
  n.long_avg = slowdown_summary(r.records, 1'000'000, ~std::uint64_t{0}).value().avg;
  return n;
}

Outcome e2e_ordering(const Context& ctx) {
  Outcome out;
  const std::vector<Dataplane> kinds = {Dataplane::bfc, Dataplane::sfq_strawman, Dataplane::single_queue_pfc,
                                        Dataplane::ideal_fq};
  std::vector<ScenarioConfig> cfgs;
  for (bool incast : {false, true}) {
    for (Dataplane k : kinds) cfgs.push_back(config_of(clos_scenario(k, incast, child_seed(ctx, "clos")), ctx));
  }
  const std::vector<RunResult> res = run_batch(cfgs);
  json rows = json::array();
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    std::map<Dataplane, ClosNumbers> n;
    for (std::size_t k = 0; k < kinds.size(); ++k) n[kinds[k]] = clos_numbers(res[i * kinds.size() + k]);
    const ClosNumbers& b = n[Dataplane::bfc];
    const bool short_ok =
        b.short_p99 < n[Dataplane::sfq_strawman].short_p99 && b.short_p99 < n[Dataplane::single_queue_pfc].short_p99;
    const double long_ratio = b.long_avg / n[Dataplane::ideal_fq].long_avg;
    ok = ok && short_ok && long_ratio <= 1.3;
    json row = {{"incast", i == 1}, {"long_ratio_to_ideal", long_ratio}};
    for (Dataplane k : kinds) row[to_string(k)] = {{"short_p99", n[k].short_p99}, {"long_avg", n[k].long_avg}};
    rows.push_back(row);
    detail += std::string(i == 0 ? "" : "; ") + (i == 1 ? "incast" : "no incast") + ": short p99 bfc " +
              fmt("%.2f", b.short_p99) + " sfq " + fmt("%.2f", n[Dataplane::sfq_strawman].short_p99) + " single " +
              fmt("%.2f", n[Dataplane::single_queue_pfc].short_p99) + ", long bfc/ideal " + fmt("%.3f", long_ratio);
  }
  out.data = {{"rows", rows}};
  out.pass = ok;
  out.detail = detail;
  return out;
}

Outcome alg1_supplement(const Context& ctx) {
  Outcome out;
  struct Variant {
    const char* name;
    Dataplane kind;
    bool e2e;
  };
  const std::vector<Variant> vs = {
      {"bfc", Dataplane::bfc, false}, {"bfc_e2e", Dataplane::bfc, true}, {"ideal_fq", Dataplane::ideal_fq, false}};
  std::vector<ScenarioConfig> cfgs;
  for (const Variant& v : vs)
    cfgs.push_back(config_of(elephants_scenario(v.kind, v.e2e, child_seed(ctx, "elephants")), ctx));
  const std::vector<RunResult> res = run_batch(cfgs);
  std::map<std::string, double> med;
  json rows = json::array();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<FlowRecord> mice = in_group(res[i].records, 2);
    const std::vector<FlowRecord> indirect = in_group(res[i].records, 3);
    const double direct_med = median_slowdown(mice);
    mice.insert(mice.end(), indirect.begin(), indirect.end());
    med[vs[i].name] = median_slowdown(mice);
    rows.push_back({{"variant", vs[i].name},
                    {"mice_median_slowdown", med[vs[i].name]},
                    {"direct_median", direct_med},
                    {"indirect_median", median_slowdown(indirect)},
                    {"mice_completed", mice.size()}});
  }
  const double ideal = med["ideal_fq"];
  out.pass = med["bfc_e2e"] < med["bfc"] && std::abs(med["bfc_e2e"] - ideal) < std::abs(med["bfc"] - ideal);
  out.data = {{"rows", rows}};
  out.detail = "mice median slowdown bfc " + fmt("%.2f", med["bfc"]) + ", bfc+e2e " + fmt("%.2f", med["bfc_e2e"]) +
               ", ideal " + fmt("%.2f", ideal);
  return out;
}

Outcome determinism(const Context& ctx) {
  Outcome out;
  const std::vector<std::pair<std::string, json>> reps = {
      {"threshold", threshold_scenario(2000)},
      {"ef", ef_scenario(2.0)},
      {"active_flows", active_flows_scenario(0.75, child_seed(ctx, "active_flows/0.75"))},
      {"birthday", birthday_scenario(Dataplane::sfq_strawman, child_seed(ctx, "birthday/0"))},
      {"spreading", spreading_scenario(Dataplane::bfc_stochastic, 12, child_seed(ctx, "spreading/12/0"))},
      {"ring", ring_scenario({})},
      {"incast_spread", incast_spread_scenario(64, 4, 8)},
      {"clos", clos_scenario(Dataplane::bfc, true, child_seed(ctx, "clos"))},
      {"elephants", elephants_scenario(Dataplane::bfc, true, child_seed(ctx, "elephants"))},
  };
  bool ok = true;
  json rows = json::array();
  std::vector<std::string> bad;
  for (const auto& [name, j] : reps) {
    const ScenarioConfig cfg = config_of(j, ctx);
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    const bool same = a.summary.dump() == b.summary.dump();
    const Conservation& c = a.conservation;
    const bool balanced = c.injected == c.delivered + c.dropped + c.resident + c.in_transit;
    ok = ok && same && balanced;
    if (!same || !balanced) bad.push_back(name);
    rows.push_back({{"scenario", name},
                    {"identical", same},
                    {"injected", c.injected},
                    {"delivered", c.delivered},
                    {"dropped", c.dropped},
                    {"resident", c.resident},
                    {"in_transit", c.in_transit}});
  }
  out.data = {{"rows", rows}};
  out.pass = ok;
  std::string list;
  for (const auto& b : bad) list += " " + b;
  out.detail = std::to_string(reps.size()) + " scenarios rerun: " +
               (ok ? std::string("summaries identical, conservation exact") : "mismatch in" + list);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

json threshold_scenario(SimTime th_time) {
  return {{"name", "threshold_" + std::to_string(th_time)},
          {"seed", 1},
          {"topology",
           {{"nodes", {node("h0", "server"), node("h1", "server"), node("rx", "server"), node("sw", "switch")}},
            {"links", {link("h0", "sw"), link("h1", "sw"), link("sw", "rx")}}}},
          {"dataplane", {{"kind", "bfc"}, {"th_time_ns", th_time}}},
          {"workload", {{"flows", {flow("h0", "rx", 1'000'000'000), flow("h1", "rx", 1'000'000'000)}}}},
          {"run", {{"max_time_ns", 1'100'000}, {"warmup_ns", 100'000}, {"drain", false}}},
          {"metrics", {{"watch_ports", {{{"from", "sw"}, {"to", "rx"}}}}}}};
}

json ef_scenario(double x) {
  return {{"name", "ef_" + fmt("%.1f", x)},
          {"seed", 1},
          {"topology",
           {{"nodes", {node("h0", "server"), node("rx", "server"), node("sw", "switch")}},
            {"links", {link("h0", "sw", x * kGbps), link("sw", "rx")}}}},
          {"dataplane", {{"kind", "bfc"}}},
          {"workload", {{"flows", {flow("h0", "rx", 1'000'000'000)}}}},
          {"run", {{"max_time_ns", 3'100'000}, {"warmup_ns", 100'000}, {"drain", false}}},
          {"metrics", {{"watch_ports", {{{"from", "sw"}, {"to", "rx"}}}}}}};
}

json active_flows_scenario(double rho, std::uint64_t seed) {
  constexpr int kSenders = 16;
  constexpr double kSenderGbps = 400.0;
  const SimTime duration = rho >= 0.85 ? 200 * kMillisecond : (rho >= 0.7 ? 100 * kMillisecond : 50 * kMillisecond);
  const SimTime warmup = 5 * kMillisecond;
  // Uniform sizes in [10 KB, 190 KB]; the mean is 100 KB.
  const FlowSizeCdf cdf({{10'000, 0.0}, {190'000, 1.0}}, CdfInterpolation::linear);
  const double rate = rho * kGbps * 1e9 / 8.0 / cdf.mean();
  json nodes = {node("rx", "server"), node("sw", "switch")};
  json links = {link("sw", "rx")};
  for (int i = 0; i < kSenders; ++i) {
    nodes.push_back(node("h" + std::to_string(i), "server"));
    links.push_back(link("h" + std::to_string(i), "sw", kSenderGbps));
  }
  Rng rng(seed);
  const ArrivalProcess arrivals{ArrivalKind::poisson, 0.0};
  json flows = json::array();
  double t = 0.0;
  while (true) {
    t += arrivals.next_gap(1e9 / rate, rng);
    if (t >= static_cast<double>(duration)) break;
    const std::string src = "h" + std::to_string(rng.below(kSenders));
    flows.push_back(flow(src, "rx", cdf.sample(rng), static_cast<SimTime>(t)));
  }
  return {{"name", "active_flows_" + fmt("%.2f", rho)},
          {"seed", seed},
          {"topology", {{"nodes", nodes}, {"links", links}}},
          {"dataplane", {{"kind", "ideal_fq"}}},
          {"workload", {{"flows", flows}}},
          {"run", {{"max_time_ns", duration}, {"warmup_ns", warmup}, {"drain", false}}},
          {"metrics", {{"watch_ports", {{{"from", "sw"}, {"to", "rx"}}}}}}};
}

json birthday_scenario(Dataplane kind, std::uint64_t seed) {
  json nodes = {node("rx", "server"), node("sw", "switch")};
  json links = {link("sw", "rx")};
  json flows = json::array();
  for (int i = 0; i < 5; ++i) {
    const std::string h = "h" + std::to_string(i);
    nodes.push_back(node(h, "server"));
    links.push_back(link(h, "sw"));
    flows.push_back(flow(h, "rx", 50'000));
  }
  return {{"name", std::string("birthday_") + to_string(kind)},
          {"seed", seed},
          {"topology", {{"nodes", nodes}, {"links", links}}},
          {"dataplane", {{"kind", to_string(kind)}, {"queues_per_port", 32}, {"reserve_control_queue", false}}},
          {"workload", {{"flows", flows}}},
          {"run", {{"max_time_ns", 10 * kMillisecond}}}};
}

json spreading_scenario(Dataplane kind, std::uint32_t group2, std::uint64_t seed) {
  constexpr std::uint64_t kSize = 1'500'000;
  json nodes = {node("r1", "server"), node("r2", "server"), node("s1", "switch"), node("s2", "switch"),
                node("s3", "switch")};
  json links = {link("s1", "s2"), link("s3", "s2"), link("s2", "r1"), link("s2", "r2")};
  json flows = json::array();
  // Each sender group is a set of hosts with one flow each.
  auto group = [&](std::uint32_t g, std::uint32_t count, const char* edge, const char* dst) {
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::string h = "g" + std::to_string(g) + "_" + std::to_string(i);
      nodes.push_back(node(h, "server"));
      links.push_back(link(h, edge));
      flows.push_back(flow(h, dst, kSize, 0, g));
    }
  };
  group(1, 2, "s1", "r1");
  group(2, group2, "s1", "r2");
  group(3, 8, "s3", "r2");
  return {{"name", std::string("spreading_") + to_string(kind) + "_" + std::to_string(group2)},
          {"seed", seed},
          {"topology", {{"nodes", nodes}, {"links", links}}},
          {"dataplane", {{"kind", to_string(kind)}, {"queues_per_port", 16}}},
          {"workload", {{"flows", flows}}},
          {"run", {{"max_time_ns", 50 * kMillisecond}}}};
}

json ring_scenario(const std::vector<NamedElide>& elide) {
  json el = json::array();
  for (const NamedElide& e : elide)
    el.push_back({{"switch", e.node}, {"ingress_port", e.ingress}, {"egress_port", e.egress}});
  json flows = json::array();
  for (const auto& [src, dst] : {std::pair{"ha", "hc"}, {"hb", "ha"}, {"hc", "hb"}}) {
    json f = flow(src, dst, 2'000'000);
    f["count"] = 2;
    flows.push_back(f);
  }
  return {
      {"name", elide.empty() ? "ring" : "ring_elided"},
      {"seed", 1},
      {"topology",
       {{"nodes",
         {node("ha", "server"), node("hb", "server"), node("hc", "server"), node("a", "switch"), node("b", "switch"),
          node("c", "switch")}},
        {"links", {link("ha", "a"), link("hb", "b"), link("hc", "c"), link("a", "b"), link("b", "c"), link("c", "a")}},
        {"routes", {{"ha", "a", "b", "c", "hc"}, {"hb", "b", "c", "a", "ha"}, {"hc", "c", "a", "b", "hb"}}}}},
      {"dataplane", {{"kind", "single_queue_pfc"}}},
      {"workload", {{"flows", flows}}},
      {"run", {{"max_time_ns", 5 * kMillisecond}}},
      {"elide", el}};
}

std::vector<NamedElide> ring_elide_table() {
  const ScenarioConfig cfg = parse_scenario(ring_scenario({}));
  const Topology& t = cfg.topology.topology;
  Router r(t, 1);
  for (const auto& p : cfg.topology.explicit_routes) r.add_explicit(p);
  std::vector<NamedElide> out;
  for (const ElideEntry& e : edges_to_elide(build_backpressure_graph(t, all_server_routes(r)), t)) {
    out.push_back({t.node(e.node).name, e.ingress, e.egress});
  }
  return out;
}

json incast_spread_scenario(std::uint32_t flows, std::uint32_t upstreams, std::uint32_t queues) {
  json nodes = {node("rx", "server"), node("agg", "switch")};
  json links = {link("agg", "rx")};
  for (std::uint32_t u = 0; u < upstreams; ++u) {
    const std::string up = "u" + std::to_string(u);
    nodes.push_back(node(up, "switch"));
    links.push_back(link(up, "agg"));
  }
  json fl = json::array();
  for (std::uint32_t i = 0; i < flows; ++i) {
    const std::string h = "h" + std::to_string(i);
    nodes.push_back(node(h, "server"));
    links.push_back(link(h, "u" + std::to_string(i % upstreams)));
    fl.push_back(flow(h, "rx", 200'000));
  }
  return {{"name", "incast_spread_" + std::to_string(flows)},
          {"seed", 1},
          {"topology", {{"nodes", nodes}, {"links", links}}},
          {"dataplane", {{"kind", "bfc"}, {"queues_per_port", queues}, {"reserve_control_queue", false}}},
          {"workload", {{"flows", fl}}},
          {"run", {{"max_time_ns", 20 * kMillisecond}}}};
}

json clos_scenario(Dataplane kind, bool incast, std::uint64_t seed) {
  json workload = {
      {"duration_ns", 20 * kMillisecond},
      {"background", {{"cdf", "cdf/hadoop_like.txt"}, {"load", 0.6}, {"arrival", "lognormal"}, {"sigma", 2.0}}}};
  // Every server but the receiver sends: 15 senders, 200 KB each.
  if (incast) workload["incast"] = {{"degree", 15}, {"aggregate_bytes", 3'000'000}, {"fraction", 0.05}};
  return {
      {"name", std::string("clos_") + to_string(kind) + (incast ? "_incast" : "")},
      {"seed", seed},
      {"topology",
       {{"clos", {{"servers_per_tor", 4}, {"tors", 4}, {"spines", 2}, {"link_gbps", kGbps}, {"delay_ns", kDelay}}}}},
      {"dataplane", {{"kind", to_string(kind)}}},
      {"workload", workload},
      {"run", {{"max_time_ns", 200 * kMillisecond}}}};
}

json elephants_scenario(Dataplane kind, bool e2e, std::uint64_t seed) {
  constexpr int kElephants = 64;
  constexpr SimTime kMiceStart = 500'000, kMiceEnd = 3'000'000, kEnd = 5'000'000;
  constexpr std::uint64_t kMouse = 1000;
  // Each mouse class offers 3% of a 100 Gbps link.
  const double gap = static_cast<double>(kMouse) * 8.0 / (0.03 * kGbps);
  json flows = json::array();
  Rng rng(seed);
  // Elephants come from the racks other than the receiver's.
  auto sender = [&] { return "h" + std::to_string(4 + rng.below(12)); };
  for (int i = 0; i < kElephants; ++i) {
    flows.push_back(
        flow("h" + std::to_string(4 + i % 12), "h0", 10'000'000'000ULL, static_cast<SimTime>(rng.below(10'000)), 1));
  }
  // Direct mice go to the elephants' receiver, indirect ones to its rack mate.
  for (const auto& [dst, group] : {std::pair{"h0", 2u}, {"h1", 3u}}) {
    double t = kMiceStart;
    while (true) {
      t += rng.exponential(gap);
      if (t >= kMiceEnd) break;
      flows.push_back(flow(sender(), dst, kMouse, static_cast<SimTime>(t), group));
    }
  }
  json j = {
      {"name", std::string("elephants_") + to_string(kind) + (e2e ? "_e2e" : "")},
      {"seed", seed},
      {"topology",
       {{"clos", {{"servers_per_tor", 4}, {"tors", 4}, {"spines", 2}, {"link_gbps", kGbps}, {"delay_ns", kDelay}}}}},
      {"dataplane", {{"kind", to_string(kind)}}},
      {"workload", {{"flows", flows}}},
      {"run", {{"max_time_ns", kEnd}, {"drain", false}}}};
  if (e2e) j["nic"] = {{"e2e_cc", true}};
  return j;
}

std::vector<std::string> canned_names() {
  return {"threshold_2us",    "ef_x2", "active_flows_075", "birthday_sfq", "spreading_bfc_12", "ring", "ring_elided",
          "incast_spread_32", "clos",  "clos_incast",      "elephants"};
}

std::optional<json> canned(const std::string& name, std::uint64_t seed) {
  if (name == "threshold_2us") return threshold_scenario(2000);
  if (name == "ef_x2") return ef_scenario(2.0);
  if (name == "active_flows_075") return active_flows_scenario(0.75, seed);
  if (name == "birthday_sfq") return birthday_scenario(Dataplane::sfq_strawman, seed);
  if (name == "spreading_bfc_12") return spreading_scenario(Dataplane::bfc, 12, seed);
  if (name == "ring") return ring_scenario({});
  if (name == "ring_elided") return ring_scenario(ring_elide_table());
  if (name == "incast_spread_32") return incast_spread_scenario(32, 4, 8);
  if (name == "clos") return clos_scenario(Dataplane::bfc, false, seed);
  if (name == "clos_incast") return clos_scenario(Dataplane::bfc, true, seed);
  if (name == "elephants") return elephants_scenario(Dataplane::bfc, false, seed);
  return std::nullopt;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "fig5_threshold_sweep", "threshold sweep", 10, threshold_sweep},
      {2, "ef_validation", "pause model validation", 10, ef_validation},
      {3, "active_flows", "active-flow distribution", 60, active_flow_distribution},
      {4, "birthday", "birthday collisions", 30, birthday},
      {5, "fig6_congestion_spreading", "congestion-spreading ordering", 60, congestion_spreading},
      {6, "deadlock", "deadlock detection and elision", 10, deadlock},
      {7, "incast_spreading", "incast queue spreading", 30, incast_spreading},
      {8, "e2e_ordering", "end-to-end FCT ordering", 600, e2e_ordering},
      {9, "alg1_supplement", "end-to-end CC supplement", 300, alg1_supplement},
      {10, "determinism", "determinism and conservation", 0, determinism},
  };
  return all;
}

const Criterion* find_criterion(const std::string& key) {
  for (const Criterion& c : criteria()) {
    if (key == c.key) return &c;
  }
  return nullptr;
}

Outcome run_criterion(const Criterion& c, const Context& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run(ctx);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.criterion = c.id;
  o.name = c.title;
  o.budget_seconds = c.budget_seconds;
  if (c.budget_seconds > 0 && o.seconds > c.budget_seconds) {
    o.pass = false;
    o.detail += " [over runtime budget]";
  }
  return o;
}

}  // namespace bfc::experiments
