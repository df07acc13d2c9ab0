#include "bfc/scenario/runner.hpp"

#include <algorithm>
#include <ostream>

#include "bfc/metrics/percentiles.hpp"
#include "bfc/nic/nic.hpp"
#include "bfc/switch/switch.hpp"

namespace bfc {
namespace {

using nlohmann::json;

json row_json(const SlowdownRow& r) {
  return {{"size_lo", r.size_lo}, {"size_hi", r.size_hi}, {"count", r.count}, {"avg", r.avg},
          {"p50", r.p50},         {"p95", r.p95},         {"p99", r.p99}};
}

}  // namespace

std::vector<FlowSpec> build_flows(const ScenarioConfig& cfg, const Topology& topo) {
  const WorkloadConfig& w = cfg.workload;
  std::vector<FlowSpec> flows;
  Rng explicit_rng = Rng::for_component(cfg.seed, "workload/flows");
  for (const FlowGroupConfig& g : w.flows) {
    for (std::uint32_t i = 0; i < g.count; ++i) {
      FlowSpec f;
      f.src = topo.require(g.src);
      f.dst = topo.require(g.dst);
      f.size = g.size;
      f.start = g.start + (g.jitter > 0 ? explicit_rng.below(g.jitter) : 0);
      f.group = g.group;
      f.labeled = g.labeled;
      flows.push_back(f);
    }
  }
  const SimTime end = w.start + w.duration;
  if (w.background) {
    Rng rng = Rng::for_component(cfg.seed, "workload/background");
    const FlowSizeCdf cdf = FlowSizeCdf::load(w.background->cdf);
    auto bg = generate_background(topo, cdf, w.background->spec, w.start, end, rng);
    flows.insert(flows.end(), bg.begin(), bg.end());
  }
  if (w.incast) {
    Rng rng = Rng::for_component(cfg.seed, "workload/incast");
    std::optional<double> cap;
    if (w.background) cap = w.background->spec.capacity_bps;
    auto ic = generate_incasts(topo, *w.incast, w.start, end, cap, rng);
    flows.insert(flows.end(), ic.begin(), ic.end());
  }
  std::stable_sort(flows.begin(), flows.end(), [](const FlowSpec& a, const FlowSpec& b) { return a.start < b.start; });
  return flows;
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  const Topology& topo = cfg.topology.topology;
  Simulator sim(cfg.seed);
  Router router(topo, Rng::derive_seed(cfg.seed, "ecmp"));
  for (const auto& path : cfg.topology.explicit_routes) router.add_explicit(path);

  NetworkConfig ncfg;
  ncfg.dataplane = cfg.dataplane;
  ncfg.nic = cfg.nic;
  ncfg.nic.bdp_inflight_cap = cfg.bdp_inflight_cap.value_or(cfg.dataplane.kind == Dataplane::ideal_fq);
  ncfg.sample_period = cfg.metrics.sample_period;
  ncfg.audit = cfg.run.audit;
  for (const NamedElide& e : cfg.elide) ncfg.elide.push_back({topo.require(e.node), e.ingress, e.egress});
  for (const NamedFault& f : cfg.faults) {
    ncfg.faults.push_back({topo.require(f.from), topo.require(f.to), f.packet, f.count, f.after});
  }

  Network net(sim, topo, router, ncfg);
  net.set_trace(opts.trace);
  const std::vector<FlowSpec> flows = build_flows(cfg, topo);
  for (const FlowSpec& f : flows) net.add_flow(f);
  if (opts.prepare) opts.prepare(net);

  if (cfg.run.warmup > 0) {
    net.run(cfg.run.warmup, false);
    for (Switch* sw : net.switches()) sw->reset_stats(sim.now());
    net.set_measure_from(cfg.run.warmup);
  }
  const RunStats stats = net.run(cfg.run.max_time, cfg.run.drain);
  const SimTime end = sim.now();

  if (cfg.run.audit) net.audit();
  RunResult res;
  res.conservation = net.conservation();
  sim_check(res.conservation.balanced(), "packet conservation violated");
  res.records = net.flow_records();
  res.flows_total = flows.size();
  res.end_time = end;

  json& s = res.summary;
  s["version"] = kSummaryVersion;
  s["name"] = cfg.name;
  s["seed"] = cfg.seed;
  s["dataplane"] = to_string(cfg.dataplane.kind);
  s["end_time_ns"] = end;
  s["events"] = sim.total_events();
  (void)stats;

  std::uint64_t retx = 0, timeouts = 0;
  for (const FlowRecord& r : res.records) retx += r.retransmitted_bytes;
  for (NodeId n : topo.servers()) timeouts += net.nic_at(n)->stats().timeouts;
  s["flows"] = {{"total", res.flows_total},
                {"completed", res.records.size()},
                {"retransmitted_bytes", retx},
                {"timeouts", timeouts}};

  const std::vector<std::uint64_t> edges =
      cfg.metrics.size_buckets.empty() ? default_size_buckets() : cfg.metrics.size_buckets;
  json table = json::array();
  for (const SlowdownRow& r : slowdown_table(res.records, edges)) table.push_back(row_json(r));
  s["slowdown"] = table;
  if (auto all = slowdown_summary(res.records, 0, ~std::uint64_t{0})) s["slowdown_all"] = row_json(*all);

  SwitchStats tot;
  std::uint64_t peak = 0, sampled_max = 0;
  for (const Switch* sw : net.switches()) {
    const SwitchStats& st = sw->stats();
    tot.enqueues += st.enqueues;
    tot.drops += st.drops;
    tot.pauses_sent += st.pauses_sent;
    tot.resumes_sent += st.resumes_sent;
    tot.bitmaps_sent += st.bitmaps_sent;
    tot.unknown_pause_ids += st.unknown_pause_ids;
    tot.shared_enqueues += st.shared_enqueues;
    tot.entry_shared_enqueues += st.entry_shared_enqueues;
    tot.random_assignments += st.random_assignments;
    peak = std::max(peak, sw->buffer().peak());
    for (std::uint64_t v : net.occupancy_samples()[sw->id()]) sampled_max = std::max(sampled_max, v);
  }
  s["switches"] = {{"enqueues", tot.enqueues},
                   {"drops", tot.drops},
                   {"pauses", tot.pauses_sent},
                   {"resumes", tot.resumes_sent},
                   {"bitmaps", tot.bitmaps_sent},
                   {"unknown_pause_ids", tot.unknown_pause_ids},
                   {"shared_enqueues", tot.shared_enqueues},
                   {"entry_shared_enqueues", tot.entry_shared_enqueues},
                   {"random_assignments", tot.random_assignments},
                   {"peak_buffer_bytes", peak},
                   {"max_sampled_buffer_bytes", sampled_max}};

  json ports = json::array();
  for (const WatchPort& w : cfg.metrics.watch_ports) {
    const NodeId from = topo.require(w.from);
    const NodeId to = topo.require(w.to);
    const auto port = topo.port_towards(from, to);
    if (!port) throw ConfigError("watch port " + w.from + " -> " + w.to + " is not a link");
    json p = {{"from", w.from}, {"to", w.to}, {"utilization", net.utilization(from, *port, end)}};
    if (const Switch* sw = net.switch_at(from)) {
      TimeHistogram h = sw->flow_histogram(*port);
      h.accumulate(end);
      p["mean_active_flows"] = histogram_mean(h.weights());
      p["active_flows_p99"] = histogram_percentile(h.weights(), 99);
    }
    ports.push_back(p);
  }
  s["ports"] = ports;

  const Conservation& c = res.conservation;
  s["conservation"] = {{"injected", c.injected}, {"delivered", c.delivered},   {"dropped", c.dropped},
                       {"resident", c.resident}, {"in_transit", c.in_transit}, {"balanced", c.balanced()}};

  if (opts.inspect) opts.inspect(net);
  return res;
}

void write_flow_csv(std::ostream& out, const std::vector<FlowRecord>& records) {
  out << "# flow records v" << kSummaryVersion << "\n";
  out << "fid,src,dst,size,start_ns,finish_ns,fct_ns,ideal_fct_ns,slowdown,retransmitted_bytes,incast,group\n";
  for (const FlowRecord& r : records) {
    out << r.fid << ',' << r.src << ',' << r.dst << ',' << r.size << ',' << r.start << ',' << r.finish << ',' << r.fct()
        << ',' << r.ideal_fct << ',' << r.slowdown() << ',' << r.retransmitted_bytes << ',' << (r.is_incast ? 1 : 0)
        << ',' << r.group << '\n';
  }
}

}  // namespace bfc
