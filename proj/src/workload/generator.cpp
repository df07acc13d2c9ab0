#include "bfc/workload/generator.hpp"

#include <algorithm>
#include <cmath>

namespace bfc {

double ArrivalProcess::next_gap(double mean, Rng& rng) const {
  if (kind == ArrivalKind::poisson) return rng.exponential(mean);
  const double mu = std::log(mean) - sigma * sigma / 2.0;
  return rng.lognormal(mu, sigma);
}

double core_capacity_bps(const Topology& topo) {
  const auto& shape = topo.clos();
  if (!shape) throw ConfigError("core capacity is only defined for Clos topologies; set capacity_bps");
  return static_cast<double>(shape->tors) * shape->spines * static_cast<double>(shape->link_rate);
}

double cross_fraction(const Topology& topo) {
  const auto n = static_cast<double>(topo.servers().size());
  if (n < 2) return 0.0;
  const auto& shape = topo.clos();
  if (!shape) return 1.0;
  return (n - shape->servers_per_tor) / (n - 1);
}

double arrival_rate(double load, double core_bps, double mean_size_bytes, double cross) {
  if (load <= 0.0 || cross <= 0.0) return 0.0;
  return load * core_bps / (8.0 * mean_size_bytes * cross);
}

std::vector<FlowSpec> generate_background(const Topology& topo, const FlowSizeCdf& cdf, const BackgroundSpec& spec,
                                          SimTime start, SimTime end, Rng& rng) {
  std::vector<FlowSpec> out;
  if (spec.load <= 0.0) return out;
  if (spec.load >= 1.0) throw ConfigError("load must be below 1");
  const std::vector<NodeId> servers = topo.servers();
  if (servers.size() < 2) throw ConfigError("background traffic needs at least two servers");
  const double cap = spec.capacity_bps ? *spec.capacity_bps : core_capacity_bps(topo);
  const double lambda = arrival_rate(spec.load, cap, cdf.mean(), cross_fraction(topo));
  const double mean_gap_ns = 1e9 / lambda;
  double t = static_cast<double>(start);
  while (true) {
    t += spec.arrival.next_gap(mean_gap_ns, rng);
    if (t >= static_cast<double>(end)) break;
    FlowSpec f;
    f.src = servers[rng.below(servers.size())];
    do {
      f.dst = servers[rng.below(servers.size())];
    } while (f.dst == f.src);
    f.size = cdf.sample(rng);
    f.start = static_cast<SimTime>(t);
    out.push_back(f);
  }
  return out;
}

std::vector<FlowSpec> gen_incast(const std::vector<NodeId>& servers, const IncastSpec& spec, SimTime at, Rng& rng) {
  if (spec.degree == 0) throw ConfigError("incast degree must be positive");
  if (servers.size() < 2 || spec.degree > servers.size() - 1) {
    throw ConfigError("incast degree " + std::to_string(spec.degree) + " exceeds the sender population");
  }
  if (spec.aggregate < spec.degree) throw ConfigError("incast aggregate smaller than its degree");
  const NodeId receiver = servers[rng.below(servers.size())];
  std::vector<NodeId> pool;
  for (NodeId s : servers) {
    if (s != receiver) pool.push_back(s);
  }
  // Partial Fisher-Yates: the first `degree` entries become the senders.
  for (std::uint32_t i = 0; i < spec.degree; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  std::vector<FlowSpec> out;
  for (std::uint32_t i = 0; i < spec.degree; ++i) {
    FlowSpec f;
    f.src = pool[i];
    f.dst = receiver;
    f.size = spec.aggregate / spec.degree;
    f.start = at;
    f.incast = true;
    f.labeled = spec.labeled;
    f.group = 1;
    out.push_back(f);
  }
  return out;
}

SimTime incast_period(const IncastSpec& spec, double core_bps) {
  if (spec.period > 0) return spec.period;
  if (spec.fraction <= 0.0) throw ConfigError("incast needs a period or a positive fraction");
  const double bytes_per_ns = spec.fraction * core_bps / 8.0 / 1e9;
  return static_cast<SimTime>(std::llround(static_cast<double>(spec.aggregate) / bytes_per_ns));
}

std::vector<FlowSpec> generate_incasts(const Topology& topo, const IncastSpec& spec, SimTime start, SimTime end,
                                       std::optional<double> capacity_bps, Rng& rng) {
  const double cap = capacity_bps ? *capacity_bps : (spec.period > 0 ? 0.0 : core_capacity_bps(topo));
  const SimTime period = incast_period(spec, cap);
  const std::vector<NodeId> servers = topo.servers();
  std::vector<FlowSpec> out;
  for (SimTime t = start; t < end; t += period) {
    auto event = gen_incast(servers, spec, t, rng);
    out.insert(out.end(), event.begin(), event.end());
  }
  return out;
}

}  // namespace bfc
