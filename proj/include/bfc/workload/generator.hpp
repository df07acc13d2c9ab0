#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bfc/network.hpp"
#include "bfc/sim/rng.hpp"
#include "bfc/topology/topology.hpp"
#include "bfc/workload/cdf.hpp"

namespace bfc {

enum class ArrivalKind : std::uint8_t { poisson, lognormal };

/// Inter-arrival process with a given mean; the lognormal variant keeps the
/// mean and draws with the given sigma of the underlying normal.
struct ArrivalProcess {
  ArrivalKind kind = ArrivalKind::poisson;
  double sigma = 2.0;

  double next_gap(double mean, Rng& rng) const;
};

/// Aggregate one-direction core capacity in bits per second: the ToR uplinks
/// of a two-tier Clos.
double core_capacity_bps(const Topology& topo);

/// Fraction of uniformly drawn (src, dst) server pairs that cross the core.
double cross_fraction(const Topology& topo);

/// Flow arrival rate in flows per second that puts `load` on the core.
double arrival_rate(double load, double core_bps, double mean_size_bytes, double cross);

struct BackgroundSpec {
  double load = 0.0;
  ArrivalProcess arrival;
  // Overrides the core capacity (bits per second) for non-Clos topologies.
  std::optional<double> capacity_bps;
};

struct IncastSpec {
  std::uint32_t degree = 0;
  std::uint64_t aggregate = 0;
  SimTime period = 0;  // 0: derive from `fraction`
  double fraction = 0.0;
  bool labeled = false;
};

/// Open-loop flows with uniform distinct (src, dst) server pairs arriving in
/// [start, end).
std::vector<FlowSpec> generate_background(const Topology& topo, const FlowSizeCdf& cdf, const BackgroundSpec& spec,
                                          SimTime start, SimTime end, Rng& rng);

/// One incast event: `degree` distinct senders each sending aggregate/degree
/// bytes to a uniformly chosen receiver at time `at`.
std::vector<FlowSpec> gen_incast(const std::vector<NodeId>& servers, const IncastSpec& spec, SimTime at, Rng& rng);

/// Incast period derived from the share of core capacity incast should carry.
SimTime incast_period(const IncastSpec& spec, double core_bps);

/// Periodic incast events in [start, end); the first fires at start.
std::vector<FlowSpec> generate_incasts(const Topology& topo, const IncastSpec& spec, SimTime start, SimTime end,
                                       std::optional<double> capacity_bps, Rng& rng);

}  // namespace bfc
