#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bfc/metrics/fct.hpp"

namespace bfc {

/// Nearest-rank percentile without interpolation: the element at 1-based rank
/// floor(p * n / 100) + 1, clamped to n. `values` need not be sorted.
/// Returns nullopt on empty input.
std::optional<double> nearest_rank(std::vector<double> values, double percentile);

struct SlowdownRow {
  std::uint64_t size_lo = 0;  // inclusive
  std::uint64_t size_hi = 0;  // exclusive
  std::size_t count = 0;
  double avg = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double p99 = 0.0;
};

/// Default logarithmic bucket edges, 1 KB to 100 MB.
std::vector<std::uint64_t> default_size_buckets();

/// One row per nonempty bucket [edges[i], edges[i+1]). Empty buckets are
/// omitted rather than reported as zero.
std::vector<SlowdownRow> slowdown_table(std::span<const FlowRecord> records, std::span<const std::uint64_t> edges);

/// Summary over records with size in [lo, hi).
std::optional<SlowdownRow> slowdown_summary(std::span<const FlowRecord> records, std::uint64_t lo, std::uint64_t hi);

}  // namespace bfc
