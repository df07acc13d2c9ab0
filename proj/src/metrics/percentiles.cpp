#include "bfc/metrics/percentiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bfc {

std::optional<double> nearest_rank(std::vector<double> values, double percentile) {
  if (values.empty()) return std::nullopt;
  const auto n = static_cast<std::uint64_t>(values.size());
  // Per-mille integer arithmetic keeps p99 of 100 samples exact.
  const auto pm = static_cast<std::uint64_t>(std::llround(std::clamp(percentile, 0.0, 100.0) * 10.0));
  const std::uint64_t rank = std::min(pm * n / 1000 + 1, n);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

std::vector<std::uint64_t> default_size_buckets() {
  return {0,
          1'000,
          3'000,
          10'000,
          30'000,
          100'000,
          300'000,
          1'000'000,
          3'000'000,
          10'000'000,
          30'000'000,
          100'000'000,
          std::numeric_limits<std::uint64_t>::max()};
}

std::optional<SlowdownRow> slowdown_summary(std::span<const FlowRecord> records, std::uint64_t lo, std::uint64_t hi) {
  std::vector<double> s;
  for (const FlowRecord& r : records) {
    if (r.size >= lo && r.size < hi && r.ideal_fct > 0) s.push_back(r.slowdown());
  }
  if (s.empty()) return std::nullopt;
  SlowdownRow row;
  row.size_lo = lo;
  row.size_hi = hi;
  row.count = s.size();
  row.avg = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  row.p50 = *nearest_rank(s, 50);
  row.p95 = *nearest_rank(s, 95);
  row.p99 = *nearest_rank(s, 99);
  return row;
}

std::vector<SlowdownRow> slowdown_table(std::span<const FlowRecord> records, std::span<const std::uint64_t> edges) {
  std::vector<SlowdownRow> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (auto row = slowdown_summary(records, edges[i], edges[i + 1])) out.push_back(*row);
  }
  return out;
}

}  // namespace bfc
