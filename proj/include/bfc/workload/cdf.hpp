#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bfc/sim/rng.hpp"

namespace bfc {

enum class CdfInterpolation : std::uint8_t { step, linear };

/// Flow-size distribution given as (size, cumulative probability) points.
/// With step interpolation a draw returns one of the listed sizes; with
/// linear interpolation sizes between two points are spread uniformly.
class FlowSizeCdf {
 public:
  FlowSizeCdf(std::vector<std::pair<std::uint64_t, double>> points, CdfInterpolation interp);

  /// Parses the text format: one `size_bytes cumulative_prob` pair per line,
  /// `#` comments, and an optional `interpolation step|linear` line.
  static FlowSizeCdf parse(std::string_view text);
  static FlowSizeCdf load(const std::string& path);

  /// Inverse transform of u in [0, 1).
  std::uint64_t quantile(double u) const;
  std::uint64_t sample(Rng& rng) const { return quantile(rng.uniform()); }
  double mean() const { return mean_; }
  CdfInterpolation interpolation() const { return interp_; }
  const std::vector<std::pair<std::uint64_t, double>>& points() const { return points_; }

 private:
  std::vector<std::pair<std::uint64_t, double>> points_;
  CdfInterpolation interp_;
  double mean_ = 0.0;
};

}  // namespace bfc
