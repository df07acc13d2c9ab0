#include "bfc/workload/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bfc/topology/topology.hpp"

namespace bfc {

FlowSizeCdf::FlowSizeCdf(std::vector<std::pair<std::uint64_t, double>> points, CdfInterpolation interp)
    : points_(std::move(points)), interp_(interp) {
  if (points_.empty()) throw ConfigError("flow-size CDF has no points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [size, p] = points_[i];
    if (size == 0) throw ConfigError("flow-size CDF contains a zero size");
    if (!(p >= 0.0) || p > 1.0) throw ConfigError("flow-size CDF probability outside [0, 1]");
    if (i > 0 && (size <= points_[i - 1].first || p <= points_[i - 1].second)) {
      throw ConfigError("flow-size CDF points must be strictly increasing");
    }
  }
  if (std::abs(points_.back().second - 1.0) > 1e-9) throw ConfigError("flow-size CDF must end at probability 1.0");
  points_.back().second = 1.0;

  double prev_p = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double mass = points_[i].second - prev_p;
    double size = static_cast<double>(points_[i].first);
    if (interp_ == CdfInterpolation::linear && i > 0) size = (size + static_cast<double>(points_[i - 1].first)) / 2.0;
    mean_ += mass * size;
    prev_p = points_[i].second;
  }
}

std::uint64_t FlowSizeCdf::quantile(double u) const {
  auto it = std::find_if(points_.begin(), points_.end(), [u](const auto& pt) { return u < pt.second; });
  if (it == points_.end()) return points_.back().first;
  if (interp_ == CdfInterpolation::step || it == points_.begin()) return it->first;
  const auto& lo = *(it - 1);
  const double frac = (u - lo.second) / (it->second - lo.second);
  const double size = static_cast<double>(lo.first) + frac * static_cast<double>(it->first - lo.first);
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(size)));
}

FlowSizeCdf FlowSizeCdf::parse(std::string_view text) {
  std::vector<std::pair<std::uint64_t, double>> pts;
  CdfInterpolation interp = CdfInterpolation::step;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    const std::string where = "CDF line " + std::to_string(lineno) + ": ";
    if (first == "interpolation") {
      std::string mode;
      ls >> mode;
      if (mode == "step") {
        interp = CdfInterpolation::step;
      } else if (mode == "linear") {
        interp = CdfInterpolation::linear;
      } else {
        throw ConfigError(where + "unknown interpolation '" + mode + "'");
      }
      continue;
    }
    std::uint64_t size = 0;
    double p = 0.0;
    try {
      std::size_t used = 0;
      size = std::stoull(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw ConfigError(where + "bad size '" + first + "'");
    }
    std::string extra;
    if (!(ls >> p) || (ls >> extra)) throw ConfigError(where + "expected `size_bytes cumulative_prob`");
    pts.emplace_back(size, p);
  }
  return FlowSizeCdf(std::move(pts), interp);
}

FlowSizeCdf FlowSizeCdf::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CDF file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace bfc
