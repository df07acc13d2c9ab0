#include "bfc/metrics/time_stats.hpp"

namespace bfc {

void merge_into(std::vector<SimTime>& a, const std::vector<SimTime>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

double histogram_mean(const std::vector<SimTime>& w) {
  double total = 0.0;
  double sum = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    total += static_cast<double>(w[v]);
    sum += static_cast<double>(v) * static_cast<double>(w[v]);
  }
  return total > 0.0 ? sum / total : 0.0;
}

double histogram_fraction_below(const std::vector<SimTime>& w, std::uint32_t bound) {
  double total = 0.0;
  double below = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    total += static_cast<double>(w[v]);
    if (v < bound) below += static_cast<double>(w[v]);
  }
  return total > 0.0 ? below / total : 0.0;
}

std::uint32_t histogram_percentile(const std::vector<SimTime>& w, double p) {
  double total = 0.0;
  for (SimTime x : w) total += static_cast<double>(x);
  double acc = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) {
    acc += static_cast<double>(w[v]);
    if (acc >= total * p / 100.0) return static_cast<std::uint32_t>(v);
  }
  return w.empty() ? 0 : static_cast<std::uint32_t>(w.size() - 1);
}

}  // namespace bfc
