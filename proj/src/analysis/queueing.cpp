#include "bfc/analysis/queueing.hpp"

#include <cmath>

#include "bfc/topology/topology.hpp"

namespace bfc {
namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("load must lie in [0, 1)");
}

}  // namespace

double geometric_pmf(double rho, std::uint32_t k) {
  check_rho(rho);
  return (1.0 - rho) * std::pow(rho, static_cast<double>(k));
}

double geometric_mean(double rho) {
  check_rho(rho);
  return rho / (1.0 - rho);
}

double birthday_collision_prob(std::uint32_t n, std::uint32_t q) {
  if (q == 0) throw ConfigError("queue count must be positive");
  double distinct = 1.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    distinct *= 1.0 - static_cast<double>(i) / q;
    if (distinct <= 0.0) return 1.0;
  }
  return 1.0 - distinct;
}

double index_collision_fraction(std::uint32_t n, std::uint64_t slots) {
  if (slots == 0) throw ConfigError("slot count must be positive");
  if (n <= 1) return 0.0;
  return 1.0 - std::pow(1.0 - 1.0 / static_cast<double>(slots), n - 1);
}

}  // namespace bfc
