#include "bfc/analysis/pause_model.hpp"

#include <cmath>
#include <stdexcept>

#include "bfc/topology/topology.hpp"

namespace bfc {
namespace {

void validate(const EfParams& p) {
  if (!(p.x > 1.0)) throw ConfigError("pause model needs x > 1");
  if (p.th < 0.0 || !(p.hrtt > 0.0) || !(p.mu > 0.0)) throw ConfigError("pause model needs positive Th, HRTT, mu");
}

}  // namespace

EfPhases ef_phase_times(const EfParams& p) {
  validate(p);
  EfPhases t;
  t.t1 = p.th / (p.mu * (p.x - 1.0)) + p.hrtt;
  t.t2 = (p.th + p.hrtt * p.mu * (p.x - 1.0)) / p.mu;
  t.t3 = p.hrtt;
  return t;
}

double ef_fraction(const EfParams& p) {
  validate(p);
  const double k = p.th / (p.hrtt * p.mu);
  return (p.x - 1.0) / (k * p.x + p.x * p.x - 1.0);
}

EfMax ef_max(double th, double hrtt, double mu) {
  if (th < 0.0 || !(hrtt > 0.0) || !(mu > 0.0)) throw ConfigError("pause model needs positive Th, HRTT, mu");
  const double r = std::sqrt(th / (hrtt * mu));
  return {r + 1.0, 1.0 / ((r + 1.0) * (r + 1.0) + 1.0)};
}

}  // namespace bfc
