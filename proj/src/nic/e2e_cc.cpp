#include "bfc/nic/e2e_cc.hpp"

#include <algorithm>

namespace bfc {

double e2e_window_update(double window, SimTime rtt, SimTime target) {
  if (rtt == 0) return window;
  const double r = static_cast<double>(rtt);
  const double t = static_cast<double>(target);
  if (r > t) {
    window -= (r - t) / r;
  } else {
    window += (t - r) / r;
  }
  return std::max(window, 1.0);
}

}  // namespace bfc
