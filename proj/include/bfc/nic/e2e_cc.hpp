#pragma once

#include "bfc/sim/time.hpp"

namespace bfc {

/// Delay-based window update applied on every ack: the window shrinks by
/// (rtt - target) / rtt when the sample exceeds the target and grows by
/// (target - rtt) / rtt otherwise, never dropping below one packet.
double e2e_window_update(double window, SimTime rtt, SimTime target);

}  // namespace bfc
