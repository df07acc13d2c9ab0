#pragma once

namespace bfc {

/// Single-flow pause model. A flow enqueues x times faster than it drains;
/// when its queue crosses Th the upstream pauses after one HRTT, the queue
/// drains, and the link idles for an HRTT after the resume.
struct EfParams {
  double x = 2.0;     // enqueue / dequeue rate ratio, > 1
  double th = 0.0;    // pause threshold, bytes
  double hrtt = 0.0;  // seconds
  double mu = 0.0;    // flow dequeue rate, bytes per second
};

struct EfPhases {
  double t1 = 0.0;  // queue builds to Th, plus the pause round trip
  double t2 = 0.0;  // paused queue drains
  double t3 = 0.0;  // idle while the resume propagates
};

EfPhases ef_phase_times(const EfParams& p);
/// Fraction of time the bottleneck idles: t3 / (t1 + t2 + t3).
double ef_fraction(const EfParams& p);

struct EfMax {
  double x = 0.0;
  double e = 0.0;
};
/// Rate ratio maximizing the idle fraction and the maximum itself.
EfMax ef_max(double th, double hrtt, double mu);

}  // namespace bfc
