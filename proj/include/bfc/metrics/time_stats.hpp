#pragma once

#include <cstdint>
#include <vector>

#include "bfc/sim/time.hpp"

namespace bfc {

/// Time-weighted histogram of an integer-valued signal.
class TimeHistogram {
 public:
  void set(SimTime now, std::uint32_t value) {
    accumulate(now);
    value_ = value;
  }
  void accumulate(SimTime now) {
    if (now > last_) {
      if (weights_.size() <= value_) weights_.resize(value_ + 1, 0);
      weights_[value_] += now - last_;
      last_ = now;
    }
  }
  void reset(SimTime now) {
    weights_.clear();
    last_ = now;
  }
  std::uint32_t value() const { return value_; }
  const std::vector<SimTime>& weights() const { return weights_; }

 private:
  std::vector<SimTime> weights_;
  std::uint32_t value_ = 0;
  SimTime last_ = 0;
};

/// Merges `b` into `a` bin by bin.
void merge_into(std::vector<SimTime>& a, const std::vector<SimTime>& b);
double histogram_mean(const std::vector<SimTime>& w);
/// Fraction of weight on values strictly below `bound`.
double histogram_fraction_below(const std::vector<SimTime>& w, std::uint32_t bound);
/// Smallest value v with cumulative weight fraction >= p / 100.
std::uint32_t histogram_percentile(const std::vector<SimTime>& w, double p);

}  // namespace bfc
