#pragma once

#include <cstdint>

namespace bfc {

// Simulation time in integer nanoseconds.
using SimTime = std::uint64_t;

inline constexpr SimTime kNanosecond = 1;
inline constexpr SimTime kMicrosecond = 1'000;
inline constexpr SimTime kMillisecond = 1'000'000;
inline constexpr SimTime kForever = ~SimTime{0};

// Link rate in bits per second.
using BitRate = std::uint64_t;

inline constexpr BitRate gbps(std::uint64_t g) { return g * 1'000'000'000ULL; }

/// Time to clock `bytes` onto a link of the given rate, rounded up to a whole
/// nanosecond.
inline constexpr SimTime serialization_time(std::uint64_t bytes, BitRate rate) {
  const unsigned __int128 bits_ns = static_cast<unsigned __int128>(bytes) * 8U * 1'000'000'000U;
  return static_cast<SimTime>((bits_ns + rate - 1) / rate);
}

/// Bytes a link of `rate` carries in `t`, rounded down.
inline constexpr std::uint64_t bytes_in(SimTime t, BitRate rate) {
  const unsigned __int128 bits = static_cast<unsigned __int128>(t) * rate;
  return static_cast<std::uint64_t>(bits / 8U / 1'000'000'000U);
}

}  // namespace bfc
