#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bfc {

/// splitmix64 finalizer. Used as the network-wide hash for ECMP, flow-table
/// indexing and stochastic queue assignment.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) { return mix64(seed ^ mix64(value)); }

/// Seeded random stream. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; all distribution transforms are implemented here
/// so draws do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed of the child stream for a named component: hash of (root, name).
  /// Adding a component never perturbs the streams of the others.
  static std::uint64_t derive_seed(std::uint64_t root, std::string_view name);
  static Rng for_component(std::uint64_t root, std::string_view name) { return Rng(derive_seed(root, name)); }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  double exponential(double mean);
  double normal();
  /// Lognormal with the given underlying normal parameters.
  double lognormal(double mu, double sigma);

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace bfc
