#pragma once

#include <cstdint>

namespace bfc {

/// Active flows on an M/G/1 processor-sharing link at load rho.
double geometric_pmf(double rho, std::uint32_t k);
double geometric_mean(double rho);

/// Probability that n flows hashed uniformly onto q queues are not all on
/// distinct queues.
double birthday_collision_prob(std::uint32_t n, std::uint32_t q);

/// Probability that at least one of n flows shares its table index with
/// another when indices are drawn uniformly from `slots`.
double index_collision_fraction(std::uint32_t n, std::uint64_t slots);

}  // namespace bfc
