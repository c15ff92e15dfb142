#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "relcons/consistency.hpp"

namespace relcons::oracle {

/// Hard cap on n*b for exhaustive enumeration (2^24 patterns).
inline constexpr std::int64_t kMaxEnumeratedInstances = 24;

/// Exact tally of every correctness pattern by (accuracy, consistency).
struct PatternCensus {
  BundleSpec spec;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> counts;

  /// Count for (a, c); zero when no pattern produced it.
  std::uint64_t at(std::int64_t a, std::int64_t c) const;
  std::uint64_t total() const;
  /// Patterns with accuracy a, summed over consistency.
  std::uint64_t marginal(std::int64_t a) const;
};

/// Visits all 2^(n b) patterns. Bit i is instance i; bundle j owns bits
/// [j b, (j+1) b). Throws RangeError above kMaxEnumeratedInstances.
PatternCensus enumerate_counts(const BundleSpec& spec);

struct EmpiricalDistribution {
  BundleSpec spec;
  std::int64_t a = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::map<std::int64_t, std::uint64_t> tallies;

  /// Fraction of draws with consistency <= c.
  double cdf(std::int64_t c) const;
};

/// Draws `samples` patterns uniformly from the C(n b, a) patterns with
/// accuracy a and tallies their consistency.
///
/// Each draw runs a partial Fisher-Yates shuffle over the n b instance
/// indices, taking the first a positions as the correct set. Randomness is
/// std::mt19937_64 seeded with `seed`, reduced to a bounded index by
/// rejection sampling (not std::uniform_int_distribution, whose output is
/// implementation-defined), so tallies are identical on every platform.
EmpiricalDistribution sample_consistency(const BundleSpec& spec, std::int64_t a,
                                         std::uint64_t samples, std::uint64_t seed);

/// Largest |empirical CDF - exact CDF| over the achievable range.
double max_cdf_deviation(const EmpiricalDistribution& empirical, const ConsistencyDistribution& exact);

}  // namespace relcons::oracle
