#include "relcons/oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "relcons/error.hpp"

namespace relcons::oracle {

std::uint64_t PatternCensus::at(std::int64_t a, std::int64_t c) const {
  auto it = counts.find({a, c});
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t PatternCensus::total() const {
  std::uint64_t t = 0;
  for (const auto& [key, v] : counts) t += v;
  return t;
}

std::uint64_t PatternCensus::marginal(std::int64_t a) const {
  std::uint64_t t = 0;
  for (auto it = counts.lower_bound({a, 0}); it != counts.end() && it->first.first == a; ++it) t += it->second;
  return t;
}

PatternCensus enumerate_counts(const BundleSpec& spec) {
  spec.validate();
  const std::int64_t nb = spec.instances();
  if (nb > kMaxEnumeratedInstances) {
    throw RangeError("enumeration is capped at " + std::to_string(kMaxEnumeratedInstances) +
                     " instances, spec has " + std::to_string(nb));
  }
  const auto n = static_cast<unsigned>(spec.n);
  const auto b = static_cast<unsigned>(spec.b);
  const std::uint64_t bundle_mask = (std::uint64_t{1} << b) - 1;

  // Dense (a, c) table first; the census map is built once at the end.
  std::vector<std::uint64_t> table(static_cast<std::size_t>((nb + 1) * (spec.n + 1)), 0);
  const std::uint64_t patterns = std::uint64_t{1} << nb;
  for (std::uint64_t p = 0; p < patterns; ++p) {
    const auto a = static_cast<std::size_t>(std::popcount(p));
    std::size_t c = 0;
    for (unsigned j = 0; j < n; ++j) {
      if (((p >> (j * b)) & bundle_mask) == bundle_mask) ++c;
    }
    ++table[a * (n + 1) + c];
  }

  PatternCensus census{spec, {}};
  for (std::int64_t a = 0; a <= nb; ++a) {
    for (std::int64_t c = 0; c <= spec.n; ++c) {
      const auto v = table[static_cast<std::size_t>(a * (spec.n + 1) + c)];
      if (v != 0) census.counts[{a, c}] = v;
    }
  }
  return census;
}

namespace {

// Uniform integer in [0, bound) by rejection from the top of the 64-bit range.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

EmpiricalDistribution sample_consistency(const BundleSpec& spec, std::int64_t a,
                                         std::uint64_t samples, std::uint64_t seed) {
  spec.validate();
  const std::int64_t nb = spec.instances();
  if (a < 0 || a > nb) {
    throw RangeError("accuracy count " + std::to_string(a) + " outside [0, " + std::to_string(nb) + "]");
  }
  if (samples < 1) throw RangeError("sample count must be at least 1");

  EmpiricalDistribution out{spec, a, samples, seed, {}};
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> index(static_cast<std::size_t>(nb));
  std::vector<std::int64_t> per_bundle(static_cast<std::size_t>(spec.n));

  for (std::uint64_t s = 0; s < samples; ++s) {
    // Restarting from the identity keeps each draw a function of the RNG stream alone.
    std::iota(index.begin(), index.end(), 0);
    for (std::int64_t i = 0; i < a; ++i) {
      const auto j = i + static_cast<std::int64_t>(bounded(rng, static_cast<std::uint64_t>(nb - i)));
      std::swap(index[static_cast<std::size_t>(i)], index[static_cast<std::size_t>(j)]);
    }
    std::fill(per_bundle.begin(), per_bundle.end(), 0);
    for (std::int64_t i = 0; i < a; ++i) ++per_bundle[static_cast<std::size_t>(index[static_cast<std::size_t>(i)] / spec.b)];
    const auto c = std::count(per_bundle.begin(), per_bundle.end(), spec.b);
    ++out.tallies[c];
  }
  return out;
}

double EmpiricalDistribution::cdf(std::int64_t c) const {
  std::uint64_t below = 0;
  for (const auto& [ci, count] : tallies) {
    if (ci > c) break;
    below += count;
  }
  return static_cast<double>(below) / static_cast<double>(samples);
}

double max_cdf_deviation(const EmpiricalDistribution& empirical, const ConsistencyDistribution& exact) {
  double worst = 0;
  const Bounds& bd = exact.bounds();
  for (std::int64_t c = bd.c_min; c <= bd.c_max; ++c) {
    worst = std::max(worst, std::abs(empirical.cdf(c) - exact.cdf(c)));
  }
  return worst;
}

}  // namespace relcons::oracle
