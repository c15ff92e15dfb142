#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relcons/exactmath.hpp"

namespace relcons {

/// Largest n*b handled. Everything is exact integer arithmetic, and beyond
/// this the binomials get too large to be useful; callers get a RangeError.
inline constexpr std::int64_t kMaxInstances = 100000;

/// Shape of a contrastive test set: n bundles of b instances each.
struct BundleSpec {
  std::int64_t n = 0;
  std::int64_t b = 2;

  std::int64_t instances() const noexcept { return n * b; }

  /// Throws RangeError for n < 1, n*b over kMaxInstances, and
  /// UnsupportedError for b < 2 (with b = 1 consistency is just accuracy).
  void validate() const;

  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

/// A model outcome as integer counts: a correct instances, c fully correct bundles.
struct ScorePoint {
  std::int64_t a = 0;
  std::int64_t c = 0;

  friend bool operator==(const ScorePoint&, const ScorePoint&) = default;
};

/// The achievable consistency range C_a = [c_min, c_max], inclusive.
struct Bounds {
  std::int64_t c_min = 0;
  std::int64_t c_max = 0;

  bool contains(std::int64_t c) const noexcept { return c_min <= c && c <= c_max; }
  std::int64_t size() const noexcept { return c_max - c_min + 1; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Exact masses m(c, a) for every achievable c at one accuracy, stored
/// densely from c_min to c_max.
class ConsistencyDistribution {
 public:
  ConsistencyDistribution(BundleSpec spec, std::int64_t a, Bounds bounds,
                          std::vector<BigCount> masses, BigCount total);

  const BundleSpec& spec() const noexcept { return spec_; }
  std::int64_t accuracy() const noexcept { return a_; }
  const Bounds& bounds() const noexcept { return bounds_; }
  const BigCount& total() const noexcept { return total_; }
  const std::vector<BigCount>& masses() const noexcept { return masses_; }

  /// m(c, a); zero outside the achievable range.
  BigCount mass(std::int64_t c) const;
  /// mu(c, a), the masses summed up to and including c.
  BigCount cumulative(std::int64_t c) const;
  /// P(c | a) as a double.
  double probability(std::int64_t c) const;
  /// mu(c, a) / M(a) as a double.
  double cdf(std::int64_t c) const;
  /// Consistency with the largest mass (the smallest such c on ties).
  std::int64_t mode() const;

 private:
  BundleSpec spec_;
  std::int64_t a_;
  Bounds bounds_;
  std::vector<BigCount> masses_;
  std::vector<BigCount> prefix_;
  BigCount total_;
};

/// All scores for one model outcome.
struct EvalResult {
  BundleSpec spec;
  ScorePoint point;
  double accuracy = 0;     // a / (n b)
  double consistency = 0;  // c / n
  double rel_consistency = 0;
  double scaled_score = 0;
  /// Only defined for b = 2.
  std::optional<double> partial_correct_score;
};

/// Exact and floating difference rc(point1) - rc(point2).
struct RcDifference {
  double rc1 = 0;
  double rc2 = 0;
  double difference = 0;
  RatioComparison exact;

  int sign() const noexcept { return exact.sign(); }
};

/// Number of ways to select k cells of an m x b grid with no row fully
/// selected, by inclusion-exclusion over the number of full rows.
BigCount g_count(std::int64_t m, std::int64_t b, std::int64_t k);

/// m(c, a) for b = 2 from the direct formula C(n,c) C(n-c,a-2c) 2^(a-2c).
BigCount mass_pairs_closed_form(std::int64_t n, std::int64_t c, std::int64_t a);

/// m(c, a) for any b as C(n,c) G(n-c, b, a-cb).
BigCount mass_general(const BundleSpec& spec, std::int64_t c, std::int64_t a);

/// Owns the factorial table for one BundleSpec. Use this when asking many
/// questions about the same spec; the free functions below build one per call.
class ConsistencyCalculator {
 public:
  explicit ConsistencyCalculator(BundleSpec spec);

  const BundleSpec& spec() const noexcept { return spec_; }

  Bounds bounds(std::int64_t a) const;
  BigCount total_mass(std::int64_t a) const;
  BigCount mass(std::int64_t c, std::int64_t a) const;
  ConsistencyDistribution distribution(std::int64_t a) const;
  BigCount cumulative_mass(std::int64_t c, std::int64_t a) const;

  /// mu(c, a) / M(a) as an exact ratio. Throws InfeasibleScoreError when c is
  /// outside the achievable range.
  MassRatio rel_consistency_ratio(const ScorePoint& p) const;
  double rel_consistency(const ScorePoint& p) const;
  double scaled_score(const ScorePoint& p) const;
  double partial_correct_score(const ScorePoint& p) const;
  EvalResult evaluate(const ScorePoint& p) const;

 private:
  void check_accuracy(std::int64_t a) const;
  void check_point(const ScorePoint& p) const;
  BigCount g(std::int64_t m, std::int64_t k) const;

  BundleSpec spec_;
  BinomialTable binom_;
};

Bounds bounds(const BundleSpec& spec, std::int64_t a);
BigCount total_mass(const BundleSpec& spec, std::int64_t a);
BigCount mass(const BundleSpec& spec, std::int64_t c, std::int64_t a);
ConsistencyDistribution distribution(const BundleSpec& spec, std::int64_t a);
BigCount cumulative_mass(const BundleSpec& spec, std::int64_t c, std::int64_t a);
double rel_consistency(const BundleSpec& spec, const ScorePoint& p);
double scaled_score(const BundleSpec& spec, const ScorePoint& p);
double partial_correct_score(const BundleSpec& spec, const ScorePoint& p);
EvalResult evaluate(const BundleSpec& spec, const ScorePoint& p);

/// rc(p1) - rc(p2). The sign comes from mu1 M2 - mu2 M1 in exact integers;
/// the float difference from two single-division evaluations.
RcDifference rc_difference(const BundleSpec& spec1, const ScorePoint& p1,
                           const BundleSpec& spec2, const ScorePoint& p2);

}  // namespace relcons
