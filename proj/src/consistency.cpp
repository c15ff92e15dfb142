#include "relcons/consistency.hpp"

#include <algorithm>
#include <string>

#include "relcons/error.hpp"

namespace relcons {

using Rep = BigCount::Rep;

namespace {

template <typename Binom>
BigCount g_count_impl(const Binom& binom, std::int64_t m, std::int64_t b, std::int64_t k) {
  if (m < 0 || b < 1 || k < 0) throw RangeError("g_count: requires m >= 0, b >= 1, k >= 0");
  if (k > m * (b - 1)) return BigCount{};
  const std::int64_t rows = std::min(m, k / b);
  Rep sum = 0;
  for (std::int64_t r = 0; r <= rows; ++r) {
    Rep term = binom(m, r).rep() * binom((m - r) * b, k - r * b).rep();
    if (r % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return BigCount(std::move(sum));
}

struct FreeBinomial {
  BigCount operator()(std::int64_t n, std::int64_t k) const { return binomial(n, k); }
};

std::string point_str(const ScorePoint& p) {
  return "(a=" + std::to_string(p.a) + ", c=" + std::to_string(p.c) + ")";
}

}  // namespace

void BundleSpec::validate() const {
  if (n < 1) throw RangeError("bundle count n must be at least 1, got " + std::to_string(n));
  if (b == 1) {
    throw UnsupportedError("bundle size 1: consistency equals accuracy and relative consistency is undefined");
  }
  if (b < 2) throw RangeError("bundle size b must be at least 2, got " + std::to_string(b));
  if (n > kMaxInstances / b) {
    throw RangeError("n*b exceeds " + std::to_string(kMaxInstances) +
                     " instances; exact arithmetic is refused at this size");
  }
}

ConsistencyDistribution::ConsistencyDistribution(BundleSpec spec, std::int64_t a, Bounds bounds,
                                                 std::vector<BigCount> masses, BigCount total)
    : spec_(spec), a_(a), bounds_(bounds), masses_(std::move(masses)), total_(std::move(total)) {
  if (static_cast<std::int64_t>(masses_.size()) != bounds_.size()) {
    throw DataError("distribution: mass vector does not match the achievable range");
  }
  prefix_.reserve(masses_.size());
  BigCount running;
  for (const auto& m : masses_) {
    running += m;
    prefix_.push_back(running);
  }
  if (running != total_) throw DataError("distribution: masses do not sum to the total");
}

BigCount ConsistencyDistribution::mass(std::int64_t c) const {
  if (!bounds_.contains(c)) return BigCount{};
  return masses_[static_cast<std::size_t>(c - bounds_.c_min)];
}

BigCount ConsistencyDistribution::cumulative(std::int64_t c) const {
  if (c < bounds_.c_min) return BigCount{};
  if (c >= bounds_.c_max) return total_;
  return prefix_[static_cast<std::size_t>(c - bounds_.c_min)];
}

double ConsistencyDistribution::probability(std::int64_t c) const {
  return ratio_to_unit_float(MassRatio(mass(c), total_));
}

double ConsistencyDistribution::cdf(std::int64_t c) const {
  return ratio_to_unit_float(MassRatio(cumulative(c), total_));
}

std::int64_t ConsistencyDistribution::mode() const {
  auto it = std::max_element(masses_.begin(), masses_.end());
  return bounds_.c_min + static_cast<std::int64_t>(it - masses_.begin());
}

BigCount g_count(std::int64_t m, std::int64_t b, std::int64_t k) {
  return g_count_impl(FreeBinomial{}, m, b, k);
}

BigCount mass_pairs_closed_form(std::int64_t n, std::int64_t c, std::int64_t a) {
  const std::int64_t singles = a - 2 * c;
  if (c < 0 || c > n || singles < 0 || singles > n - c) return BigCount{};
  return binomial(n, c) * binomial(n - c, singles) * pow2(static_cast<std::uint64_t>(singles));
}

BigCount mass_general(const BundleSpec& spec, std::int64_t c, std::int64_t a) {
  const std::int64_t rest = a - c * spec.b;
  if (c < 0 || c > spec.n || rest < 0) return BigCount{};
  return binomial(spec.n, c) * g_count(spec.n - c, spec.b, rest);
}

ConsistencyCalculator::ConsistencyCalculator(BundleSpec spec)
    : spec_((spec.validate(), spec)), binom_(spec.instances()) {}

void ConsistencyCalculator::check_accuracy(std::int64_t a) const {
  if (a < 0 || a > spec_.instances()) {
    throw RangeError("accuracy count " + std::to_string(a) + " outside [0, " +
                     std::to_string(spec_.instances()) + "]");
  }
}

void ConsistencyCalculator::check_point(const ScorePoint& p) const {
  check_accuracy(p.a);
  if (p.c < 0 || p.c > spec_.n) {
    throw RangeError("consistency count " + std::to_string(p.c) + " outside [0, " +
                     std::to_string(spec_.n) + "]");
  }
  const Bounds bd = bounds(p.a);
  if (!bd.contains(p.c)) {
    throw InfeasibleScoreError("score " + point_str(p) + " is not achievable; consistency must lie in [" +
                               std::to_string(bd.c_min) + ", " + std::to_string(bd.c_max) + "]");
  }
}

BigCount ConsistencyCalculator::g(std::int64_t m, std::int64_t k) const {
  return g_count_impl(binom_, m, spec_.b, k);
}

Bounds ConsistencyCalculator::bounds(std::int64_t a) const {
  check_accuracy(a);
  const std::int64_t spare = spec_.n * (spec_.b - 1);
  return Bounds{std::max<std::int64_t>(0, a - spare), a / spec_.b};
}

BigCount ConsistencyCalculator::total_mass(std::int64_t a) const {
  check_accuracy(a);
  return binom_(spec_.instances(), a);
}

BigCount ConsistencyCalculator::mass(std::int64_t c, std::int64_t a) const {
  check_accuracy(a);
  if (c < 0 || c > spec_.n) {
    throw RangeError("consistency count " + std::to_string(c) + " outside [0, " + std::to_string(spec_.n) + "]");
  }
  if (!bounds(a).contains(c)) return BigCount{};
  const std::int64_t n = spec_.n;
  if (spec_.b == 2) {
    const std::int64_t singles = a - 2 * c;
    return binom_(n, c) * binom_(n - c, singles) * pow2(static_cast<std::uint64_t>(singles));
  }
  return binom_(n, c) * g(n - c, a - c * spec_.b);
}

ConsistencyDistribution ConsistencyCalculator::distribution(std::int64_t a) const {
  const Bounds bd = bounds(a);
  std::vector<BigCount> masses;
  masses.reserve(static_cast<std::size_t>(bd.size()));
  for (std::int64_t c = bd.c_min; c <= bd.c_max; ++c) masses.push_back(mass(c, a));
  return ConsistencyDistribution(spec_, a, bd, std::move(masses), total_mass(a));
}

BigCount ConsistencyCalculator::cumulative_mass(std::int64_t c, std::int64_t a) const {
  check_accuracy(a);
  if (c < 0 || c > spec_.n) {
    throw RangeError("consistency count " + std::to_string(c) + " outside [0, " + std::to_string(spec_.n) + "]");
  }
  const Bounds bd = bounds(a);
  if (c >= bd.c_max) return total_mass(a);
  // Sum whichever side of c is shorter; the complement is exact too.
  if (c - bd.c_min <= bd.c_max - c) {
    BigCount sum;
    for (std::int64_t ci = bd.c_min; ci <= c; ++ci) sum += mass(ci, a);
    return sum;
  }
  Rep upper = 0;
  for (std::int64_t ci = c + 1; ci <= bd.c_max; ++ci) upper += mass(ci, a).rep();
  return BigCount(Rep(total_mass(a).rep() - upper));
}

MassRatio ConsistencyCalculator::rel_consistency_ratio(const ScorePoint& p) const {
  check_point(p);
  return MassRatio(cumulative_mass(p.c, p.a), total_mass(p.a));
}

double ConsistencyCalculator::rel_consistency(const ScorePoint& p) const {
  return ratio_to_unit_float(rel_consistency_ratio(p));
}

double ConsistencyCalculator::scaled_score(const ScorePoint& p) const {
  check_point(p);
  const Bounds bd = bounds(p.a);
  if (bd.c_max == bd.c_min) return 1.0;
  return static_cast<double>(p.c - bd.c_min) / static_cast<double>(bd.c_max - bd.c_min);
}

double ConsistencyCalculator::partial_correct_score(const ScorePoint& p) const {
  if (spec_.b != 2) {
    throw UnsupportedError("partial-correct score needs bundle size 2; with b = " + std::to_string(spec_.b) +
                           " the touched-bundle count is not determined by (a, c)");
  }
  check_point(p);
  if (p.a == 0) return 1.0;
  // c fully correct bundles plus a - 2c bundles with exactly one correct.
  return static_cast<double>(p.c) / static_cast<double>(p.a - p.c);
}

EvalResult ConsistencyCalculator::evaluate(const ScorePoint& p) const {
  EvalResult r;
  r.spec = spec_;
  r.point = p;
  r.rel_consistency = rel_consistency(p);
  r.accuracy = static_cast<double>(p.a) / static_cast<double>(spec_.instances());
  r.consistency = static_cast<double>(p.c) / static_cast<double>(spec_.n);
  r.scaled_score = scaled_score(p);
  if (spec_.b == 2) r.partial_correct_score = partial_correct_score(p);
  return r;
}

Bounds bounds(const BundleSpec& spec, std::int64_t a) {
  spec.validate();
  if (a < 0 || a > spec.instances()) {
    throw RangeError("accuracy count " + std::to_string(a) + " outside [0, " +
                     std::to_string(spec.instances()) + "]");
  }
  return Bounds{std::max<std::int64_t>(0, a - spec.n * (spec.b - 1)), a / spec.b};
}

BigCount total_mass(const BundleSpec& spec, std::int64_t a) {
  bounds(spec, a);
  return binomial(spec.instances(), a);
}

BigCount mass(const BundleSpec& spec, std::int64_t c, std::int64_t a) {
  return ConsistencyCalculator(spec).mass(c, a);
}

ConsistencyDistribution distribution(const BundleSpec& spec, std::int64_t a) {
  return ConsistencyCalculator(spec).distribution(a);
}

BigCount cumulative_mass(const BundleSpec& spec, std::int64_t c, std::int64_t a) {
  return ConsistencyCalculator(spec).cumulative_mass(c, a);
}

double rel_consistency(const BundleSpec& spec, const ScorePoint& p) {
  return ConsistencyCalculator(spec).rel_consistency(p);
}

double scaled_score(const BundleSpec& spec, const ScorePoint& p) {
  return ConsistencyCalculator(spec).scaled_score(p);
}

double partial_correct_score(const BundleSpec& spec, const ScorePoint& p) {
  return ConsistencyCalculator(spec).partial_correct_score(p);
}

EvalResult evaluate(const BundleSpec& spec, const ScorePoint& p) {
  return ConsistencyCalculator(spec).evaluate(p);
}

RcDifference rc_difference(const BundleSpec& spec1, const ScorePoint& p1,
                           const BundleSpec& spec2, const ScorePoint& p2) {
  const MassRatio r1 = ConsistencyCalculator(spec1).rel_consistency_ratio(p1);
  const MassRatio r2 = ConsistencyCalculator(spec2).rel_consistency_ratio(p2);
  RcDifference d;
  d.rc1 = ratio_to_unit_float(r1);
  d.rc2 = ratio_to_unit_float(r2);
  d.difference = d.rc1 - d.rc2;
  d.exact = compare_ratios(r1, r2);
  return d;
}

}  // namespace relcons
