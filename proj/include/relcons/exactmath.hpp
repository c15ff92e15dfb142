#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace relcons {

/// Exact nonnegative integer count. Wraps an arbitrary-precision integer so
/// pattern counts never pass through floating point.
class BigCount {
 public:
  using Rep = boost::multiprecision::cpp_int;

  BigCount() = default;
  BigCount(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  explicit BigCount(Rep v);

  const Rep& rep() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_.is_zero(); }
  std::string str() const { return value_.str(); }

  /// Index of the highest set bit; -1 for zero.
  long msb() const;

  BigCount& operator+=(const BigCount& o) {
    value_ += o.value_;
    return *this;
  }
  BigCount& operator*=(const BigCount& o) {
    value_ *= o.value_;
    return *this;
  }
  friend BigCount operator+(BigCount l, const BigCount& r) { return l += r; }
  friend BigCount operator*(BigCount l, const BigCount& r) { return l *= r; }

  friend bool operator==(const BigCount& l, const BigCount& r) { return l.value_ == r.value_; }
  friend std::strong_ordering operator<=>(const BigCount& l, const BigCount& r) {
    if (l.value_ < r.value_) return std::strong_ordering::less;
    if (r.value_ < l.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rep value_;
};

/// C(n, k); zero when k < 0 or k > n.
BigCount binomial(std::int64_t n, std::int64_t k);

/// 2^e exactly.
BigCount pow2(std::uint64_t e);

/// Factorial table built once for 0..max_n; immutable afterwards and safe to
/// share between threads. Grid emission calls binomial O(n^2) times, so the
/// hot paths go through this instead of the free function.
class BinomialTable {
 public:
  explicit BinomialTable(std::int64_t max_n);

  std::int64_t max_n() const noexcept { return static_cast<std::int64_t>(factorials_.size()) - 1; }

  /// C(n, k) for n <= max_n; falls back to the free function above that.
  BigCount operator()(std::int64_t n, std::int64_t k) const;

 private:
  std::vector<BigCount::Rep> factorials_;
};

/// A probability held as an exact fraction numerator/denominator.
class MassRatio {
 public:
  /// Throws RangeError unless 0 < denominator and numerator <= denominator.
  MassRatio(BigCount numerator, BigCount denominator);

  const BigCount& numerator() const noexcept { return numerator_; }
  const BigCount& denominator() const noexcept { return denominator_; }

 private:
  BigCount numerator_;
  BigCount denominator_;
};

/// Numerator and denominator are built exactly, then divided once in double.
double ratio_to_unit_float(const MassRatio& r);

/// log10(numerator / denominator) without forming the quotient, so tail
/// probabilities far below double range still get a finite value. Throws
/// RangeError for a zero numerator.
double log10_ratio(const MassRatio& r);

/// Result of an exact comparison of two ratios.
struct RatioComparison {
  std::strong_ordering order = std::strong_ordering::equal;
  /// n1*d2 - n2*d1, exact and signed.
  BigCount::Rep cross_difference;
  /// d1*d2, the common denominator of the difference.
  BigCount::Rep common_denominator;

  int sign() const noexcept { return cross_difference.sign(); }
};

RatioComparison compare_ratios(const MassRatio& r1, const MassRatio& r2);

}  // namespace relcons
