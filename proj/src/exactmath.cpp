#include "relcons/exactmath.hpp"

#include <algorithm>
#include <cmath>

#include "relcons/error.hpp"

namespace relcons {

using Rep = BigCount::Rep;

BigCount::BigCount(Rep v) : value_(std::move(v)) {
  if (value_.sign() < 0) throw RangeError("BigCount cannot be negative");
}

long BigCount::msb() const {
  if (value_.is_zero()) return -1;
  return static_cast<long>(boost::multiprecision::msb(value_));
}

BigCount binomial(std::int64_t n, std::int64_t k) {
  if (n < 0) throw RangeError("binomial: n must be nonnegative");
  if (k < 0 || k > n) return BigCount{};
  k = std::min(k, n - k);
  Rep r = 1;
  // r holds C(n - k + i, i) after step i, so each division is exact.
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= static_cast<std::uint64_t>(n - k + i);
    r /= static_cast<std::uint64_t>(i);
  }
  return BigCount(std::move(r));
}

BigCount pow2(std::uint64_t e) {
  Rep r = 1;
  r <<= e;
  return BigCount(std::move(r));
}

BinomialTable::BinomialTable(std::int64_t max_n) {
  if (max_n < 0) throw RangeError("BinomialTable: max_n must be nonnegative");
  factorials_.reserve(static_cast<std::size_t>(max_n) + 1);
  factorials_.emplace_back(1);
  for (std::int64_t i = 1; i <= max_n; ++i) {
    factorials_.push_back(factorials_.back() * static_cast<std::uint64_t>(i));
  }
}

BigCount BinomialTable::operator()(std::int64_t n, std::int64_t k) const {
  if (n > max_n()) return binomial(n, k);
  if (n < 0) throw RangeError("binomial: n must be nonnegative");
  if (k < 0 || k > n) return BigCount{};
  const auto& f = factorials_;
  return BigCount(Rep(f[n] / (f[k] * f[n - k])));
}

MassRatio::MassRatio(BigCount numerator, BigCount denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_.is_zero()) throw RangeError("MassRatio: zero denominator");
  if (numerator_ > denominator_) throw RangeError("MassRatio: numerator exceeds denominator");
}

double ratio_to_unit_float(const MassRatio& r) {
  const Rep& num = r.numerator().rep();
  const Rep& den = r.denominator().rep();
  if (num == den) return 1.0;
  // Keep the denominator inside double range. The same shift is applied to
  // both sides, so num' <= den' still holds.
  const long shift = std::max(0L, r.denominator().msb() - 1000);
  const double n = Rep(num >> shift).convert_to<double>();
  const double d = Rep(den >> shift).convert_to<double>();
  return std::clamp(n / d, 0.0, 1.0);
}

double log10_ratio(const MassRatio& r) {
  if (r.numerator().is_zero()) throw RangeError("log10 of a zero probability");
  // x = (x >> s) * 2^s with x >> s keeping 64 significant bits.
  auto log10_of = [](const BigCount& x) {
    const long s = std::max(0L, x.msb() - 63);
    return std::log10(Rep(x.rep() >> s).convert_to<double>()) + static_cast<double>(s) * std::log10(2.0);
  };
  if (r.numerator() == r.denominator()) return 0.0;
  return std::min(0.0, log10_of(r.numerator()) - log10_of(r.denominator()));
}

RatioComparison compare_ratios(const MassRatio& r1, const MassRatio& r2) {
  RatioComparison out;
  out.cross_difference = r1.numerator().rep() * r2.denominator().rep() -
                         r2.numerator().rep() * r1.denominator().rep();
  out.common_denominator = r1.denominator().rep() * r2.denominator().rep();
  const int s = out.cross_difference.sign();
  out.order = s < 0 ? std::strong_ordering::less
                    : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  return out;
}

}  // namespace relcons
