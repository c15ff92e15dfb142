#include "relcons/exactmath.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "relcons/error.hpp"
#include "test_util.hpp"

namespace relcons {
namespace {

using Rep = BigCount::Rep;

// Independent route: n! / (k! (n-k)!) from scratch.
Rep factorial_oracle(std::int64_t n) {
  Rep f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return f;
}

TEST(Binomial, SmallCases) {
  EXPECT_EQ(binomial(0, 0), BigCount(1));
  EXPECT_EQ(binomial(4, 2), BigCount(6));
  EXPECT_EQ(binomial(5, 0), BigCount(1));
  EXPECT_EQ(binomial(5, 5), BigCount(1));
}

TEST(Binomial, OutOfRangeKIsZero) {
  EXPECT_TRUE(binomial(4, -1).is_zero());
  EXPECT_TRUE(binomial(4, 5).is_zero());
  EXPECT_TRUE(binomial(0, 1).is_zero());
}

TEST(Binomial, NegativeNThrows) { EXPECT_THROW(binomial(-1, 0), RangeError); }

TEST(Binomial, TwoHundredChooseHundred) {
  // Frozen from an exact factorial ratio computed with Python integers.
  const BigCount v = binomial(200, 100);
  EXPECT_EQ(v.str(), "90548514656103281165404177077484163874504589675413336841320");
  EXPECT_EQ(v.str().size(), 59u);
  EXPECT_EQ(v.rep(), factorial_oracle(200) / (factorial_oracle(100) * factorial_oracle(100)));
}

TEST(Binomial, TwoHundredChooseOneThirty) {
  EXPECT_EQ(binomial(200, 130).str(), "10181000252388218501926831603222813321973190889192142340");
}

TEST(Binomial, MatchesPascalTriangleUpToThirty) {
  std::vector<Rep> row{1};
  for (std::int64_t n = 0; n <= 30; ++n) {
    for (std::int64_t k = 0; k <= n; ++k) {
      ASSERT_EQ(binomial(n, k).rep(), row[static_cast<std::size_t>(k)]) << "n=" << n << " k=" << k;
    }
    std::vector<Rep> next(row.size() + 1, 0);
    for (std::size_t k = 0; k < next.size(); ++k) {
      if (k < row.size()) next[k] += row[k];
      if (k > 0) next[k] += row[k - 1];
    }
    row = std::move(next);
  }
}

TEST(Binomial, Symmetry) {
  testing::Gen gen(11);
  for (int i = 0; i < 200; ++i) {
    const auto n = gen.between(0, 400);
    const auto k = gen.between(0, n);
    ASSERT_EQ(binomial(n, k), binomial(n, n - k)) << n << " " << k;
  }
}

TEST(BinomialTable, AgreesWithFreeFunction) {
  const BinomialTable table(300);
  EXPECT_EQ(table.max_n(), 300);
  testing::Gen gen(12);
  for (int i = 0; i < 300; ++i) {
    const auto n = gen.between(0, 320);  // above max_n falls back
    const auto k = gen.between(-2, n + 2);
    ASSERT_EQ(table(n, k), binomial(n, k)) << n << " " << k;
  }
}

TEST(Pow2, Values) {
  EXPECT_EQ(pow2(0), BigCount(1));
  EXPECT_EQ(pow2(10), BigCount(1024));
  EXPECT_EQ(pow2(100).str(), "1267650600228229401496703205376");
}

TEST(MassRatio, RejectsInvalid) {
  EXPECT_THROW(MassRatio(BigCount(1), BigCount(0)), RangeError);
  EXPECT_THROW(MassRatio(BigCount(3), BigCount(2)), RangeError);
}

TEST(RatioToUnitFloat, Examples) {
  EXPECT_EQ(ratio_to_unit_float(MassRatio(1, 2)), 0.5);
  EXPECT_EQ(ratio_to_unit_float(MassRatio(0, 7)), 0.0);
  EXPECT_EQ(ratio_to_unit_float(MassRatio(6, 6)), 1.0);
}

TEST(RatioToUnitFloat, HugeOperandsStayFinite) {
  // C(4000, 2000) is far above double range.
  const BigCount big = binomial(4000, 2000);
  const BigCount half(Rep(big.rep() / 2));
  EXPECT_NEAR(ratio_to_unit_float(MassRatio(half, big)), 0.5, 1e-15);
  EXPECT_EQ(ratio_to_unit_float(MassRatio(big, big)), 1.0);
  EXPECT_EQ(ratio_to_unit_float(MassRatio(BigCount(0), big)), 0.0);
}

TEST(Log10Ratio, Values) {
  EXPECT_DOUBLE_EQ(log10_ratio(MassRatio(1, 100)), -2.0);
  EXPECT_EQ(log10_ratio(MassRatio(5, 5)), 0.0);
  EXPECT_THROW(log10_ratio(MassRatio(0, 5)), RangeError);
  // 1 / 2^4000 is far below double range but its log is not.
  EXPECT_NEAR(log10_ratio(MassRatio(BigCount(1), pow2(4000))), -4000 * 0.30102999566398120, 1e-9);
}

TEST(CompareRatios, Examples) {
  auto eq = compare_ratios(MassRatio(1, 3), MassRatio(1, 3));
  EXPECT_EQ(eq.order, std::strong_ordering::equal);
  EXPECT_EQ(eq.cross_difference, 0);

  auto gt = compare_ratios(MassRatio(2, 3), MassRatio(1, 2));
  EXPECT_EQ(gt.order, std::strong_ordering::greater);
  EXPECT_EQ(gt.cross_difference, 1);
  EXPECT_EQ(gt.common_denominator, 6);
}

TEST(CompareRatios, WorkedExamplePair) {
  // mu(c, a) and M(a) at n = 100, b = 2, frozen from Python integers.
  const MassRatio first(BigCount(Rep("9472302363332504087160082208756956791098136935981383680")),
                        BigCount(Rep("10181000252388218501926831603222813321973190889192142340")));
  const MassRatio second(BigCount(Rep("168231616182597721564404159992111209350413942784")),
                         BigCount(Rep("453858377923246061067441390280868162761998660528")));
  EXPECT_EQ(compare_ratios(first, second).order, std::strong_ordering::greater);
  EXPECT_NEAR(ratio_to_unit_float(first), 0.930, 0.0005);
  EXPECT_NEAR(ratio_to_unit_float(second), 0.371, 0.0005);
}

TEST(CompareRatios, AgreesWithFloatsAndFloatsAreMonotone) {
  testing::Gen gen(13);
  for (int i = 0; i < 2000; ++i) {
    // Mix small denominators (ties likely) with big ones.
    const bool big = i % 2 == 0;
    auto draw = [&] {
      const auto d = big ? binomial(gen.between(50, 300), gen.between(1, 49))
                         : BigCount(static_cast<std::uint64_t>(gen.between(1, 40)));
      Rep num = big ? Rep(d.rep() * gen.between(0, 1000) / 1000) : Rep(gen.between(0, 40));
      if (num > d.rep()) num = d.rep();
      return MassRatio(BigCount(num), d);
    };
    const MassRatio r1 = draw();
    const MassRatio r2 = draw();
    const auto cmp = compare_ratios(r1, r2);
    const double f1 = ratio_to_unit_float(r1);
    const double f2 = ratio_to_unit_float(r2);
    if (f1 - f2 > 1e-9) ASSERT_EQ(cmp.order, std::strong_ordering::greater);
    if (f2 - f1 > 1e-9) ASSERT_EQ(cmp.order, std::strong_ordering::less);
    if (cmp.order == std::strong_ordering::less) ASSERT_LE(f1, f2);
    if (cmp.order == std::strong_ordering::greater) ASSERT_GE(f1, f2);
    if (cmp.order == std::strong_ordering::equal) ASSERT_EQ(f1, f2);
  }
}

}  // namespace
}  // namespace relcons
