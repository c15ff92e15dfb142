#include "relcons/consistency.hpp"

#include <gtest/gtest.h>

#include <map>

#include "relcons/error.hpp"
#include "test_util.hpp"

namespace relcons {
namespace {

using Rep = BigCount::Rep;

// Brute force over every correctness pattern: (a, c) -> count.
std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> brute_force(std::int64_t n, std::int64_t b) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> out;
  const std::uint64_t full = (std::uint64_t{1} << b) - 1;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << (n * b)); ++p) {
    std::int64_t a = 0;
    std::int64_t c = 0;
    for (std::int64_t j = 0; j < n; ++j) {
      const std::uint64_t bits = (p >> (j * b)) & full;
      a += __builtin_popcountll(bits);
      if (bits == full) ++c;
    }
    ++out[{a, c}];
  }
  return out;
}

const BundleSpec kHundred{100, 2};

TEST(BundleSpec, Validation) {
  EXPECT_NO_THROW((BundleSpec{1, 2}.validate()));
  EXPECT_THROW((BundleSpec{0, 2}.validate()), RangeError);
  EXPECT_THROW((BundleSpec{5, 1}.validate()), UnsupportedError);
  EXPECT_THROW((BundleSpec{5, 0}.validate()), RangeError);
  EXPECT_THROW((BundleSpec{50001, 2}.validate()), RangeError);
  EXPECT_NO_THROW((BundleSpec{50000, 2}.validate()));
}

TEST(Bounds, Examples) {
  EXPECT_EQ(bounds(kHundred, 0), (Bounds{0, 0}));
  EXPECT_EQ(bounds(kHundred, 130), (Bounds{30, 65}));
  EXPECT_EQ(bounds(BundleSpec{3, 3}, 8), (Bounds{2, 2}));
}

TEST(Bounds, OutOfRangeAccuracy) {
  EXPECT_THROW(bounds(kHundred, -1), RangeError);
  EXPECT_THROW(bounds(kHundred, 201), RangeError);
}

TEST(Bounds, EndpointsAndNonEmpty) {
  for (std::int64_t b = 2; b <= 5; ++b) {
    for (std::int64_t n = 1; n <= 12; ++n) {
      const BundleSpec spec{n, b};
      EXPECT_EQ(bounds(spec, 0), (Bounds{0, 0}));
      EXPECT_EQ(bounds(spec, n * b), (Bounds{n, n}));
      for (std::int64_t a = 0; a <= n * b; ++a) {
        const Bounds bd = bounds(spec, a);
        ASSERT_LE(bd.c_min, bd.c_max);
        ASSERT_GE(bd.c_min, 0);
        ASSERT_LE(bd.c_max, n);
      }
    }
  }
}

TEST(Bounds, MatchEnumeration) {
  // n = 3, b = 3: every pattern with 8 correct has exactly 2 full bundles.
  const auto census = brute_force(3, 3);
  for (std::int64_t c = 0; c <= 3; ++c) {
    EXPECT_EQ(census.count({8, c}) > 0, c == 2);
  }
}

TEST(TotalMass, Examples) {
  EXPECT_EQ(total_mass(BundleSpec{2, 2}, 2), BigCount(6));
  EXPECT_EQ(total_mass(BundleSpec{2, 2}, 0), BigCount(1));
  EXPECT_EQ(total_mass(kHundred, 130).str(), "10181000252388218501926831603222813321973190889192142340");
  EXPECT_THROW(total_mass(kHundred, 201), RangeError);
}

TEST(GCount, Examples) {
  for (std::int64_t m = 0; m <= 5; ++m) {
    for (std::int64_t b = 1; b <= 4; ++b) EXPECT_EQ(g_count(m, b, 0), BigCount(1));
  }
  EXPECT_EQ(g_count(1, 2, 1), BigCount(2));
  EXPECT_EQ(g_count(2, 2, 2), BigCount(4));
  EXPECT_THROW(g_count(-1, 2, 0), RangeError);
  EXPECT_THROW(g_count(1, 0, 0), RangeError);
}

TEST(GCount, ZeroExactlyAboveCapacity) {
  for (std::int64_t m = 0; m <= 8; ++m) {
    for (std::int64_t b = 1; b <= 4; ++b) {
      for (std::int64_t k = 0; k <= m * b + 2; ++k) {
        ASSERT_EQ(g_count(m, b, k).is_zero(), k > m * (b - 1)) << m << " " << b << " " << k;
      }
    }
  }
}

TEST(GCount, RowSumIdentity) {
  for (std::int64_t m = 0; m <= 8; ++m) {
    for (std::int64_t b = 1; b <= 4; ++b) {
      Rep sum = 0;
      for (std::int64_t k = 0; k <= m * (b - 1); ++k) sum += g_count(m, b, k).rep();
      Rep expected = boost::multiprecision::pow(Rep((1 << b) - 1), static_cast<unsigned>(m));
      ASSERT_EQ(sum, expected) << "m=" << m << " b=" << b;
    }
  }
}

TEST(GCount, ThreeByThreeRow) {
  const std::vector<std::uint64_t> expected{1, 9, 36, 81, 108, 81, 27};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(g_count(3, 3, k), BigCount(expected[k]));
}

TEST(Mass, Examples) {
  const BundleSpec two{2, 2};
  EXPECT_EQ(mass(two, 1, 2), BigCount(2));
  EXPECT_EQ(mass(two, 0, 2), BigCount(4));
  EXPECT_TRUE(mass(BundleSpec{5, 2}, 3, 5).is_zero());
  EXPECT_THROW(mass(two, 3, 2), RangeError);
  EXPECT_THROW(mass(two, -1, 2), RangeError);
  EXPECT_THROW(mass(two, 0, 5), RangeError);
}

TEST(Mass, MatchesBruteForce) {
  for (std::int64_t b = 2; b <= 4; ++b) {
    for (std::int64_t n = 1; n * b <= 16; ++n) {
      const auto census = brute_force(n, b);
      const ConsistencyCalculator calc(BundleSpec{n, b});
      for (std::int64_t a = 0; a <= n * b; ++a) {
        for (std::int64_t c = 0; c <= n; ++c) {
          auto it = census.find({a, c});
          const std::uint64_t expected = it == census.end() ? 0 : it->second;
          ASSERT_EQ(calc.mass(c, a), BigCount(expected)) << "n=" << n << " b=" << b << " a=" << a << " c=" << c;
        }
      }
    }
  }
}

TEST(Mass, PairsClosedFormEqualsInclusionExclusion) {
  for (std::int64_t n = 1; n <= 20; ++n) {
    const BundleSpec spec{n, 2};
    for (std::int64_t a = 0; a <= 2 * n; ++a) {
      for (std::int64_t c = 0; c <= n; ++c) {
        ASSERT_EQ(mass_pairs_closed_form(n, c, a), mass_general(spec, c, a)) << n << " " << a << " " << c;
      }
    }
  }
}

TEST(Distribution, Examples) {
  const auto d = distribution(BundleSpec{2, 2}, 2);
  EXPECT_EQ(d.bounds(), (Bounds{0, 1}));
  EXPECT_EQ(d.mass(0), BigCount(4));
  EXPECT_EQ(d.mass(1), BigCount(2));
  EXPECT_EQ(d.total(), BigCount(6));

  const auto full = distribution(BundleSpec{1, 2}, 2);
  ASSERT_EQ(full.masses().size(), 1u);
  EXPECT_EQ(full.mass(1), BigCount(1));
  EXPECT_EQ(full.total(), BigCount(1));
}

TEST(Distribution, ModeIsInterior) {
  const auto d = distribution(kHundred, 100);
  EXPECT_EQ(d.bounds(), (Bounds{0, 50}));
  EXPECT_GT(d.mode(), 0);
  EXPECT_LT(d.mode(), 50);
  EXPECT_EQ(d.mode(), 25);  // Python oracle
}

TEST(Distribution, ThreeInstanceBundles) {
  // n = 4, b = 3, a = 6: C(4,c) G(4-c, 3, 6-3c), frozen from Python.
  const auto d = distribution(BundleSpec{4, 3}, 6);
  EXPECT_EQ(d.bounds(), (Bounds{0, 2}));
  EXPECT_EQ(d.mass(0), BigCount(594));
  EXPECT_EQ(d.mass(1), BigCount(324));
  EXPECT_EQ(d.mass(2), BigCount(6));
  EXPECT_EQ(d.total(), BigCount(924));
}

TEST(Distribution, PartitionIdentity) {
  testing::Gen gen(21);
  for (int i = 0; i < 40; ++i) {
    const BundleSpec spec{gen.between(1, 60), gen.between(2, 5)};
    const auto a = gen.between(0, spec.instances());
    const auto d = distribution(spec, a);
    BigCount sum;
    for (const auto& m : d.masses()) {
      ASSERT_FALSE(m.is_zero());
      sum += m;
    }
    ASSERT_EQ(sum, d.total());
    ASSERT_EQ(d.total(), binomial(spec.instances(), a));
  }
}

TEST(CumulativeMass, Examples) {
  const BundleSpec two{2, 2};
  EXPECT_EQ(cumulative_mass(two, 0, 2), BigCount(4));
  EXPECT_EQ(cumulative_mass(two, 1, 2), BigCount(6));
  EXPECT_EQ(cumulative_mass(kHundred, 65, 130), total_mass(kHundred, 130));
  EXPECT_EQ(cumulative_mass(kHundred, 100, 130), total_mass(kHundred, 130));
  EXPECT_TRUE(cumulative_mass(kHundred, 10, 130).is_zero());
}

TEST(CumulativeMass, BothSummationSidesAgree) {
  const ConsistencyCalculator calc(BundleSpec{30, 3});
  for (std::int64_t a = 0; a <= 90; a += 7) {
    const auto d = calc.distribution(a);
    for (std::int64_t c = 0; c <= 30; ++c) ASSERT_EQ(calc.cumulative_mass(c, a), d.cumulative(c));
  }
}

TEST(RelConsistency, WorkedExample) {
  EXPECT_NEAR(rel_consistency(kHundred, {130, 45}), 0.930, 0.0005);
  EXPECT_NEAR(rel_consistency(kHundred, {150, 55}), 0.371, 0.0005);
  EXPECT_EQ(rel_consistency(kHundred, {130, 65}), 1.0);
  EXPECT_EQ(rel_consistency(kHundred, {0, 0}), 1.0);
}

TEST(RelConsistency, ToyLayouts) {
  // Five bundles of two instances.
  const BundleSpec five{5, 2};
  EXPECT_EQ(rel_consistency(five, {4, 2}), 1.0);
  EXPECT_NEAR(rel_consistency(five, {7, 2}), 0.667, 0.0005);
  EXPECT_EQ(rel_consistency(five, {7, 3}), 1.0);
  EXPECT_NEAR(rel_consistency(five, {8, 3}), 0.889, 0.0005);
  EXPECT_EQ(rel_consistency(five, {8, 4}), 1.0);
}

TEST(RelConsistency, Errors) {
  EXPECT_THROW(rel_consistency(kHundred, {130, 29}), InfeasibleScoreError);
  EXPECT_THROW(rel_consistency(kHundred, {130, 66}), InfeasibleScoreError);
  EXPECT_THROW(rel_consistency(kHundred, {201, 50}), RangeError);
  EXPECT_THROW(rel_consistency(kHundred, {130, 101}), RangeError);
}

TEST(RelConsistency, NondecreasingInConsistency) {
  testing::Gen gen(22);
  for (int i = 0; i < 30; ++i) {
    const BundleSpec spec{gen.between(1, 80), gen.between(2, 4)};
    const ConsistencyCalculator calc(spec);
    const auto a = gen.between(0, spec.instances());
    const Bounds bd = calc.bounds(a);
    double prev = 0;
    for (std::int64_t c = bd.c_min; c <= bd.c_max; ++c) {
      const double v = calc.rel_consistency({a, c});
      ASSERT_GE(v, prev);
      ASSERT_LE(v, 1.0);
      prev = v;
    }
    ASSERT_EQ(prev, 1.0);
  }
}

TEST(RcDifference, Examples) {
  const auto same = rc_difference(kHundred, {130, 45}, kHundred, {130, 45});
  EXPECT_EQ(same.sign(), 0);
  EXPECT_EQ(same.difference, 0.0);

  const auto pair = rc_difference(kHundred, {130, 45}, kHundred, {150, 55});
  EXPECT_EQ(pair.sign(), 1);
  EXPECT_NEAR(pair.difference, 0.559, 0.001);

  const auto adjacent = rc_difference(kHundred, {100, 40}, kHundred, {100, 41});
  EXPECT_EQ(adjacent.sign(), -1);
}

TEST(RcDifference, ExactSignWhereFloatsTie) {
  // Both round to exactly 1.0 in double; Python Fractions give
  // M - mu(45) = 19694110583355927468600494307786078641256 and
  // M - mu(46) = 124431178634033848050330696033919409256 with M = C(200, 100).
  const auto d = rc_difference(kHundred, {100, 45}, kHundred, {100, 46});
  EXPECT_EQ(d.rc1, 1.0);
  EXPECT_EQ(d.rc2, 1.0);
  EXPECT_EQ(d.difference, 0.0);
  EXPECT_EQ(d.sign(), -1);
  const Rep m = binomial(200, 100).rep();
  const Rep expected = (Rep("124431178634033848050330696033919409256") -
                        Rep("19694110583355927468600494307786078641256")) * m;
  EXPECT_EQ(d.exact.cross_difference, expected);
}

TEST(ScaledScore, Examples) {
  EXPECT_EQ(scaled_score(kHundred, {130, 65}), 1.0);
  EXPECT_EQ(scaled_score(kHundred, {130, 30}), 0.0);
  EXPECT_NEAR(scaled_score(kHundred, {130, 45}), 15.0 / 35.0, 1e-15);
  EXPECT_EQ(scaled_score(kHundred, {0, 0}), 1.0);  // single-point range
  EXPECT_THROW(scaled_score(kHundred, {130, 20}), InfeasibleScoreError);
}

TEST(PartialCorrectScore, Examples) {
  EXPECT_EQ(partial_correct_score(kHundred, {0, 0}), 1.0);
  EXPECT_EQ(partial_correct_score(kHundred, {130, 65}), 1.0);
  EXPECT_NEAR(partial_correct_score(kHundred, {130, 45}), 45.0 / 85.0, 1e-15);
  EXPECT_THROW(partial_correct_score(BundleSpec{10, 3}, {6, 1}), UnsupportedError);
}

TEST(Evaluate, FillsAllFields) {
  const EvalResult r = evaluate(kHundred, {130, 45});
  EXPECT_DOUBLE_EQ(r.accuracy, 0.65);
  EXPECT_DOUBLE_EQ(r.consistency, 0.45);
  EXPECT_NEAR(r.rel_consistency, 0.930, 0.0005);
  ASSERT_TRUE(r.partial_correct_score.has_value());
  EXPECT_FALSE(evaluate(BundleSpec{10, 3}, {6, 1}).partial_correct_score.has_value());
  EXPECT_EQ(evaluate(kHundred, {130, 65}).rel_consistency, 1.0);
}

}  // namespace
}  // namespace relcons
