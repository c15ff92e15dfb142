#include "relcons/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "relcons/error.hpp"

namespace relcons::report {

void ProportionInput::validate() const {
  auto check = [](double pct, const char* what) {
    if (!(pct >= 0.0 && pct <= 100.0)) {
      throw RangeError(std::string(what) + " percentage must lie in [0, 100], got " + format_double(pct));
    }
  };
  if (accuracy_pair) {
    check(accuracy_pair->first, "original accuracy");
    check(accuracy_pair->second, "contrast accuracy");
  } else {
    check(accuracy_pct, "accuracy");
  }
  check(consistency_pct, "consistency");
}

double ProportionInput::effective_accuracy_pct() const {
  if (accuracy_pair) return (accuracy_pair->first + accuracy_pair->second) / 2.0;
  return accuracy_pct;
}

std::string_view to_string(Rounding r) {
  return r == Rounding::kHalfUp ? "half-up" : "truncate";
}

Rounding parse_rounding(std::string_view s) {
  if (s == "half-up") return Rounding::kHalfUp;
  if (s == "truncate") return Rounding::kTruncate;
  throw RangeError("unknown rounding \"" + std::string(s) + "\" (expected half-up or truncate)");
}

std::int64_t percent_to_count(std::int64_t total, double pct, Rounding rounding) {
  if (!(pct >= 0.0 && pct <= 100.0)) throw RangeError("percentage must lie in [0, 100], got " + format_double(pct));
  // pct in millionths of a percent, so count = total * micro / 10^8 exactly.
  constexpr std::int64_t kScale = 100'000'000;
  const std::int64_t micro = std::llround(pct * 1e6);
  const std::int64_t num = total * micro;
  if (rounding == Rounding::kTruncate) return num / kScale;
  return (2 * num + kScale) / (2 * kScale);
}

ProportionResult rc_for_proportions(const ProportionInput& input, Rounding rounding) {
  input.validate();
  const BundleSpec spec{input.n, input.b};
  const ConsistencyCalculator calc(spec);

  ProportionResult out;
  ScorePoint p;
  p.a = percent_to_count(spec.instances(), input.effective_accuracy_pct(), rounding);
  p.c = percent_to_count(spec.n, input.consistency_pct, rounding);
  const Bounds bd = calc.bounds(p.a);
  if (!bd.contains(p.c)) {
    const std::int64_t moved = std::clamp(p.c, bd.c_min, bd.c_max);
    out.warnings.push_back("consistency count " + std::to_string(p.c) + " is not achievable at accuracy count " +
                           std::to_string(p.a) + "; clamped to " + std::to_string(moved));
    p.c = moved;
    out.clamped = true;
  }
  out.result = calc.evaluate(p);
  return out;
}

namespace {

struct MetricName {
  Metric metric;
  std::string_view name;
};

constexpr std::array kMetricNames{
    MetricName{Metric::kProbability, "probability"},
    MetricName{Metric::kLog10Probability, "log10_probability"},
    MetricName{Metric::kRelConsistency, "rel_consistency"},
    MetricName{Metric::kScaled, "scaled"},
    MetricName{Metric::kPartialCorrect, "partial_correct"},
    MetricName{Metric::kDeltaScaled, "delta_scaled"},
    MetricName{Metric::kDeltaPartialCorrect, "delta_partial_correct"},
};

}  // namespace

std::string_view to_string(Metric m) {
  for (const auto& entry : kMetricNames) {
    if (entry.metric == m) return entry.name;
  }
  return "unknown";
}

Metric parse_metric(std::string_view s) {
  for (const auto& entry : kMetricNames) {
    if (entry.name == s) return entry.metric;
  }
  throw RangeError("unknown metric \"" + std::string(s) + "\"");
}

std::vector<std::string_view> metric_names() {
  std::vector<std::string_view> out;
  for (const auto& entry : kMetricNames) out.push_back(entry.name);
  return out;
}

std::vector<GridCell> emit_grid(const BundleSpec& spec, Metric metric) {
  const bool needs_pairs = metric == Metric::kPartialCorrect || metric == Metric::kDeltaPartialCorrect;
  spec.validate();
  if (needs_pairs && spec.b != 2) {
    throw UnsupportedError("metric " + std::string(to_string(metric)) + " needs bundle size 2");
  }
  const ConsistencyCalculator calc(spec);
  std::vector<GridCell> cells;
  for (std::int64_t a = 0; a <= spec.instances(); ++a) {
    const ConsistencyDistribution dist = calc.distribution(a);
    const Bounds& bd = dist.bounds();
    for (std::int64_t c = bd.c_min; c <= bd.c_max; ++c) {
      const ScorePoint p{a, c};
      double v = 0;
      switch (metric) {
        case Metric::kProbability:
          v = dist.probability(c);
          break;
        case Metric::kLog10Probability:
          v = log10_ratio(MassRatio(dist.mass(c), dist.total()));
          break;
        case Metric::kRelConsistency:
          v = dist.cdf(c);
          break;
        case Metric::kScaled:
          v = calc.scaled_score(p);
          break;
        case Metric::kPartialCorrect:
          v = calc.partial_correct_score(p);
          break;
        case Metric::kDeltaScaled:
          v = calc.scaled_score(p) - dist.cdf(c);
          break;
        case Metric::kDeltaPartialCorrect:
          v = calc.partial_correct_score(p) - dist.cdf(c);
          break;
      }
      cells.push_back(GridCell{a, c, v});
    }
  }
  return cells;
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

void write_grid_csv(std::ostream& out, const std::vector<GridCell>& cells) {
  out << "a,c,value\n";
  for (const auto& cell : cells) {
    out << cell.a << ',' << cell.c << ',' << format_double(cell.value) << '\n';
  }
}

std::string_view to_string(Chance c) {
  switch (c) {
    case Chance::kBelow:
      return "below chance";
    case Chance::kAt:
      return "at chance";
    case Chance::kAbove:
      return "above chance";
  }
  return "unknown";
}

Chance chance_of(const EvalResult& r) {
  const MassRatio rc = ConsistencyCalculator(r.spec).rel_consistency_ratio(r.point);
  const auto cmp = compare_ratios(rc, MassRatio(BigCount(1), BigCount(2)));
  if (cmp.sign() < 0) return Chance::kBelow;
  if (cmp.sign() > 0) return Chance::kAbove;
  return Chance::kAt;
}

Comparison compare_report(const EvalResult& first, const EvalResult& second) {
  Comparison out;
  out.first = first;
  out.second = second;
  out.difference = rc_difference(first.spec, first.point, second.spec, second.point);
  out.first_chance = chance_of(first);
  out.second_chance = chance_of(second);
  return out;
}

std::string Comparison::verdict() const {
  std::string s = "first is " + std::string(to_string(first_chance)) + ", second is " +
                  std::string(to_string(second_chance)) + "; ";
  if (difference.sign() > 0) {
    s += "first has the higher relative consistency";
  } else if (difference.sign() < 0) {
    s += "second has the higher relative consistency";
  } else {
    s += "relative consistencies are exactly equal";
  }
  return s;
}

std::vector<Preset> contrast_set_presets() {
  const std::string g = "contrast_sets";
  return {
      {g, "UD Parsing", {150, 2, 55.3, 17.3, std::nullopt}, 0.0, true},
      {g, "PERSPECTRUM", {217, 2, 88.0, 78.8, std::nullopt}, 97.6, false},
      {g, "ROPES", {974, 2, 40.1, 17.6, std::nullopt}, 97.8, false},
      {g, "MC-TACO", {646, 2, 26.0, 8.0, std::nullopt}, 95.2, false},
  };
}

std::vector<Preset> training_objective_presets() {
  const std::string g = "training_objectives";
  return {
      {g, "MLE", {844, 2, 65.7, 52.1, std::nullopt}, 100.0, false},
      {g, "+UL", {844, 2, 68.3, 55.6, std::nullopt}, 100.0, false},
      {g, "+CE", {844, 2, 76.6, 64.7, std::nullopt}, 100.0, false},
  };
}

std::vector<ReplicationRow> replicate(const std::vector<Preset>& presets, Rounding rounding) {
  std::vector<ReplicationRow> rows;
  rows.reserve(presets.size());
  for (const auto& preset : presets) {
    ReplicationRow row{preset, rc_for_proportions(preset.input, rounding), 0};
    row.computed_rc_pct = 100.0 * row.computed.result.rel_consistency;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace relcons::report
