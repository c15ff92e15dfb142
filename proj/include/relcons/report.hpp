#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relcons/consistency.hpp"

namespace relcons::report {

/// Reported scores as percentages. When the source reports original and
/// contrast accuracy separately, pass them as `accuracy_pair`; their mean
/// replaces `accuracy_pct`.
struct ProportionInput {
  std::int64_t n = 0;
  std::int64_t b = 2;
  double accuracy_pct = 0;
  double consistency_pct = 0;
  std::optional<std::pair<double, double>> accuracy_pair;

  /// Throws RangeError for percentages outside [0, 100].
  void validate() const;
  double effective_accuracy_pct() const;
};

enum class Rounding { kHalfUp, kTruncate };

std::string_view to_string(Rounding r);
/// Accepts "half-up" and "truncate".
Rounding parse_rounding(std::string_view s);

/// round(total * pct / 100) in exact decimal arithmetic; pct is taken to 6
/// decimal places.
std::int64_t percent_to_count(std::int64_t total, double pct, Rounding rounding);

struct ProportionResult {
  EvalResult result;
  /// True when the rounded consistency fell outside the achievable range and
  /// was moved to the nearest end of it.
  bool clamped = false;
  std::vector<std::string> warnings;
};

ProportionResult rc_for_proportions(const ProportionInput& input, Rounding rounding = Rounding::kHalfUp);

enum class Metric {
  kProbability,
  kLog10Probability,
  kRelConsistency,
  kScaled,
  kPartialCorrect,
  kDeltaScaled,          // scaled - rel_consistency
  kDeltaPartialCorrect,  // partial_correct - rel_consistency
};

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view s);
std::vector<std::string_view> metric_names();

struct GridCell {
  std::int64_t a = 0;
  std::int64_t c = 0;
  double value = 0;
};

/// One cell per (a, c) with a in [0, n b] and c achievable at a, ordered by
/// (a, c). Throws UnsupportedError for the partial-correct metrics with b != 2.
std::vector<GridCell> emit_grid(const BundleSpec& spec, Metric metric);

/// Long-form CSV: header "a,c,value", LF line endings, shortest round-trip decimals.
void write_grid_csv(std::ostream& out, const std::vector<GridCell>& cells);

/// Shortest decimal that reads back as the same double.
std::string format_double(double v);

enum class Chance { kBelow, kAt, kAbove };
std::string_view to_string(Chance c);

struct Comparison {
  EvalResult first;
  EvalResult second;
  RcDifference difference;
  Chance first_chance = Chance::kAt;
  Chance second_chance = Chance::kAt;

  /// Plain-language summary, one sentence.
  std::string verdict() const;
};

/// Relative consistency against 0.5, decided exactly.
Chance chance_of(const EvalResult& r);

Comparison compare_report(const EvalResult& first, const EvalResult& second);

/// A published (accuracy, consistency) pair with the relative consistency
/// reported alongside it.
struct Preset {
  std::string group;
  std::string name;
  ProportionInput input;
  double reported_rc_pct = 0;
  /// The reported value was only given as approximately this.
  bool approximate = false;
};

/// Contrast-set results for four tasks (bundle size 2).
std::vector<Preset> contrast_set_presets();
/// ROPES training-objective results on 844 bundles.
std::vector<Preset> training_objective_presets();

struct ReplicationRow {
  Preset preset;
  ProportionResult computed;
  double computed_rc_pct = 0;
};

std::vector<ReplicationRow> replicate(const std::vector<Preset>& presets, Rounding rounding);

}  // namespace relcons::report
