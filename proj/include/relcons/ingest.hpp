#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace relcons::ingest {

struct LoadOptions {
  /// ASCII case folding of gold and prediction. Whitespace is always trimmed.
  bool fold_case = false;
};

/// Which correctness field the records of a file used.
enum class CorrectnessSource { kNone, kBoolean, kGoldPrediction, kMixed };

struct Bundle {
  std::string id;
  std::vector<std::string> instance_ids;
  std::vector<bool> correct;

  std::size_t size() const noexcept { return correct.size(); }
  std::int64_t correct_count() const;
  bool fully_correct() const;
};

/// Bundles grouped by size. Within a stratum, bundles keep the order in
/// which their id first appeared.
struct BundleSet {
  std::map<std::int64_t, std::vector<Bundle>> strata;
  CorrectnessSource source = CorrectnessSource::kNone;
  std::size_t records = 0;

  bool empty() const noexcept { return strata.empty(); }
};

struct StratumCounts {
  std::int64_t b = 0;
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t c = 0;
  /// b = 1: counted for accuracy only, no consistency or RC.
  bool singleton = false;

  friend bool operator==(const StratumCounts&, const StratumCounts&) = default;
};

/// Trims ASCII whitespace on both ends, then optionally lowercases ASCII.
std::string normalize_answer(std::string_view s, const LoadOptions& options);

/// Reads one JSON object per line:
///   {"bundle_id": str, "instance_id": str, "correct": bool}
///   {"bundle_id": str, "instance_id": str, "gold": str, "prediction": str}
/// Blank lines are skipped and unknown fields ignored. Throws ParseError
/// (with line number) for malformed lines, DataError for a missing or doubled
/// correctness source, a duplicate (bundle_id, instance_id), or no records.
BundleSet load_predictions(std::istream& in, const LoadOptions& options = {});

/// Per-stratum counts, ordered by bundle size. Throws DataError on an empty set.
std::vector<StratumCounts> score_bundles(const BundleSet& set);

}  // namespace relcons::ingest
