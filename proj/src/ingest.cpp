#include "relcons/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <utility>

#include <json.hpp>

#include "relcons/error.hpp"

namespace relcons::ingest {

using nlohmann::json;

std::int64_t Bundle::correct_count() const {
  return std::count(correct.begin(), correct.end(), true);
}

bool Bundle::fully_correct() const {
  return std::all_of(correct.begin(), correct.end(), [](bool v) { return v; });
}

std::string normalize_answer(std::string_view s, const LoadOptions& options) {
  auto space = [](unsigned char ch) { return std::isspace(ch) != 0; };
  while (!s.empty() && space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s);
  if (options.fold_case) {
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  }
  return out;
}

namespace {

std::string required_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing required field \"") + key + "\"");
  if (!it->is_string()) throw ParseError(line, std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

BundleSet load_predictions(std::istream& in, const LoadOptions& options) {
  std::vector<Bundle> order;
  std::unordered_map<std::string, std::size_t> by_id;
  std::set<std::pair<std::string, std::string>> seen;

  bool saw_boolean = false;
  bool saw_strings = false;
  std::size_t records = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch) != 0; })) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "record must be a JSON object");

    std::string bundle_id = required_string(obj, "bundle_id", line_no);
    std::string instance_id = required_string(obj, "instance_id", line_no);

    const bool has_correct = obj.contains("correct");
    const bool has_gold = obj.contains("gold");
    const bool has_pred = obj.contains("prediction");
    bool correct = false;
    if (has_correct) {
      if (has_gold || has_pred) {
        throw DataError("line " + std::to_string(line_no) +
                        ": record has both \"correct\" and gold/prediction; give exactly one");
      }
      if (!obj["correct"].is_boolean()) throw ParseError(line_no, "field \"correct\" must be a boolean");
      correct = obj["correct"].get<bool>();
      saw_boolean = true;
    } else if (has_gold && has_pred) {
      const std::string gold = required_string(obj, "gold", line_no);
      const std::string pred = required_string(obj, "prediction", line_no);
      correct = normalize_answer(gold, options) == normalize_answer(pred, options);
      saw_strings = true;
    } else {
      throw DataError("line " + std::to_string(line_no) +
                      ": record needs either \"correct\" or both \"gold\" and \"prediction\"");
    }

    if (!seen.emplace(bundle_id, instance_id).second) {
      throw DataError("line " + std::to_string(line_no) + ": duplicate instance \"" + instance_id +
                      "\" in bundle \"" + bundle_id + "\"");
    }
    auto [it, inserted] = by_id.try_emplace(bundle_id, order.size());
    if (inserted) order.push_back(Bundle{bundle_id, {}, {}});
    Bundle& bundle = order[it->second];
    bundle.instance_ids.push_back(std::move(instance_id));
    bundle.correct.push_back(correct);
    ++records;
  }

  if (records == 0) throw DataError("no records");

  BundleSet set;
  set.records = records;
  set.source = saw_boolean && saw_strings ? CorrectnessSource::kMixed
               : saw_boolean              ? CorrectnessSource::kBoolean
                                          : CorrectnessSource::kGoldPrediction;
  for (auto& bundle : order) {
    const auto size = static_cast<std::int64_t>(bundle.size());
    set.strata[size].push_back(std::move(bundle));
  }
  return set;
}

std::vector<StratumCounts> score_bundles(const BundleSet& set) {
  if (set.empty()) throw DataError("no bundles to score");
  std::vector<StratumCounts> out;
  for (const auto& [b, bundles] : set.strata) {
    StratumCounts s;
    s.b = b;
    s.n = static_cast<std::int64_t>(bundles.size());
    s.singleton = b == 1;
    for (const auto& bundle : bundles) {
      s.a += bundle.correct_count();
      if (bundle.fully_correct()) ++s.c;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace relcons::ingest
