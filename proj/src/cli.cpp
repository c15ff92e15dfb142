#include "relcons/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relcons/consistency.hpp"
#include "relcons/error.hpp"
#include "relcons/ingest.hpp"
#include "relcons/oracle.hpp"
#include "relcons/report.hpp"

namespace relcons::cli {

using nlohmann::ordered_json;

namespace {

/// Bad flag combination discovered after CLI11 parsing.
class UsageError : public Error {
 public:
  using Error::Error;
};

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

std::string fixed(double v, int decimals) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(decimals) << round_to(v, decimals);
  return s.str();
}

bool color_enabled() {
  const char* v = std::getenv("RELCONS_COLOR");
  if (v == nullptr) return false;
  const std::string s(v);
  return s == "1" || s == "always";
}

std::string status_word(bool ok) {
  if (!color_enabled()) return ok ? "PASS" : "FAIL";
  return ok ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

// Human and JSON renderings share these roundings so their numbers agree.
ordered_json result_json(const EvalResult& r) {
  ordered_json j;
  j["n"] = r.spec.n;
  j["b"] = r.spec.b;
  j["a"] = r.point.a;
  j["c"] = r.point.c;
  j["accuracy"] = round_to(r.accuracy, 4);
  j["accuracy_pct"] = round_to(100.0 * r.accuracy, 1);
  j["consistency"] = round_to(r.consistency, 4);
  j["consistency_pct"] = round_to(100.0 * r.consistency, 1);
  j["rel_consistency"] = round_to(r.rel_consistency, 4);
  j["rel_consistency_pct"] = round_to(100.0 * r.rel_consistency, 1);
  j["scaled_score"] = round_to(r.scaled_score, 4);
  if (r.partial_correct_score) {
    j["partial_correct_score"] = round_to(*r.partial_correct_score, 4);
  } else {
    j["partial_correct_score"] = nullptr;
  }
  const MassRatio exact = ConsistencyCalculator(r.spec).rel_consistency_ratio(r.point);
  j["rel_consistency_exact"] = {{"numerator", exact.numerator().str()},
                                {"denominator", exact.denominator().str()}};
  return j;
}

void write_result_human(std::ostream& out, const EvalResult& r, const std::string& indent = "") {
  out << indent << "spec             n=" << r.spec.n << " b=" << r.spec.b << '\n'
      << indent << "counts           a=" << r.point.a << " c=" << r.point.c << '\n'
      << indent << "accuracy         " << fixed(r.accuracy, 4) << " (" << fixed(100.0 * r.accuracy, 1) << "%)\n"
      << indent << "consistency      " << fixed(r.consistency, 4) << " (" << fixed(100.0 * r.consistency, 1)
      << "%)\n"
      << indent << "rel_consistency  " << fixed(r.rel_consistency, 4) << " ("
      << fixed(100.0 * r.rel_consistency, 1) << "%)\n"
      << indent << "scaled_score     " << fixed(r.scaled_score, 4) << '\n'
      << indent << "partial_correct  "
      << (r.partial_correct_score ? fixed(*r.partial_correct_score, 4) : std::string("n/a")) << '\n';
}

ingest::BundleSet load_file(const std::string& path, std::istream& in, bool fold_case) {
  ingest::LoadOptions options;
  options.fold_case = fold_case;
  if (path == "-") return ingest::load_predictions(in, options);
  std::ifstream file(path);
  if (!file) throw DataError("cannot open " + path);
  return ingest::load_predictions(file, options);
}

void require_uniform_schema(const ingest::BundleSet& set, const std::string& path) {
  if (set.source == ingest::CorrectnessSource::kMixed) {
    throw DataError(path + ": records mix \"correct\" booleans with gold/prediction pairs; use one schema per file");
  }
}

// ---------------------------------------------------------------- rc

struct RcOptions {
  std::int64_t n = 0;
  std::int64_t b = 2;
  std::optional<std::int64_t> a;
  std::optional<std::int64_t> c;
  std::optional<double> acc;
  std::optional<double> acc_orig;
  std::optional<double> acc_contrast;
  std::optional<double> cons;
  std::string rounding = "half-up";
  bool json = false;
};

int run_rc(const RcOptions& o, std::ostream& out, std::ostream& err) {
  const bool counts = o.a || o.c;
  const bool pcts = o.acc || o.acc_orig || o.acc_contrast || o.cons;
  if (counts == pcts) throw UsageError("give either --a and --c, or percentages (--acc or --acc-orig/--acc-contrast) and --cons");
  if (counts && !(o.a && o.c)) throw UsageError("--a and --c must be given together");
  if (pcts) {
    if (!o.cons) throw UsageError("--cons is required with percentage input");
    if (o.acc.has_value() == (o.acc_orig.has_value() || o.acc_contrast.has_value())) {
      throw UsageError("give --acc, or both --acc-orig and --acc-contrast");
    }
    if (!o.acc && !(o.acc_orig && o.acc_contrast)) throw UsageError("--acc-orig and --acc-contrast must be given together");
  }
  const report::Rounding rounding = report::parse_rounding(o.rounding);

  EvalResult result;
  std::vector<std::string> warnings;
  if (counts) {
    result = evaluate(BundleSpec{o.n, o.b}, ScorePoint{*o.a, *o.c});
  } else {
    report::ProportionInput input;
    input.n = o.n;
    input.b = o.b;
    input.consistency_pct = *o.cons;
    if (o.acc) {
      input.accuracy_pct = *o.acc;
    } else {
      input.accuracy_pair = std::make_pair(*o.acc_orig, *o.acc_contrast);
    }
    auto pr = report::rc_for_proportions(input, rounding);
    result = pr.result;
    warnings = pr.warnings;
  }
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  if (o.json) {
    ordered_json j = result_json(result);
    if (pcts) j["rounding"] = std::string(report::to_string(rounding));
    j["warnings"] = warnings;
    out << j.dump(2) << '\n';
  } else {
    write_result_human(out, result);
  }
  return kOk;
}

// ---------------------------------------------------------------- score

struct ScoreOptions {
  std::string input;
  bool fold_case = false;
  bool json = false;
};

int run_score(const ScoreOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  const ingest::BundleSet set = load_file(o.input, in, o.fold_case);
  require_uniform_schema(set, o.input);
  const auto strata = ingest::score_bundles(set);

  ordered_json j = ordered_json::array();
  bool first = true;
  for (const auto& s : strata) {
    if (s.singleton) {
      err << "warning: " << s.n << " single-instance bundle(s) counted for accuracy only; "
          << "consistency is not scored for them\n";
      const double acc = static_cast<double>(s.a) / static_cast<double>(s.n);
      if (o.json) {
        j.push_back({{"b", 1},
                     {"n", s.n},
                     {"a", s.a},
                     {"accuracy", round_to(acc, 4)},
                     {"accuracy_pct", round_to(100.0 * acc, 1)},
                     {"singleton", true}});
      } else {
        if (!first) out << '\n';
        out << "stratum b=1 (singletons, accuracy only)\n"
            << "  counts           n=" << s.n << " a=" << s.a << '\n'
            << "  accuracy         " << fixed(acc, 4) << " (" << fixed(100.0 * acc, 1) << "%)\n";
      }
    } else {
      const EvalResult r = evaluate(BundleSpec{s.n, s.b}, ScorePoint{s.a, s.c});
      if (o.json) {
        ordered_json row = result_json(r);
        row["singleton"] = false;
        j.push_back(row);
      } else {
        if (!first) out << '\n';
        out << "stratum b=" << s.b << '\n';
        write_result_human(out, r, "  ");
      }
    }
    first = false;
  }
  if (o.json) out << j.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- grid

struct GridOptions {
  std::int64_t n = 0;
  std::int64_t b = 2;
  std::string metric = "rel_consistency";
  std::string output;
};

int run_grid(const GridOptions& o, std::ostream& out) {
  const report::Metric metric = report::parse_metric(o.metric);
  const auto cells = report::emit_grid(BundleSpec{o.n, o.b}, metric);
  if (o.output.empty() || o.output == "-") {
    report::write_grid_csv(out, cells);
    return kOk;
  }
  std::ostringstream buf;
  report::write_grid_csv(buf, cells);
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw DataError("cannot write " + o.output);
  file << buf.str();
  return kOk;
}

// ---------------------------------------------------------------- compare

struct CompareOptions {
  std::optional<std::int64_t> n;
  std::int64_t b = 2;
  std::optional<std::int64_t> n2;
  std::optional<std::int64_t> b2;
  std::optional<std::int64_t> a1, c1, a2, c2;
  std::vector<std::string> files;
  std::optional<std::int64_t> stratum;
  bool fold_case = false;
  bool json = false;
};

EvalResult result_from_file(const std::string& path, std::istream& in, const CompareOptions& o) {
  const ingest::BundleSet set = load_file(path, in, o.fold_case);
  require_uniform_schema(set, path);
  std::optional<ingest::StratumCounts> chosen;
  for (const auto& s : ingest::score_bundles(set)) {
    if (s.singleton) continue;
    if (o.stratum && s.b != *o.stratum) continue;
    if (chosen) throw UsageError(path + ": several bundle sizes present; pick one with --stratum");
    chosen = s;
  }
  if (!chosen) throw DataError(path + ": no stratum with bundle size >= 2" +
                               (o.stratum ? " matching --stratum" : std::string()));
  return evaluate(BundleSpec{chosen->n, chosen->b}, ScorePoint{chosen->a, chosen->c});
}

int run_compare(const CompareOptions& o, std::istream& in, std::ostream& out) {
  const bool by_counts = o.a1 || o.c1 || o.a2 || o.c2 || o.n;
  const bool by_files = !o.files.empty();
  if (by_counts == by_files) throw UsageError("give either --n with --a1 --c1 --a2 --c2, or --files FIRST SECOND");

  EvalResult first;
  EvalResult second;
  if (by_files) {
    if (o.files.size() != 2) throw UsageError("--files takes exactly two paths");
    if (o.files[0] == "-" && o.files[1] == "-") throw UsageError("only one of the files may be standard input");
    first = result_from_file(o.files[0], in, o);
    second = result_from_file(o.files[1], in, o);
  } else {
    if (!(o.n && o.a1 && o.c1 && o.a2 && o.c2)) throw UsageError("--n, --a1, --c1, --a2 and --c2 are all required");
    const BundleSpec spec1{*o.n, o.b};
    const BundleSpec spec2{o.n2.value_or(*o.n), o.b2.value_or(o.b)};
    first = evaluate(spec1, ScorePoint{*o.a1, *o.c1});
    second = evaluate(spec2, ScorePoint{*o.a2, *o.c2});
  }

  const report::Comparison cmp = report::compare_report(first, second);
  if (o.json) {
    ordered_json j;
    j["first"] = result_json(first);
    j["first"]["chance"] = std::string(report::to_string(cmp.first_chance));
    j["second"] = result_json(second);
    j["second"]["chance"] = std::string(report::to_string(cmp.second_chance));
    j["sign"] = cmp.difference.sign();
    j["difference"] = round_to(cmp.difference.difference, 4);
    j["cross_difference"] = cmp.difference.exact.cross_difference.str();
    j["verdict"] = cmp.verdict();
    out << j.dump(2) << '\n';
  } else {
    out << "first (" << report::to_string(cmp.first_chance) << ")\n";
    write_result_human(out, first, "  ");
    out << "second (" << report::to_string(cmp.second_chance) << ")\n";
    write_result_human(out, second, "  ");
    out << "sign             " << cmp.difference.sign() << '\n'
        << "difference       " << fixed(cmp.difference.difference, 4) << '\n'
        << "verdict          " << cmp.verdict() << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
  std::int64_t max_instances = 16;
  std::vector<std::int64_t> bundle_sizes{2, 3};
  std::uint64_t samples = 100000;
  std::uint64_t seed = 20231206;
  std::int64_t sample_n = 100;
  std::int64_t sample_b = 2;
  std::int64_t sample_a = 130;
  double tolerance = 0.01;
  bool skip_sampling = false;
};

int run_verify(const VerifyOptions& o, std::ostream& out) {
  if (o.max_instances > oracle::kMaxEnumeratedInstances) {
    throw UsageError("--max-instances is capped at " + std::to_string(oracle::kMaxEnumeratedInstances));
  }
  bool all_ok = true;
  for (std::int64_t b : o.bundle_sizes) {
    if (b < 2) throw UsageError("--bundle-sizes entries must be at least 2");
    for (std::int64_t n = 1; n * b <= o.max_instances; ++n) {
      const BundleSpec spec{n, b};
      const auto census = oracle::enumerate_counts(spec);
      const ConsistencyCalculator calc(spec);
      bool ok = true;
      for (std::int64_t a = 0; a <= spec.instances() && ok; ++a) {
        for (std::int64_t c = 0; c <= n; ++c) {
          if (calc.mass(c, a) != BigCount(census.at(a, c))) {
            ok = false;
            break;
          }
        }
      }
      all_ok = all_ok && ok;
      out << status_word(ok) << " enumerate n=" << n << " b=" << b << " patterns=" << census.total() << '\n';
    }
  }
  if (!o.skip_sampling) {
    const BundleSpec spec{o.sample_n, o.sample_b};
    const auto empirical = oracle::sample_consistency(spec, o.sample_a, o.samples, o.seed);
    const auto exact = distribution(spec, o.sample_a);
    const double dev = oracle::max_cdf_deviation(empirical, exact);
    const bool ok = dev < o.tolerance;
    all_ok = all_ok && ok;
    out << status_word(ok) << " sample n=" << spec.n << " b=" << spec.b << " a=" << o.sample_a
        << " samples=" << o.samples << " seed=" << o.seed << " max_cdf_deviation=" << fixed(dev, 6)
        << " tolerance=" << report::format_double(o.tolerance) << '\n';
  }
  return all_ok ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- replicate

struct ReplicateOptions {
  std::string rounding = "half-up";
  std::string group = "all";
  bool json = false;
};

int run_replicate(const ReplicateOptions& o, std::ostream& out, std::ostream& err) {
  const report::Rounding rounding = report::parse_rounding(o.rounding);
  std::vector<report::Preset> presets;
  if (o.group == "all" || o.group == "contrast_sets") {
    auto p = report::contrast_set_presets();
    presets.insert(presets.end(), p.begin(), p.end());
  }
  if (o.group == "all" || o.group == "training_objectives") {
    auto p = report::training_objective_presets();
    presets.insert(presets.end(), p.begin(), p.end());
  }
  if (presets.empty()) throw UsageError("unknown --group \"" + o.group + "\"");

  const auto rows = report::replicate(presets, rounding);
  for (const auto& row : rows) {
    for (const auto& w : row.computed.warnings) err << "warning: " << row.preset.name << ": " << w << '\n';
  }
  if (o.json) {
    ordered_json j = ordered_json::array();
    for (const auto& row : rows) {
      const auto& r = row.computed.result;
      j.push_back({{"group", row.preset.group},
                   {"name", row.preset.name},
                   {"n", r.spec.n},
                   {"b", r.spec.b},
                   {"accuracy_pct", row.preset.input.effective_accuracy_pct()},
                   {"consistency_pct", row.preset.input.consistency_pct},
                   {"a", r.point.a},
                   {"c", r.point.c},
                   {"rel_consistency", round_to(r.rel_consistency, 4)},
                   {"rel_consistency_pct", round_to(row.computed_rc_pct, 1)},
                   {"reported_pct", row.preset.reported_rc_pct},
                   {"reported_approximate", row.preset.approximate},
                   {"rounding", std::string(report::to_string(rounding))}});
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-12s %5s %6s %6s %5s %5s %8s %8s %9s\n", "group", "name", "n", "acc",
                "cons", "a", "c", "rc", "rc_pct", "reported");
  out << line;
  for (const auto& row : rows) {
    const auto& r = row.computed.result;
    const std::string reported = (row.preset.approximate ? "~" : "") + fixed(row.preset.reported_rc_pct, 1);
    std::snprintf(line, sizeof line, "%-20s %-12s %5lld %6s %6s %5lld %5lld %8s %8s %9s\n",
                  row.preset.group.c_str(), row.preset.name.c_str(), static_cast<long long>(r.spec.n),
                  fixed(row.preset.input.effective_accuracy_pct(), 1).c_str(),
                  fixed(row.preset.input.consistency_pct, 1).c_str(), static_cast<long long>(r.point.a),
                  static_cast<long long>(r.point.c), fixed(r.rel_consistency, 4).c_str(),
                  fixed(row.computed_rc_pct, 1).c_str(), reported.c_str());
    out << line;
  }
  out << "rounding: " << report::to_string(rounding) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contrast-set consistency and relative consistency with exact combinatorics", "relcons"};
  app.require_subcommand(1);

  RcOptions rc_opt;
  auto* rc = app.add_subcommand("rc", "Relative consistency for counts or reported percentages");
  rc->add_option("--n", rc_opt.n, "Number of bundles")->required();
  rc->add_option("--b", rc_opt.b, "Bundle size")->capture_default_str();
  rc->add_option("--a", rc_opt.a, "Correct instance count");
  rc->add_option("--c", rc_opt.c, "Fully correct bundle count");
  rc->add_option("--acc", rc_opt.acc, "Accuracy percentage");
  rc->add_option("--acc-orig", rc_opt.acc_orig, "Accuracy on original instances (averaged with --acc-contrast)");
  rc->add_option("--acc-contrast", rc_opt.acc_contrast, "Accuracy on contrast instances");
  rc->add_option("--cons", rc_opt.cons, "Consistency percentage");
  rc->add_option("--rounding", rc_opt.rounding, "Percentage to count rounding: half-up | truncate")
      ->capture_default_str();
  rc->add_flag("--json", rc_opt.json, "Machine-readable output");

  ScoreOptions score_opt;
  auto* score = app.add_subcommand("score", "Score a JSONL prediction file per bundle-size stratum");
  score->add_option("input", score_opt.input, "JSONL path, or - for standard input")->required();
  score->add_flag("--fold-case", score_opt.fold_case, "Compare gold and prediction case-insensitively");
  score->add_flag("--json", score_opt.json, "Machine-readable output");

  GridOptions grid_opt;
  auto* grid = app.add_subcommand("grid", "Emit a long-form CSV grid over every achievable (a, c)");
  grid->add_option("--n", grid_opt.n, "Number of bundles")->required();
  grid->add_option("--b", grid_opt.b, "Bundle size")->capture_default_str();
  std::string metric_help = "One of:";
  for (auto name : report::metric_names()) metric_help += " " + std::string(name);
  grid->add_option("--metric", grid_opt.metric, metric_help)->capture_default_str();
  grid->add_option("--output,-o", grid_opt.output, "Output path (default standard output)");

  CompareOptions cmp_opt;
  auto* compare = app.add_subcommand("compare", "Compare the relative consistency of two models exactly");
  compare->add_option("--n", cmp_opt.n, "Number of bundles");
  compare->add_option("--b", cmp_opt.b, "Bundle size")->capture_default_str();
  compare->add_option("--n2", cmp_opt.n2, "Bundle count for the second model (default --n)");
  compare->add_option("--b2", cmp_opt.b2, "Bundle size for the second model (default --b)");
  compare->add_option("--a1", cmp_opt.a1, "First model correct instances");
  compare->add_option("--c1", cmp_opt.c1, "First model consistent bundles");
  compare->add_option("--a2", cmp_opt.a2, "Second model correct instances");
  compare->add_option("--c2", cmp_opt.c2, "Second model consistent bundles");
  compare->add_option("--files", cmp_opt.files, "Two JSONL prediction files")->expected(2);
  compare->add_option("--stratum", cmp_opt.stratum, "Bundle size to compare when files hold several");
  compare->add_flag("--fold-case", cmp_opt.fold_case, "Compare gold and prediction case-insensitively");
  compare->add_flag("--json", cmp_opt.json, "Machine-readable output");

  VerifyOptions ver_opt;
  auto* verify = app.add_subcommand("verify", "Check the closed forms against enumeration and sampling");
  verify->add_option("--max-instances", ver_opt.max_instances, "Enumerate every spec with n*b up to this")
      ->capture_default_str();
  verify->add_option("--bundle-sizes", ver_opt.bundle_sizes, "Bundle sizes to enumerate")
      ->delimiter(',')
      ->capture_default_str();
  verify->add_option("--samples", ver_opt.samples, "Monte-Carlo draws")->capture_default_str();
  verify->add_option("--seed", ver_opt.seed, "Monte-Carlo seed")->capture_default_str();
  verify->add_option("--sample-n", ver_opt.sample_n, "Bundles in the sampled spec")->capture_default_str();
  verify->add_option("--sample-b", ver_opt.sample_b, "Bundle size in the sampled spec")->capture_default_str();
  verify->add_option("--sample-a", ver_opt.sample_a, "Accuracy count for the sampled check")->capture_default_str();
  verify->add_option("--tolerance", ver_opt.tolerance, "Allowed CDF deviation")->capture_default_str();
  verify->add_flag("--no-sampling", ver_opt.skip_sampling, "Skip the Monte-Carlo check");

  ReplicateOptions rep_opt;
  auto* replicate = app.add_subcommand("replicate", "Recompute relative consistency for published result presets");
  replicate->add_option("--rounding", rep_opt.rounding, "half-up | truncate")->capture_default_str();
  replicate->add_option("--group", rep_opt.group, "all | contrast_sets | training_objectives")
      ->capture_default_str();
  replicate->add_flag("--json", rep_opt.json, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::ostringstream buf;
  int code = kOk;
  try {
    if (rc->parsed()) {
      code = run_rc(rc_opt, buf, err);
    } else if (score->parsed()) {
      code = run_score(score_opt, in, buf, err);
    } else if (grid->parsed()) {
      code = run_grid(grid_opt, buf);
    } else if (compare->parsed()) {
      code = run_compare(cmp_opt, in, buf);
    } else if (verify->parsed()) {
      code = run_verify(ver_opt, buf);
    } else if (replicate->parsed()) {
      code = run_replicate(rep_opt, buf, err);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  out << buf.str();
  out.flush();
  return code;
}

}  // namespace relcons::cli
