#pragma once

// Binary classification metrics (per-class and macro F1, false positives),
// multi-run aggregation and the approach comparison tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/classifier.hpp"
#include "pejor/corpus.hpp"
#include "pejor/error.hpp"
#include "pejor/io.hpp"

namespace pejor {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

using GoldLabels = std::vector<std::pair<std::string, bool>>;

// Gold labels of one task for the tweets of a split; ids outside `keep` are
// skipped when it is given.
inline GoldLabels gold_labels(const Corpus& corpus, Task task, Split split,
                              const std::set<std::string, std::less<>>* keep = nullptr) {
  GoldLabels out;
  for (const auto& t : corpus.tweets) {
    if (t.split != split) continue;
    if (keep && !keep->contains(t.id)) continue;
    if (auto y = gold_label(t, task)) out.emplace_back(t.id, *y);
  }
  return out;
}

// Predictions must cover every gold id exactly once; extra predictions for
// ids outside the gold set are ignored.
inline ConfusionCounts confusion(const GoldLabels& gold, const std::vector<PredictionRecord>& predictions) {
  std::map<std::string, bool, std::less<>> gold_map;
  for (const auto& [id, y] : gold) gold_map[id] = y;
  std::map<std::string, bool, std::less<>> pred;
  for (const auto& p : predictions) {
    if (!gold_map.contains(p.id)) continue;
    if (!pred.emplace(p.id, p.label).second) throw CoverageError("duplicate prediction for " + p.id);
  }
  ConfusionCounts c;
  std::vector<std::string> missing;
  for (const auto& [id, y] : gold) {
    auto it = pred.find(id);
    if (it == pred.end()) {
      missing.push_back(id);
      continue;
    }
    bool p = it->second;
    if (y && p) ++c.tp;
    else if (!y && p) ++c.fp;
    else if (y && !p) ++c.fn;
    else ++c.tn;
  }
  if (!missing.empty()) {
    std::string msg = "missing predictions for " + std::to_string(missing.size()) + " item(s):";
    for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) msg += " " + missing[i];
    throw CoverageError(msg);
  }
  return c;
}

struct F1Scores {
  double positive = 0.0;
  double negative = 0.0;
  double macro = 0.0;
  // Set when a class has no gold and no predicted instances; its F1 is 0.
  bool positive_empty = false;
  bool negative_empty = false;
};

namespace detail {

inline double f1(std::size_t tp, std::size_t fp, std::size_t fn, bool& empty) {
  std::size_t den = 2 * tp + fp + fn;
  empty = den == 0;
  return empty ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

}  // namespace detail

inline F1Scores f1_per_class(const ConfusionCounts& c) {
  F1Scores s;
  s.positive = detail::f1(c.tp, c.fp, c.fn, s.positive_empty);
  s.negative = detail::f1(c.tn, c.fn, c.fp, s.negative_empty);
  s.macro = (s.positive + s.negative) / 2.0;
  return s;
}

inline double macro_f1(const ConfusionCounts& c) { return f1_per_class(c).macro; }

// --- reports ----------------------------------------------------------------

enum class Approach { baseline, concat, subst };
enum class Source { na, gold, predicted };
enum class Subset { whole, epithets };

inline std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::baseline: return "baseline";
    case Approach::concat: return "concat";
    case Approach::subst: return "subst";
  }
  return "baseline";
}
inline std::string_view to_string(Source s) {
  switch (s) {
    case Source::na: return "n/a";
    case Source::gold: return "gold";
    case Source::predicted: return "predicted";
  }
  return "n/a";
}
inline std::string_view to_string(Subset s) { return s == Subset::whole ? "whole" : "epithets"; }

inline Approach parse_approach(std::string_view s) {
  if (s == "baseline") return Approach::baseline;
  if (s == "concat") return Approach::concat;
  if (s == "subst") return Approach::subst;
  throw ConfigError("unknown approach \"" + std::string(s) + "\"");
}
inline Source parse_source(std::string_view s) {
  if (s == "n/a" || s == "na") return Source::na;
  if (s == "gold") return Source::gold;
  if (s == "predicted") return Source::predicted;
  throw ConfigError("unknown label source \"" + std::string(s) + "\"");
}
inline Subset parse_subset(std::string_view s) {
  if (s == "whole") return Subset::whole;
  if (s == "epithets") return Subset::epithets;
  throw ConfigError("unknown subset \"" + std::string(s) + "\"");
}

inline Source to_source(LabelSource s) { return s == LabelSource::gold ? Source::gold : Source::predicted; }
inline Approach to_approach(Strategy s) {
  if (s == Strategy::concat) return Approach::concat;
  if (s == Strategy::subst) return Approach::subst;
  return Approach::baseline;
}

struct RunMetrics {
  int run_id = 0;
  ConfusionCounts counts;
  F1Scores f1;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation over runs
};

struct EvalReport {
  Task task = Task::mis;
  Approach approach = Approach::baseline;
  Source source = Source::na;
  Subset subset = Subset::whole;
  std::vector<RunMetrics> runs;
  MeanStd positive, negative, macro, fp;
  bool empty_class_flag = false;
};

inline RunMetrics evaluate_run(const GoldLabels& gold, const std::vector<PredictionRecord>& predictions, int run_id) {
  auto counts = confusion(gold, predictions);
  return {run_id, counts, f1_per_class(counts)};
}

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

inline EvalReport aggregate_runs(Task task, Approach approach, Source source, Subset subset,
                                 std::vector<RunMetrics> runs) {
  if (runs.empty()) throw PreconditionError("aggregate_runs needs at least one run");
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.run_id < b.run_id; });
  EvalReport r{task, approach, source, subset, std::move(runs), {}, {}, {}, {}, false};
  std::vector<double> pos, neg, mac, fp;
  for (const auto& m : r.runs) {
    pos.push_back(m.f1.positive);
    neg.push_back(m.f1.negative);
    mac.push_back(m.f1.macro);
    fp.push_back(static_cast<double>(m.counts.fp));
    r.empty_class_flag = r.empty_class_flag || m.f1.positive_empty || m.f1.negative_empty;
  }
  r.positive = mean_std(pos);
  r.negative = mean_std(neg);
  r.macro = mean_std(mac);
  r.fp = mean_std(fp);
  return r;
}

// Evaluates every run present in `predictions` for one task.
inline EvalReport evaluate(const GoldLabels& gold, const std::vector<PredictionRecord>& predictions, Task task,
                           Approach approach, Source source, Subset subset) {
  std::vector<RunMetrics> runs;
  std::map<int, std::vector<PredictionRecord>> by_run;
  for (const auto& p : predictions)
    if (p.task == task) by_run[p.run_id].push_back(p);
  if (by_run.empty()) throw CoverageError("no " + std::string(to_string(task)) + " predictions to evaluate");
  for (const auto& [run, preds] : by_run) runs.push_back(evaluate_run(gold, preds, run));
  return aggregate_runs(task, approach, source, subset, std::move(runs));
}

// Per-run CSV; the interchange format between `eval` and `compare`.
inline constexpr std::string_view kRunCsvHeader = "task,approach,source,subset,run_id,tp,fp,fn,tn";

inline std::string reports_to_csv(const std::vector<EvalReport>& reports) {
  std::string out(kRunCsvHeader);
  out += '\n';
  for (const auto& r : reports)
    for (const auto& m : r.runs)
      out += std::string(to_string(r.task)) + "," + std::string(to_string(r.approach)) + "," +
             std::string(to_string(r.source)) + "," + std::string(to_string(r.subset)) + "," +
             std::to_string(m.run_id) + "," + std::to_string(m.counts.tp) + "," + std::to_string(m.counts.fp) + "," +
             std::to_string(m.counts.fn) + "," + std::to_string(m.counts.tn) + "\n";
  return out;
}

inline std::vector<EvalReport> reports_from_csv(std::string_view content, const std::string& origin = "<reports>") {
  struct Key {
    Task task;
    Approach approach;
    Source source;
    Subset subset;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, std::vector<RunMetrics>> grouped;
  bool header = false;
  io::for_each_line(content, [&](std::string_view line, std::size_t lineno) {
    auto where = origin + ":" + std::to_string(lineno);
    if (!header) {
      if (io::trim(line) != kRunCsvHeader) throw ParseError(where + ": unexpected report header");
      header = true;
      return;
    }
    auto c = io::split(line, ',');
    if (c.size() != 9) throw ParseError(where + ": expected 9 columns");
    try {
      Key k{parse_task(c[0]), parse_approach(c[1]), parse_source(c[2]), parse_subset(c[3])};
      ConfusionCounts cc{std::stoul(c[5]), std::stoul(c[6]), std::stoul(c[7]), std::stoul(c[8])};
      grouped[k].push_back({std::stoi(c[4]), cc, f1_per_class(cc)});
    } catch (const ConfigError& e) {
      throw ParseError(where + ": " + e.what());
    } catch (const std::logic_error&) {
      throw ParseError(where + ": malformed number");
    }
  });
  if (!header) throw ParseError(origin + ": empty report file");
  std::vector<EvalReport> out;
  for (auto& [k, runs] : grouped) out.push_back(aggregate_runs(k.task, k.approach, k.source, k.subset, runs));
  return out;
}

// --- comparison tables --------------------------------------------------------

struct ComparisonRow {
  Approach approach;
  Source source;
  MeanStd macro, positive, negative, fp;
  std::size_t runs = 0;
};

struct ComparisonTable {
  Task task = Task::mis;
  Subset subset = Subset::whole;
  std::vector<ComparisonRow> rows;
};

inline int row_rank(Approach a, Source s) {
  int base = a == Approach::baseline ? 0 : a == Approach::concat ? 1 : 3;
  return base * 3 + (s == Source::predicted ? 1 : 0);
}

inline ComparisonTable compare_pipelines(const std::vector<EvalReport>& reports) {
  if (reports.empty()) throw PreconditionError("nothing to compare");
  ComparisonTable t{reports.front().task, reports.front().subset, {}};
  for (const auto& r : reports) {
    if (r.subset != t.subset) throw ValidationError("cannot compare reports over different subsets");
    if (r.task != t.task) throw ValidationError("cannot compare reports of different tasks");
    t.rows.push_back({r.approach, r.source, r.macro, r.positive, r.negative, r.fp, r.runs.size()});
  }
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
    return row_rank(a.approach, a.source) < row_rank(b.approach, b.source);
  });
  return t;
}

inline std::string row_label(const ComparisonRow& r) {
  std::string name = r.approach == Approach::baseline ? "baseline"
                     : r.approach == Approach::concat ? "concatenation"
                                                      : "substitution";
  if (r.source == Source::gold) name += " w/ gold";
  if (r.source == Source::predicted) name += " w/ predictions";
  return name;
}

inline std::string render_text(const ComparisonTable& t) {
  auto cell = [](const MeanStd& m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f±%.3f", m.mean, m.std);
    return std::string(buf);
  };
  char buf[256];
  std::string out = "task=" + std::string(to_string(t.task)) + " subset=" + std::string(to_string(t.subset)) + "\n";
  std::snprintf(buf, sizeof buf, "%-30s %-13s %-13s %-13s %9s\n", "Approach", "Macro",
                t.task == Task::mis ? "Mis." : "Pej.", "Not", "FP");
  out += buf;
  for (const auto& r : t.rows) {
    std::snprintf(buf, sizeof buf, "%-30s %-13s %-13s %-13s %9.2f\n", row_label(r).c_str(), cell(r.macro).c_str(),
                  cell(r.positive).c_str(), cell(r.negative).c_str(), r.fp.mean);
    out += buf;
  }
  return out;
}

inline std::string render_csv(const ComparisonTable& t) {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::string out =
      "task,subset,approach,source,runs,macro_mean,macro_std,positive_mean,positive_std,negative_mean,negative_std,"
      "fp_mean,fp_std\n";
  for (const auto& r : t.rows)
    out += std::string(to_string(t.task)) + "," + std::string(to_string(t.subset)) + "," +
           std::string(to_string(r.approach)) + "," + std::string(to_string(r.source)) + "," +
           std::to_string(r.runs) + "," + num(r.macro.mean) + "," + num(r.macro.std) + "," + num(r.positive.mean) +
           "," + num(r.positive.std) + "," + num(r.negative.mean) + "," + num(r.negative.std) + "," +
           num(r.fp.mean) + "," + num(r.fp.std) + "\n";
  return out;
}

}  // namespace pejor
