#pragma once

// Inter-annotator agreement: Krippendorff's alpha with the nominal metric,
// computed from the coincidence matrix over pairable values.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/error.hpp"
#include "pejor/io.hpp"

namespace pejor {

class AnnotationSet {
 public:
  std::size_t annotator_index(std::string_view id) { return intern(annotators_, id); }
  std::size_t item_index(std::string_view id) { return intern(items_, id); }

  void declare_annotator(std::string_view id) { annotator_index(id); }
  void declare_item(std::string_view id) { item_index(id); }

  // Throws ValidationError when the same annotator labels an item twice with
  // different values.
  void add(std::string_view annotator, std::string_view item, int label) {
    auto a = annotator_index(annotator);
    auto i = item_index(item);
    auto [it, inserted] = labels_.emplace(std::pair{a, i}, label);
    if (!inserted && it->second != label)
      throw ValidationError("conflicting labels from " + std::string(annotator) + " on " + std::string(item));
  }

  std::optional<int> label(std::size_t annotator, std::size_t item) const {
    auto it = labels_.find({annotator, item});
    if (it == labels_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& annotators() const { return annotators_; }
  const std::vector<std::string>& items() const { return items_; }
  std::size_t label_count() const { return labels_.size(); }

 private:
  static std::size_t intern(std::vector<std::string>& v, std::string_view id) {
    auto it = std::find(v.begin(), v.end(), id);
    if (it != v.end()) return static_cast<std::size_t>(it - v.begin());
    v.emplace_back(id);
    return v.size() - 1;
  }

  std::vector<std::string> annotators_;
  std::vector<std::string> items_;
  std::map<std::pair<std::size_t, std::size_t>, int> labels_;
};

// Coincidence matrix o[c][k] keyed by category value.
using CoincidenceMatrix = std::map<int, std::map<int, double>>;

inline CoincidenceMatrix coincidence_matrix(const AnnotationSet& set) {
  CoincidenceMatrix o;
  for (std::size_t item = 0; item < set.items().size(); ++item) {
    std::vector<int> values;
    for (std::size_t a = 0; a < set.annotators().size(); ++a)
      if (auto v = set.label(a, item)) values.push_back(*v);
    if (values.size() < 2) continue;
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < values.size(); ++j)
        if (i != j) o[values[i]][values[j]] += w;
  }
  return o;
}

inline double krippendorff_alpha(const AnnotationSet& set) {
  if (set.annotators().size() < 2) throw PreconditionError("krippendorff_alpha needs at least two annotators");
  auto o = coincidence_matrix(set);
  if (o.empty()) throw PreconditionError("krippendorff_alpha needs at least one item labelled twice");

  std::map<int, double> marginal;
  double n = 0;
  double observed = 0;
  for (const auto& [c, row] : o)
    for (const auto& [k, v] : row) {
      marginal[c] += v;
      n += v;
      if (c != k) observed += v;
    }
  double expected = 0;
  for (const auto& [c, nc] : marginal)
    for (const auto& [k, nk] : marginal)
      if (c != k) expected += nc * nk;
  if (expected == 0) throw PreconditionError("krippendorff_alpha undefined: every pairable label is identical");
  return 1.0 - (n - 1.0) * observed / expected;
}

// CSV with header item_id,annotator_id,task,label; keeps rows for one task.
inline AnnotationSet parse_annotations_csv(std::string_view content, std::string_view task,
                                           const std::string& origin = "<annotations>") {
  AnnotationSet set;
  bool header = false;
  io::for_each_line(content, [&](std::string_view line, std::size_t lineno) {
    auto where = origin + ":" + std::to_string(lineno);
    auto cols = io::split(line, ',');
    if (cols.size() != 4) throw ParseError(where + ": expected 4 comma-separated columns");
    for (auto& c : cols) c = std::string(io::trim(c));
    if (!header) {
      if (cols != std::vector<std::string>{"item_id", "annotator_id", "task", "label"})
        throw ParseError(where + ": expected header item_id,annotator_id,task,label");
      header = true;
      return;
    }
    if (cols[2] != "pejorative" && cols[2] != "misogynous")
      throw ParseError(where + ": task must be pejorative or misogynous");
    if (cols[3] != "0" && cols[3] != "1") throw ParseError(where + ": label must be 0 or 1");
    set.declare_annotator(cols[1]);
    if (cols[2] != task) return;
    set.add(cols[1], cols[0], cols[3] == "1" ? 1 : 0);
  });
  if (!header) throw ParseError(origin + ": empty annotation file");
  return set;
}

inline AnnotationSet load_annotations(const std::filesystem::path& path, std::string_view task) {
  return parse_annotations_csv(io::read_file(path), task, path.string());
}

}  // namespace pejor
