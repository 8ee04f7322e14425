#pragma once

// Contextual-embedding analysis: pooled occurrence vectors of lexicon words
// compared against anchor vectors by cosine similarity, per sample class and
// model stage, plus the anchor-frequency bias check.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pejor/corpus.hpp"
#include "pejor/enrichment.hpp"
#include "pejor/error.hpp"
#include "pejor/evaluation.hpp"
#include "pejor/io.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/matcher.hpp"

namespace pejor {

using Vector = std::vector<double>;

inline Vector mean_pool(std::span<const Vector> vectors) {
  if (vectors.empty()) throw PreconditionError("mean_pool of an empty list");
  Vector out(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    if (v.size() != out.size()) throw ValidationError("mean_pool: dimension mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  for (auto& x : out) x /= static_cast<double>(vectors.size());
  return out;
}

inline double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw ValidationError("cosine: dimension mismatch");
  double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0 || nv == 0) throw PreconditionError("cosine of a zero vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

enum class EmbeddingKind { lexicon_occurrence, anchor };
enum class ModelTag { pretrained, finetuned };

inline std::string_view to_string(EmbeddingKind k) {
  return k == EmbeddingKind::anchor ? "anchor" : "lexicon_occurrence";
}
inline std::string_view to_string(ModelTag t) { return t == ModelTag::pretrained ? "pretrained" : "finetuned"; }

struct EmbeddingRecord {
  std::string id;
  EmbeddingKind kind = EmbeddingKind::lexicon_occurrence;
  std::string word;
  ModelTag model_tag = ModelTag::pretrained;
  Vector vector;
};

// Occurrence ids tie an embedding to a match: "<tweet_id>:<start>-<end>".
inline std::string occurrence_id(const MatchSpan& s) {
  return s.tweet_id + ":" + std::to_string(s.char_start) + "-" + std::to_string(s.char_end);
}

inline nlohmann::json to_json(const EmbeddingRecord& r) {
  return {{"id", r.id},
          {"kind", to_string(r.kind)},
          {"word", r.word},
          {"model_tag", to_string(r.model_tag)},
          {"vector", r.vector}};
}

inline EmbeddingRecord embedding_from_json(const nlohmann::json& j, const std::string& where) {
  EmbeddingRecord r;
  r.id = io::field<std::string>(j, "id", where);
  auto kind = io::field<std::string>(j, "kind", where);
  if (kind == "anchor") r.kind = EmbeddingKind::anchor;
  else if (kind == "lexicon_occurrence") r.kind = EmbeddingKind::lexicon_occurrence;
  else throw ParseError(where + ": unknown kind \"" + kind + "\"");
  r.word = io::field<std::string>(j, "word", where);
  auto tag = io::field<std::string>(j, "model_tag", where);
  if (tag == "pretrained") r.model_tag = ModelTag::pretrained;
  else if (tag == "finetuned") r.model_tag = ModelTag::finetuned;
  else throw ParseError(where + ": unknown model_tag \"" + tag + "\"");
  r.vector = io::field<Vector>(j, "vector", where);
  return r;
}

inline void validate_embeddings(const std::vector<EmbeddingRecord>& records) {
  if (records.empty()) return;
  auto dim = records.front().vector.size();
  for (const auto& r : records) {
    if (r.vector.size() != dim || dim == 0)
      throw ValidationError("embedding " + r.id + ": dimension " + std::to_string(r.vector.size()) +
                            " differs from " + std::to_string(dim));
    for (double x : r.vector)
      if (!std::isfinite(x)) throw ValidationError("embedding " + r.id + ": non-finite component");
  }
}

inline std::vector<EmbeddingRecord> load_embeddings(const std::filesystem::path& path) {
  std::vector<EmbeddingRecord> out;
  std::size_t n = 0;
  for (const auto& row : io::read_jsonl(path))
    out.push_back(embedding_from_json(row, path.string() + " record " + std::to_string(++n)));
  validate_embeddings(out);
  return out;
}

struct SimilarityCell {
  std::string headword;
  std::string anchor;
  Connotation anchor_connotation = Connotation::neutral;
  Connotation sample_class = Connotation::neutral;
  ModelTag model_tag = ModelTag::pretrained;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n = 0;
};

// One cell per (headword, anchor, sample class, model tag) with at least one
// occurrence. Sample class comes from the tweet's gold pejorative label.
inline std::vector<SimilarityCell> anchor_similarity_table(const Corpus& corpus, const Matcher& matcher,
                                                           const std::vector<EmbeddingRecord>& embeddings) {
  validate_embeddings(embeddings);
  std::set<ModelTag> tags;
  std::map<std::pair<std::string, ModelTag>, const EmbeddingRecord*> occ, anchors;
  for (const auto& r : embeddings) {
    tags.insert(r.model_tag);
    auto& index = r.kind == EmbeddingKind::anchor ? anchors : occ;
    index[{r.kind == EmbeddingKind::anchor ? r.word : r.id, r.model_tag}] = &r;
  }

  using Key = std::tuple<std::string, Connotation, std::string, Connotation, ModelTag>;
  std::map<Key, std::vector<double>> sims;
  std::set<std::string> missing;
  for (const auto& t : corpus.tweets) {
    if (!t.pejorative) continue;
    auto spans = target_spans(matcher.find(t.text, t.id), t.target_word);
    for (const auto& s : spans) {
      const auto& entry = matcher.lexicon().at(s.headword);
      for (auto tag : tags) {
        auto o = occ.find({occurrence_id(s), tag});
        if (o == occ.end()) {
          missing.insert(std::string(to_string(tag)) + "/" + occurrence_id(s));
          continue;
        }
        for (auto conn : {Connotation::neutral, Connotation::pejorative}) {
          for (const auto& a : entry.anchors(conn)) {
            auto ar = anchors.find({a, tag});
            if (ar == anchors.end()) {
              missing.insert(std::string(to_string(tag)) + "/anchor:" + a);
              continue;
            }
            sims[{s.headword, conn, a, connotation_of(*t.pejorative), tag}].push_back(
                cosine(o->second->vector, ar->second->vector));
          }
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing embeddings for " + std::to_string(missing.size()) + " item(s):";
    std::size_t k = 0;
    for (const auto& m : missing) {
      if (++k > 10) break;
      msg += " " + m;
    }
    throw CoverageError(msg);
  }
  std::vector<SimilarityCell> out;
  for (const auto& [key, values] : sims) {
    const auto& [hw, conn, anchor, cls, tag] = key;
    auto ms = mean_std(values);
    out.push_back({hw, anchor, conn, cls, tag, ms.mean, ms.std, values.size()});
  }
  return out;
}

// Mean of cell means grouped by (anchor connotation, sample class) for one
// model tag; empty groups are nullopt.
struct ClassAverages {
  std::optional<double> pejorative_anchor_in_pejorative;
  std::optional<double> pejorative_anchor_in_neutral;
  std::optional<double> neutral_anchor_in_pejorative;
  std::optional<double> neutral_anchor_in_neutral;
};

inline std::map<ModelTag, ClassAverages> class_average_summary(const std::vector<SimilarityCell>& cells) {
  if (cells.empty()) throw PreconditionError("class_average_summary of no cells");
  std::map<std::tuple<ModelTag, Connotation, Connotation>, std::vector<double>> groups;
  for (const auto& c : cells) groups[{c.model_tag, c.anchor_connotation, c.sample_class}].push_back(c.mean);
  std::map<ModelTag, ClassAverages> out;
  for (const auto& [key, values] : groups) {
    const auto& [tag, anchor, cls] = key;
    double m = mean_std(values).mean;
    auto& s = out[tag];
    if (anchor == Connotation::pejorative)
      (cls == Connotation::pejorative ? s.pejorative_anchor_in_pejorative : s.pejorative_anchor_in_neutral) = m;
    else
      (cls == Connotation::pejorative ? s.neutral_anchor_in_pejorative : s.neutral_anchor_in_neutral) = m;
  }
  return out;
}

// Cosine table in the published layout: one row per (headword, anchor), the
// four (model tag x sample class) cells as mean and std columns.
inline std::string similarity_table_csv(const std::vector<SimilarityCell>& cells) {
  using RowKey = std::tuple<std::string, Connotation, std::string>;
  std::map<RowKey, std::map<std::pair<ModelTag, Connotation>, const SimilarityCell*>> rows;
  for (const auto& c : cells) rows[{c.headword, c.anchor_connotation, c.anchor}][{c.model_tag, c.sample_class}] = &c;
  std::string out =
      "lexicon,anchor,anchor_connotation,pretrained_pejorative_mean,pretrained_pejorative_std,pretrained_neutral_mean,"
      "pretrained_neutral_std,finetuned_pejorative_mean,finetuned_pejorative_std,finetuned_neutral_mean,"
      "finetuned_neutral_std\n";
  char buf[64];
  for (const auto& [key, m] : rows) {
    const auto& [hw, conn, anchor] = key;
    out += io::csv_escape(hw) + "," + io::csv_escape(anchor) + "," + std::string(to_string(conn));
    for (auto tag : {ModelTag::pretrained, ModelTag::finetuned})
      for (auto cls : {Connotation::pejorative, Connotation::neutral}) {
        auto it = m.find({tag, cls});
        if (it == m.end()) {
          out += ",,";
        } else {
          std::snprintf(buf, sizeof buf, ",%.4f,%.4f", it->second->mean, it->second->std);
          out += buf;
        }
      }
    out += "\n";
  }
  return out;
}

// Occurrences of each anchor string across the corpus, matched on lemma
// sequences (multi-word anchors match as phrases).
inline std::map<std::string, std::size_t> anchor_frequency(const Corpus& corpus, const Lexicon& lexicon,
                                                           const Lemmatizer& lemmatizer) {
  std::map<std::string, std::vector<std::u32string>> patterns;
  for (const auto& [_, e] : lexicon)
    for (auto conn : {Connotation::neutral, Connotation::pejorative})
      for (const auto& a : e.anchors(conn)) {
        if (patterns.contains(a)) continue;
        std::vector<std::u32string> lemmas;
        for (const auto& tok : word_tokens(utf8::decode(a))) lemmas.push_back(lemmatizer.lemma(tok.text));
        patterns[a] = std::move(lemmas);
      }
  std::map<std::string, std::size_t> counts;
  for (const auto& [a, _] : patterns) counts[a] = 0;
  for (const auto& t : corpus.tweets) {
    std::vector<std::u32string> lemmas;
    for (const auto& tok : word_tokens(utf8::decode(t.text))) lemmas.push_back(lemmatizer.lemma(tok.text));
    for (const auto& [a, pat] : patterns) {
      if (pat.empty() || pat.size() > lemmas.size()) continue;
      for (std::size_t i = 0; i + pat.size() <= lemmas.size(); ++i)
        if (std::equal(pat.begin(), pat.end(), lemmas.begin() + static_cast<std::ptrdiff_t>(i))) ++counts[a];
    }
  }
  return counts;
}

}  // namespace pejor
