#pragma once

// The two classification roles of the pipeline: model_pej (is the matched
// word used pejoratively here?) and model_mis (is the tweet misogynous?).
// In-repo backend: character n-gram logistic regression. External backends
// hand over PredictionRecords instead.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/corpus.hpp"
#include "pejor/enrichment.hpp"
#include "pejor/error.hpp"
#include "pejor/io.hpp"
#include "pejor/random.hpp"
#include "pejor/utf8.hpp"

namespace pejor {

enum class Task { pej, mis };

inline std::string_view to_string(Task t) { return t == Task::pej ? "pej" : "mis"; }

inline Task parse_task(std::string_view s) {
  if (s == "pej") return Task::pej;
  if (s == "mis") return Task::mis;
  throw ConfigError("unknown task \"" + std::string(s) + "\"");
}

inline std::optional<bool> gold_label(const AnnotatedTweet& t, Task task) {
  return task == Task::pej ? t.pejorative : t.misogynous;
}

struct PredictionRecord {
  std::string id;
  Task task = Task::mis;
  bool label = false;
  double score = 0.0;
  int run_id = 0;

  bool operator==(const PredictionRecord&) const = default;
};

inline nlohmann::json to_json(const PredictionRecord& p) {
  return {{"id", p.id}, {"task", to_string(p.task)}, {"label", p.label}, {"score", p.score}, {"run_id", p.run_id}};
}

inline PredictionRecord prediction_from_json(const nlohmann::json& j, const std::string& where) {
  PredictionRecord p;
  p.id = io::field<std::string>(j, "id", where);
  auto task = io::field<std::string>(j, "task", where);
  if (task != "pej" && task != "mis") throw ParseError(where + ": task must be \"pej\" or \"mis\"");
  p.task = parse_task(task);
  p.label = io::field<bool>(j, "label", where);
  p.score = io::field<double>(j, "score", where);
  p.run_id = io::field<int>(j, "run_id", where);
  return p;
}

inline std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records) {
  std::vector<nlohmann::json> rows;
  for (const auto& r : records) rows.push_back(to_json(r));
  return io::to_jsonl(rows);
}

inline void validate_predictions(const std::vector<PredictionRecord>& records, const Corpus* corpus) {
  std::set<std::string, std::less<>> ids;
  if (corpus)
    for (const auto& t : corpus->tweets) ids.insert(t.id);
  for (const auto& r : records) {
    if (!std::isfinite(r.score) || r.score < 0.0 || r.score > 1.0)
      throw ValidationError("prediction for " + r.id + ": score " + std::to_string(r.score) + " outside [0, 1]");
    if (r.run_id < 0) throw ValidationError("prediction for " + r.id + ": negative run_id");
    if (corpus && !ids.contains(r.id)) throw ValidationError("prediction for unknown tweet id \"" + r.id + "\"");
  }
}

inline std::vector<PredictionRecord> load_external_predictions(const std::filesystem::path& path,
                                                               const Corpus* corpus = nullptr) {
  std::vector<PredictionRecord> out;
  std::size_t n = 0;
  for (const auto& row : io::read_jsonl(path))
    out.push_back(prediction_from_json(row, path.string() + " record " + std::to_string(++n)));
  validate_predictions(out, corpus);
  return out;
}

inline std::set<int> run_ids(const std::vector<PredictionRecord>& records) {
  std::set<int> out;
  for (const auto& r : records) out.insert(r.run_id);
  return out;
}

// Labels of one task and run keyed by tweet id.
inline std::map<std::string, bool, std::less<>> labels_for_run(const std::vector<PredictionRecord>& records, Task task,
                                                               int run_id) {
  std::map<std::string, bool, std::less<>> out;
  for (const auto& r : records)
    if (r.task == task && r.run_id == run_id) out[r.id] = r.label;
  return out;
}

// --- features ---------------------------------------------------------------

struct Hyperparams {
  std::size_t dim = 1u << 16;
  std::size_t epochs = 20;
  std::size_t batch_size = 16;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::size_t ngram_min = 2;
  std::size_t ngram_max = 5;

  bool operator==(const Hyperparams&) const = default;
};

inline nlohmann::json to_json(const Hyperparams& h) {
  return {{"dim", h.dim},       {"epochs", h.epochs}, {"batch_size", h.batch_size}, {"learning_rate", h.learning_rate},
          {"l2", h.l2},         {"ngram_min", h.ngram_min}, {"ngram_max", h.ngram_max}};
}

inline Hyperparams hyperparams_from_json(const nlohmann::json& j, const std::string& where) {
  Hyperparams h;
  h.dim = io::field<std::size_t>(j, "dim", where);
  h.epochs = io::field<std::size_t>(j, "epochs", where);
  h.batch_size = io::field<std::size_t>(j, "batch_size", where);
  h.learning_rate = io::field<double>(j, "learning_rate", where);
  h.l2 = io::field<double>(j, "l2", where);
  h.ngram_min = io::field<std::size_t>(j, "ngram_min", where);
  h.ngram_max = io::field<std::size_t>(j, "ngram_max", where);
  return h;
}

inline void validate_hyperparams(const Hyperparams& h) {
  if (h.dim == 0 || h.epochs == 0 || h.batch_size == 0) throw ConfigError("dim, epochs and batch_size must be > 0");
  if (h.ngram_min == 0 || h.ngram_min > h.ngram_max) throw ConfigError("need 0 < ngram_min <= ngram_max");
  if (!(h.learning_rate > 0) || !(h.l2 >= 0)) throw ConfigError("need learning_rate > 0 and l2 >= 0");
}

// Sorted by index, no duplicates.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

inline constexpr char32_t kMarkOpen = U'⟦';
inline constexpr char32_t kMarkClose = U'⟧';

// FNV-1a over the code points of one n-gram.
inline std::uint64_t ngram_hash(std::u32string_view gram) {
  std::uint64_t h = 1469598103934665603ull;
  for (char32_t c : gram) {
    for (int k = 0; k < 4; ++k) {
      h ^= static_cast<std::uint8_t>((c >> (8 * k)) & 0xFF);
      h *= 1099511628211ull;
    }
  }
  return h;
}

// Hashed character n-gram counts of the lowercased, space-padded input,
// L2-normalised.
inline SparseVector featurize(std::string_view input, const Hyperparams& hp) {
  std::u32string text = U" " + utf8::lower(utf8::decode(input)) + U" ";
  std::map<std::uint32_t, double> counts;
  for (std::size_t n = hp.ngram_min; n <= hp.ngram_max; ++n) {
    if (text.size() < n) break;
    for (std::size_t i = 0; i + n <= text.size(); ++i)
      counts[static_cast<std::uint32_t>(ngram_hash(std::u32string_view(text).substr(i, n)) % hp.dim)] += 1.0;
  }
  double norm = 0;
  for (const auto& [_, v] : counts) norm += v * v;
  norm = std::sqrt(norm);
  SparseVector out(counts.begin(), counts.end());
  if (norm > 0)
    for (auto& [_, v] : out) v /= norm;
  return out;
}

// Tweet text as the model sees it. For pej the word under judgement is
// bracketed with markers so the same sentence can be asked about different
// words.
inline std::string model_input(const AnnotatedTweet& tweet, Task task, const std::vector<MatchSpan>& spans) {
  if (task == Task::mis || spans.empty()) return tweet.text;
  auto text = utf8::decode(tweet.text);
  auto sorted = spans;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.char_start > b.char_start; });
  for (const auto& s : sorted) {
    text.insert(s.char_end, 1, kMarkClose);
    text.insert(s.char_start, 1, kMarkOpen);
  }
  return utf8::encode(text);
}

// --- model ------------------------------------------------------------------

struct Example {
  SparseVector x;
  double y = 0.0;  // target in [0, 1]
};

struct BaselineModel {
  Task task = Task::mis;
  Hyperparams hp;
  std::uint64_t seed = 0;
  std::vector<double> weights;
  double bias = 0.0;

  double logit(const SparseVector& x) const {
    double z = bias;
    for (const auto& [i, v] : x) z += weights[i] * v;
    return z;
  }

  bool operator==(const BaselineModel&) const = default;
};

struct Gradient {
  std::vector<double> weights;
  double bias = 0.0;
};

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

// Mean logistic loss over the batch plus (l2 / 2) * ||w||^2; bias unregularised.
inline double loss(const BaselineModel& model, const std::vector<Example>& batch) {
  if (batch.empty()) throw PreconditionError("loss of an empty batch");
  double total = 0;
  for (const auto& ex : batch) {
    double z = model.logit(ex.x);
    total += ex.y * softplus(-z) + (1.0 - ex.y) * softplus(z);
  }
  double reg = 0;
  for (double w : model.weights) reg += w * w;
  return total / static_cast<double>(batch.size()) + 0.5 * model.hp.l2 * reg;
}

inline Gradient loss_gradient(const BaselineModel& model, const std::vector<Example>& batch) {
  if (batch.empty()) throw PreconditionError("gradient of an empty batch");
  Gradient g;
  g.weights.resize(model.weights.size());
  for (std::size_t i = 0; i < model.weights.size(); ++i) g.weights[i] = model.hp.l2 * model.weights[i];
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    double r = (sigmoid(model.logit(ex.x)) - ex.y) * inv;
    g.bias += r;
    for (const auto& [i, v] : ex.x) g.weights[i] += r * v;
  }
  return g;
}

inline BaselineModel make_model(Task task, const Hyperparams& hp, std::uint64_t seed) {
  validate_hyperparams(hp);
  return {task, hp, seed, std::vector<double>(hp.dim, 0.0), 0.0};
}

// Mini-batch gradient descent from zero weights; the seed drives the
// per-epoch shuffle only, so (examples, hp, seed) fixes the result.
inline BaselineModel fit(std::vector<Example> examples, Task task, const Hyperparams& hp, std::uint64_t seed) {
  if (examples.empty()) throw PreconditionError("empty training split");
  auto model = make_model(task, hp, seed);
  rnd::Engine rng(seed);
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Example> batch;
  for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
    rnd::shuffle(std::span<std::size_t>(order), rng);
    for (std::size_t start = 0; start < order.size(); start += hp.batch_size) {
      batch.clear();
      for (std::size_t k = start; k < std::min(order.size(), start + hp.batch_size); ++k)
        batch.push_back(examples[order[k]]);
      auto g = loss_gradient(model, batch);
      for (std::size_t i = 0; i < model.weights.size(); ++i) model.weights[i] -= hp.learning_rate * g.weights[i];
      model.bias -= hp.learning_rate * g.bias;
    }
  }
  return model;
}

// Labelled training examples for one task from one split. pej uses only
// tweets with a matched target word.
inline std::vector<Example> task_examples(const Corpus& corpus, Task task, const SpanIndex* spans, Split split,
                                          const Hyperparams& hp) {
  if (task == Task::pej && !spans) throw ConfigError("task pej needs lexicon matches");
  std::vector<Example> out;
  for (const auto& t : corpus.tweets) {
    if (t.split != split) continue;
    std::vector<MatchSpan> es;
    if (task == Task::pej) {
      es = enrichment_spans(t, *spans);
      if (es.empty()) continue;
    }
    auto y = gold_label(t, task);
    if (!y) throw ValidationError("tweet " + t.id + " has no " + std::string(to_string(task)) + " label");
    out.push_back({featurize(model_input(t, task, es), hp), *y ? 1.0 : 0.0});
  }
  return out;
}

inline BaselineModel train_baseline(const Corpus& corpus, Task task, const Hyperparams& hp, std::uint64_t seed,
                                    const SpanIndex* spans = nullptr) {
  validate_hyperparams(hp);
  auto examples = task_examples(corpus, task, spans, Split::train, hp);
  if (examples.empty()) throw PreconditionError("empty training split for task " + std::string(to_string(task)));
  return fit(std::move(examples), task, hp, seed);
}

inline double score(const BaselineModel& model, std::string_view input) {
  return sigmoid(model.logit(featurize(input, model.hp)));
}

// Threshold 0.5 with ties going to the negative class.
inline bool decide(double score) { return score > 0.5; }

// One record per tweet (pej: per tweet with a matched target word),
// optionally restricted to one split.
inline std::vector<PredictionRecord> predict(const BaselineModel& model, const Corpus& corpus, Task task, int run_id,
                                             const SpanIndex* spans = nullptr,
                                             std::optional<Split> only = std::nullopt) {
  if (task == Task::pej && !spans) throw ConfigError("task pej needs lexicon matches");
  std::vector<PredictionRecord> out;
  for (const auto& t : corpus.tweets) {
    if (only && t.split != *only) continue;
    std::vector<MatchSpan> es;
    if (task == Task::pej) {
      es = enrichment_spans(t, *spans);
      if (es.empty()) continue;
    }
    double s = score(model, model_input(t, task, es));
    out.push_back({t.id, task, decide(s), s, run_id});
  }
  return out;
}

// --- checkpoints ------------------------------------------------------------

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json to_json(const BaselineModel& m) {
  auto weights = nlohmann::json::array();
  for (std::size_t i = 0; i < m.weights.size(); ++i)
    if (m.weights[i] != 0.0) weights.push_back({i, m.weights[i]});
  return {{"format", "pejor-baseline"}, {"version", kCheckpointVersion}, {"task", to_string(m.task)},
          {"seed", m.seed},             {"hyperparams", to_json(m.hp)},   {"bias", m.bias},
          {"weights", weights}};
}

inline BaselineModel model_from_json(const nlohmann::json& j, const std::string& where = "<checkpoint>") {
  if (io::field<std::string>(j, "format", where) != "pejor-baseline")
    throw ParseError(where + ": not a baseline checkpoint");
  if (io::field<int>(j, "version", where) != kCheckpointVersion)
    throw ParseError(where + ": unsupported checkpoint version");
  auto m = make_model(parse_task(io::field<std::string>(j, "task", where)),
                      hyperparams_from_json(io::field<nlohmann::json>(j, "hyperparams", where), where),
                      io::field<std::uint64_t>(j, "seed", where));
  m.bias = io::field<double>(j, "bias", where);
  for (const auto& w : io::field<nlohmann::json>(j, "weights", where)) {
    auto i = w.at(0).get<std::size_t>();
    if (i >= m.weights.size()) throw ParseError(where + ": weight index out of range");
    m.weights[i] = w.at(1).get<double>();
  }
  return m;
}

inline BaselineModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(nlohmann::json::parse(io::read_file(path)), path.string());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline const std::vector<std::uint64_t> kDefaultSeeds = {13, 42, 2024};

}  // namespace pejor
