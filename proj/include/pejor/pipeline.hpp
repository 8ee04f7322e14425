#pragma once

// Experiment configuration (TOML) and the end-to-end run: match, predict word
// connotation, enrich, train and evaluate the misogyny model for every
// approach, over several seeded runs.

#include <nlohmann/json.hpp>
#include <toml.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "pejor/classifier.hpp"
#include "pejor/corpus.hpp"
#include "pejor/enrichment.hpp"
#include "pejor/error.hpp"
#include "pejor/evaluation.hpp"
#include "pejor/io.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/matcher.hpp"

namespace pejor {

inline constexpr std::string_view kVersion = "0.1.0";

#ifndef PEJOR_DEFAULT_LEXICON
#define PEJOR_DEFAULT_LEXICON "data/lexicon.tsv"
#endif

inline constexpr std::string_view kDefaultLexicon = PEJOR_DEFAULT_LEXICON;

// Hyperparameters of the transformer adapter, echoed into run manifests.
struct AdapterEcho {
  std::string model_name = "m-polignano-uniba/bert_uncased_L-12_H-768_A-12_italian_alb3rt0";
  std::string optimizer = "AdamW";
  double epsilon = 1e-8;
  int epochs = 4;
  int batch_size = 16;
};

enum class Backend { baseline, external };

struct RunConfig {
  std::filesystem::path corpus;
  Schema schema = Schema::pejorativity;
  std::optional<std::filesystem::path> pej_corpus;
  std::filesystem::path lexicon{std::string(kDefaultLexicon)};

  LemmatizerConfig lemmatizer;
  std::size_t max_edit = 1;

  Strategy strategy = Strategy::subst;
  LabelSource label_source = LabelSource::gold;
  bool single_anchor = false;

  Backend backend = Backend::baseline;
  std::vector<std::uint64_t> seeds = kDefaultSeeds;
  std::optional<std::filesystem::path> pej_predictions;
  std::optional<std::filesystem::path> mis_predictions_dir;

  Hyperparams baseline;
  AdapterEcho adapter;

  std::filesystem::path output_dir = "out";
};

// Every default, spelled out; `--print-config` prints this.
inline std::string default_config_toml() {
  RunConfig d;
  const auto& h = d.baseline;
  std::string s;
  s += "# pejor run configuration. Relative paths resolve against this file's\n";
  s += "# directory; ${PEJ_DATA_DIR} expands from the environment.\n\n";
  s += "[data]\n";
  s += "corpus = \"\"                 # corpus JSONL (required)\n";
  s += "schema = \"pejorativity\"     # pejorativity | ami\n";
  s += "pej_corpus = \"\"             # pejorativity corpus for model_pej when schema = ami\n";
  s += "lexicon = \"" + d.lexicon.string() + "\"\n\n";
  s += "[matcher]\n";
  s += "lemmatizer = \"suffix_rules\" # suffix_rules | external_table | identity\n";
  s += "lemma_table = \"\"            # form<TAB>lemma, for external_table\n";
  s += "max_edit = 1\n\n";
  s += "[enrichment]\n";
  s += "strategy = \"subst\"          # concat | subst (used by `enrich`)\n";
  s += "label_source = \"gold\"       # gold | predicted (used by `enrich`)\n";
  s += "single_anchor = false\n\n";
  s += "[model]\n";
  s += "backend = \"baseline\"        # baseline | external\n";
  s += "seeds = [13, 42, 2024]\n";
  s += "pej_predictions = \"\"        # external backend: model_pej predictions JSONL\n";
  s += "mis_predictions_dir = \"\"    # external backend: <approach>[_<source>].jsonl files\n\n";
  s += "[baseline]\n";
  s += "dim = " + std::to_string(h.dim) + "\n";
  s += "epochs = " + std::to_string(h.epochs) + "\n";
  s += "batch_size = " + std::to_string(h.batch_size) + "\n";
  s += "learning_rate = 0.5\n";
  s += "l2 = 0.0001\n";
  s += "ngram_min = " + std::to_string(h.ngram_min) + "\n";
  s += "ngram_max = " + std::to_string(h.ngram_max) + "\n\n";
  s += "[adapter]                   # provenance only\n";
  s += "model_name = \"" + d.adapter.model_name + "\"\n";
  s += "optimizer = \"AdamW\"\n";
  s += "epsilon = 1e-8\n";
  s += "epochs = 4\n";
  s += "batch_size = 16\n\n";
  s += "[output]\n";
  s += "dir = \"out\"\n";
  return s;
}

namespace detail {

inline std::string expand_env(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.substr(i, 2) == "${") {
      auto close = s.find('}', i);
      if (close == std::string_view::npos) throw ConfigError("unterminated ${ in \"" + std::string(s) + "\"");
      std::string name(s.substr(i + 2, close - i - 2));
      const char* v = std::getenv(name.c_str());
      if (!v) throw ConfigError("environment variable " + name + " is not set");
      out += v;
      i = close + 1;
    } else {
      out += s[i++];
    }
  }
  return out;
}

inline std::optional<std::filesystem::path> config_path(const toml::table& t, std::string_view section,
                                                        std::string_view key, const std::filesystem::path& base) {
  auto node = t[section][key];
  if (!node) return std::nullopt;
  auto v = node.value<std::string>();
  if (!v) throw ConfigError(std::string(section) + "." + std::string(key) + " must be a string");
  if (v->empty()) return std::nullopt;
  std::filesystem::path p(expand_env(*v));
  return p.is_absolute() ? p : base / p;
}

template <typename T>
T config_value(const toml::table& t, std::string_view section, std::string_view key, T fallback) {
  auto node = t[section][key];
  if (!node) return fallback;
  auto v = node.value<T>();
  if (!v) throw ConfigError(std::string(section) + "." + std::string(key) + " has the wrong type");
  return *v;
}

}  // namespace detail

inline RunConfig parse_run_config(std::string_view toml_text, const std::filesystem::path& base_dir,
                                  const std::string& origin = "<config>") {
  toml::table t;
  try {
    t = toml::parse(toml_text, origin);
  } catch (const toml::parse_error& e) {
    throw ConfigError(origin + ": " + std::string(e.description()));
  }
  static const std::set<std::string, std::less<>> sections = {"data",  "matcher",  "enrichment", "model",
                                                               "baseline", "adapter", "output"};
  for (const auto& [k, _] : t)
    if (!sections.contains(k.str())) throw ConfigError(origin + ": unknown section [" + std::string(k.str()) + "]");

  RunConfig c;
  if (auto p = detail::config_path(t, "data", "corpus", base_dir)) c.corpus = *p;
  c.schema = parse_schema(detail::config_value<std::string>(t, "data", "schema", "pejorativity"));
  c.pej_corpus = detail::config_path(t, "data", "pej_corpus", base_dir);
  if (auto p = detail::config_path(t, "data", "lexicon", base_dir)) c.lexicon = *p;

  c.lemmatizer.mode = parse_lemmatizer_mode(detail::config_value<std::string>(t, "matcher", "lemmatizer", "suffix_rules"));
  c.lemmatizer.table_path = detail::config_path(t, "matcher", "lemma_table", base_dir);
  auto max_edit = detail::config_value<int64_t>(t, "matcher", "max_edit", 1);
  if (max_edit < 0) throw ConfigError("matcher.max_edit must be >= 0");
  c.max_edit = static_cast<std::size_t>(max_edit);
  if (c.lemmatizer.mode == LemmatizerMode::external_table && !c.lemmatizer.table_path)
    throw ConfigError("matcher.lemmatizer = external_table needs matcher.lemma_table");

  c.strategy = parse_strategy(detail::config_value<std::string>(t, "enrichment", "strategy", "subst"));
  c.label_source = parse_label_source(detail::config_value<std::string>(t, "enrichment", "label_source", "gold"));
  c.single_anchor = detail::config_value<bool>(t, "enrichment", "single_anchor", false);

  auto backend = detail::config_value<std::string>(t, "model", "backend", "baseline");
  if (backend == "baseline") c.backend = Backend::baseline;
  else if (backend == "external") c.backend = Backend::external;
  else throw ConfigError("model.backend must be baseline or external");
  if (auto seeds = t["model"]["seeds"].as_array()) {
    c.seeds.clear();
    for (const auto& s : *seeds) {
      auto v = s.value<int64_t>();
      if (!v || *v < 0) throw ConfigError("model.seeds must be non-negative integers");
      c.seeds.push_back(static_cast<std::uint64_t>(*v));
    }
  }
  if (c.seeds.empty()) throw ConfigError("model.seeds must not be empty");
  c.pej_predictions = detail::config_path(t, "model", "pej_predictions", base_dir);
  c.mis_predictions_dir = detail::config_path(t, "model", "mis_predictions_dir", base_dir);

  auto& h = c.baseline;
  h.dim = static_cast<std::size_t>(detail::config_value<int64_t>(t, "baseline", "dim", static_cast<int64_t>(h.dim)));
  h.epochs =
      static_cast<std::size_t>(detail::config_value<int64_t>(t, "baseline", "epochs", static_cast<int64_t>(h.epochs)));
  h.batch_size = static_cast<std::size_t>(
      detail::config_value<int64_t>(t, "baseline", "batch_size", static_cast<int64_t>(h.batch_size)));
  h.learning_rate = detail::config_value<double>(t, "baseline", "learning_rate", h.learning_rate);
  h.l2 = detail::config_value<double>(t, "baseline", "l2", h.l2);
  h.ngram_min = static_cast<std::size_t>(
      detail::config_value<int64_t>(t, "baseline", "ngram_min", static_cast<int64_t>(h.ngram_min)));
  h.ngram_max = static_cast<std::size_t>(
      detail::config_value<int64_t>(t, "baseline", "ngram_max", static_cast<int64_t>(h.ngram_max)));
  validate_hyperparams(h);

  c.adapter.model_name = detail::config_value<std::string>(t, "adapter", "model_name", c.adapter.model_name);
  c.adapter.optimizer = detail::config_value<std::string>(t, "adapter", "optimizer", c.adapter.optimizer);
  c.adapter.epsilon = detail::config_value<double>(t, "adapter", "epsilon", c.adapter.epsilon);
  c.adapter.epochs = static_cast<int>(detail::config_value<int64_t>(t, "adapter", "epochs", c.adapter.epochs));
  c.adapter.batch_size =
      static_cast<int>(detail::config_value<int64_t>(t, "adapter", "batch_size", c.adapter.batch_size));

  if (auto p = detail::config_path(t, "output", "dir", base_dir)) c.output_dir = *p;
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  return parse_run_config(text, base, path.string());
}

inline nlohmann::json to_json(const RunConfig& c) {
  auto opt = [](const std::optional<std::filesystem::path>& p) {
    return p ? nlohmann::json(p->generic_string()) : nlohmann::json(nullptr);
  };
  return {{"corpus", c.corpus.generic_string()},
          {"schema", to_string(c.schema)},
          {"pej_corpus", opt(c.pej_corpus)},
          {"lexicon", c.lexicon.generic_string()},
          {"lemmatizer", to_string(c.lemmatizer.mode)},
          {"lemma_table", opt(c.lemmatizer.table_path)},
          {"max_edit", c.max_edit},
          {"strategy", to_string(c.strategy)},
          {"label_source", to_string(c.label_source)},
          {"single_anchor", c.single_anchor},
          {"backend", c.backend == Backend::baseline ? "baseline" : "external"},
          {"seeds", c.seeds},
          {"pej_predictions", opt(c.pej_predictions)},
          {"mis_predictions_dir", opt(c.mis_predictions_dir)},
          {"baseline", to_json(c.baseline)}};
}

inline nlohmann::json to_json(const AdapterEcho& a) {
  return {{"model_name", a.model_name},
          {"optimizer", a.optimizer},
          {"epsilon", a.epsilon},
          {"epochs", a.epochs},
          {"batch_size", a.batch_size}};
}

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Single writer per output directory; the lock file is removed on scope exit.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& dir) : path_(dir / ".lock") {
    std::filesystem::create_directories(dir);
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) throw ConfigError("output directory " + dir.string() + " is locked by another run (" +
                                   path_.string() + ")");
  }
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;
  ~OutputLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

inline nlohmann::json run_manifest(const RunConfig& c, std::string_view command) {
  auto cfg = to_json(c);
  return {{"tool", "pejor"},
          {"version", kVersion},
          {"command", command},
          {"config_hash", fnv1a_hex(cfg.dump())},
          {"seeds", c.seeds},
          {"config", cfg},
          {"adapter", to_json(c.adapter)}};
}

// --- the pipeline -------------------------------------------------------------

struct PipelineResult {
  std::vector<EvalReport> reports;  // mis reports (both subsets) plus the pej report when gold exists
  std::map<Subset, ComparisonTable> tables;
};

namespace detail {

inline std::string approach_file(Approach a, Source s) {
  std::string name(to_string(a));
  if (s != Source::na) name += "_" + std::string(to_string(s));
  return name;
}

inline std::set<std::string, std::less<>> epithet_ids(const Corpus& corpus, const SpanIndex& spans) {
  std::set<std::string, std::less<>> ids;
  for (const auto& t : corpus.tweets)
    if (!spans_of(spans, t.id).empty()) ids.insert(t.id);
  return ids;
}

}  // namespace detail

inline Matcher make_matcher(const RunConfig& c) {
  MatcherOptions opts;
  opts.max_edit = c.max_edit;
  return Matcher(load_lexicon(c.lexicon), c.lemmatizer, opts);
}

inline std::filesystem::path run_dir(const std::filesystem::path& out, std::size_t run) {
  return out / ("run" + std::to_string(run));
}

// Runs every approach for every seed and writes artifacts under
// config.output_dir. Identical config and inputs give byte-identical files.
inline PipelineResult run_pipeline(const RunConfig& config) {
  if (config.corpus.empty()) throw ConfigError("data.corpus is required");
  OutputLock lock(config.output_dir);
  const auto& out = config.output_dir;

  auto matcher = make_matcher(config);
  const auto& lexicon = matcher.lexicon();
  auto corpus = load_corpus(config.corpus, config.schema, &lexicon);
  auto spans = match_corpus(corpus, matcher);
  const bool has_gold = config.schema == Schema::pejorativity;

  std::optional<Corpus> pej_corpus;
  if (config.backend == Backend::baseline) {
    if (has_gold) pej_corpus = corpus;
    else if (config.pej_corpus) pej_corpus = load_corpus(*config.pej_corpus, Schema::pejorativity, &lexicon);
    else throw ConfigError("schema ami needs data.pej_corpus to train model_pej");
  }
  std::optional<SpanIndex> pej_spans;
  if (pej_corpus) pej_spans = match_corpus(*pej_corpus, matcher);

  {
    std::vector<nlohmann::json> rows;
    for (const auto& t : corpus.tweets)
      for (const auto& s : spans_of(spans, t.id)) rows.push_back(to_json(s));
    io::write_file(out / "spans.jsonl", io::to_jsonl(rows));
  }

  std::vector<PredictionRecord> external_pej;
  if (config.backend == Backend::external) {
    if (!config.pej_predictions) throw ConfigError("backend external needs model.pej_predictions");
    if (!config.mis_predictions_dir) throw ConfigError("backend external needs model.mis_predictions_dir");
    external_pej = load_external_predictions(*config.pej_predictions, &corpus);
  }
  std::size_t n_runs = config.seeds.size();
  if (config.backend == Backend::external) n_runs = run_ids(external_pej).size();
  if (n_runs == 0) throw CoverageError("no model_pej predictions");

  auto test_gold = gold_labels(corpus, Task::mis, Split::test);
  auto epithets = detail::epithet_ids(corpus, spans);
  auto test_gold_epithets = gold_labels(corpus, Task::mis, Split::test, &epithets);

  struct Variant {
    Approach approach;
    Source source;
  };
  std::vector<Variant> variants = {{Approach::baseline, Source::na}};
  for (auto a : {Approach::concat, Approach::subst}) {
    if (has_gold) variants.push_back({a, Source::gold});
    variants.push_back({a, Source::predicted});
  }

  std::map<std::pair<int, int>, std::vector<RunMetrics>> whole, subset;  // keyed by variant index
  std::vector<RunMetrics> pej_runs;
  auto gold_assign = gold_assignments(corpus, spans);

  auto external_mis = [&](const Variant& v) {
    auto path = *config.mis_predictions_dir / (detail::approach_file(v.approach, v.source) + ".jsonl");
    if (!std::filesystem::exists(path)) throw CoverageError("missing external predictions " + path.string());
    return load_external_predictions(path, &corpus);
  };

  for (std::size_t r = 0; r < n_runs; ++r) {
    const int run_id = static_cast<int>(r);
    const auto dir = run_dir(out, r);
    std::vector<PredictionRecord> pej_preds;
    if (config.backend == Backend::baseline) {
      const auto seed = config.seeds[r];
      auto pej_model = train_baseline(*pej_corpus, Task::pej, config.baseline, seed, &*pej_spans);
      pej_preds = predict(pej_model, corpus, Task::pej, run_id, &spans);
    } else {
      auto ids = run_ids(external_pej);
      int ext_run = *std::next(ids.begin(), static_cast<std::ptrdiff_t>(r));
      for (const auto& p : external_pej)
        if (p.task == Task::pej && p.run_id == ext_run) pej_preds.push_back({p.id, p.task, p.label, p.score, run_id});
    }
    io::write_file(dir / "pej_predictions.jsonl", predictions_to_jsonl(pej_preds));
    if (has_gold) {
      std::set<std::string, std::less<>> with_target;
      for (const auto& t : corpus.tweets)
        if (!enrichment_spans(t, spans).empty()) with_target.insert(t.id);
      pej_runs.push_back(evaluate_run(gold_labels(corpus, Task::pej, Split::test, &with_target), pej_preds, run_id));
    }
    auto pred_assign = assignments_from_labels(corpus, spans, labels_for_run(pej_preds, Task::pej, run_id),
                                               LabelSource::predicted);

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const auto& v = variants[vi];
      Corpus input = corpus;
      if (v.approach != Approach::baseline) {
        auto strategy = v.approach == Approach::concat ? Strategy::concat : Strategy::subst;
        auto source = v.source == Source::gold ? LabelSource::gold : LabelSource::predicted;
        auto enriched = enrich_corpus(corpus, spans, source == LabelSource::gold ? gold_assign : pred_assign,
                                      strategy, source, lexicon, SubstOptions{config.single_anchor});
        io::write_file(dir / ("enriched_" + detail::approach_file(v.approach, v.source) + ".jsonl"),
                       enriched_to_jsonl(enriched));
        input = enriched.as_corpus();
      }
      std::vector<PredictionRecord> mis_preds;
      if (config.backend == Backend::baseline) {
        auto model = train_baseline(input, Task::mis, config.baseline, config.seeds[r]);
        mis_preds = predict(model, input, Task::mis, run_id, nullptr, Split::test);
      } else {
        auto ids = run_ids(external_pej);
        int ext_run = *std::next(ids.begin(), static_cast<std::ptrdiff_t>(r));
        for (const auto& p : external_mis(v))
          if (p.task == Task::mis && p.run_id == ext_run) mis_preds.push_back({p.id, p.task, p.label, p.score, run_id});
      }
      io::write_file(dir / ("mis_" + detail::approach_file(v.approach, v.source) + ".jsonl"),
                     predictions_to_jsonl(mis_preds));
      whole[{static_cast<int>(vi), 0}].push_back(evaluate_run(test_gold, mis_preds, run_id));
      if (!test_gold_epithets.empty())
        subset[{static_cast<int>(vi), 0}].push_back(evaluate_run(test_gold_epithets, mis_preds, run_id));
    }
  }

  PipelineResult result;
  std::vector<EvalReport> whole_reports, subset_reports;
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const auto& v = variants[vi];
    whole_reports.push_back(
        aggregate_runs(Task::mis, v.approach, v.source, Subset::whole, whole[{static_cast<int>(vi), 0}]));
    if (!test_gold_epithets.empty())
      subset_reports.push_back(
          aggregate_runs(Task::mis, v.approach, v.source, Subset::epithets, subset[{static_cast<int>(vi), 0}]));
  }
  result.reports = whole_reports;
  result.reports.insert(result.reports.end(), subset_reports.begin(), subset_reports.end());
  result.tables[Subset::whole] = compare_pipelines(whole_reports);
  if (!subset_reports.empty()) result.tables[Subset::epithets] = compare_pipelines(subset_reports);
  if (!pej_runs.empty()) {
    auto pej_report = aggregate_runs(Task::pej, Approach::baseline, Source::na, Subset::whole, pej_runs);
    result.reports.push_back(pej_report);
    io::write_file(out / "pej_report.txt", render_text(compare_pipelines({pej_report})));
  }

  io::write_file(out / "reports.csv", reports_to_csv(result.reports));
  for (const auto& [subset_tag, table] : result.tables) {
    std::string stem = "comparison_" + std::string(to_string(subset_tag));
    io::write_file(out / (stem + ".txt"), render_text(table));
    io::write_file(out / (stem + ".csv"), render_csv(table));
  }
  io::write_file(out / "manifest.json", run_manifest(config, "pipeline run").dump(2) + "\n");
  return result;
}

}  // namespace pejor
