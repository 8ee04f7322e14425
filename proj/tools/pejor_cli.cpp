// pejor: command-line front end for the epithet disambiguation toolkit.
//
// Exit codes: 0 success, 1 validation/coverage failure, 2 configuration or
// usage error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pejor/pejor.hpp"

namespace fs = std::filesystem;
using namespace pejor;

namespace {

// Settings shared by most subcommands: an optional TOML config whose values
// individual flags override.
struct Common {
  std::string config;
  std::string lexicon;
  std::string lemmatizer;
  std::string lemma_table;
  int max_edit = -1;
  std::string schema;

  void add_to(CLI::App* app, bool with_schema = true) {
    app->add_option("--config", config, "TOML run configuration");
    app->add_option("--lexicon", lexicon, "lexicon TSV/JSON (default: bundled)");
    app->add_option("--lemmatizer", lemmatizer, "suffix_rules | external_table | identity");
    app->add_option("--lemma-table", lemma_table, "form<TAB>lemma table for external_table");
    app->add_option("--max-edit", max_edit, "edit distance for fuzzy matches (default 1)");
    if (with_schema) app->add_option("--schema", schema, "pejorativity | ami");
  }

  RunConfig resolve() const {
    RunConfig c = config.empty() ? RunConfig{} : load_run_config(config);
    if (!lexicon.empty()) c.lexicon = lexicon;
    if (!lemmatizer.empty()) c.lemmatizer.mode = parse_lemmatizer_mode(lemmatizer);
    if (!lemma_table.empty()) c.lemmatizer.table_path = fs::path(lemma_table);
    if (max_edit >= 0) c.max_edit = static_cast<std::size_t>(max_edit);
    if (!schema.empty()) c.schema = parse_schema(schema);
    if (c.lemmatizer.mode == LemmatizerMode::external_table && !c.lemmatizer.table_path)
      throw ConfigError("--lemmatizer external_table needs --lemma-table");
    return c;
  }
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    io::write_file(out_path, content);
  }
}

void check_format(const std::string& f) {
  if (f != "text" && f != "csv") throw ConfigError("--format must be text or csv");
}

std::optional<Split> parse_split_filter(const std::string& s) {
  if (s == "all") return std::nullopt;
  return parse_split(s);
}

SpanIndex load_spans(const fs::path& path) {
  SpanIndex out;
  std::size_t n = 0;
  for (const auto& row : io::read_jsonl(path)) {
    auto s = match_span_from_json(row, path.string() + " record " + std::to_string(++n));
    out[s.tweet_id].push_back(std::move(s));
  }
  return out;
}

// Spans from a file when given, otherwise by running the matcher.
SpanIndex spans_for(const Corpus& corpus, const Matcher& matcher, const std::string& spans_path) {
  if (spans_path.empty()) return match_corpus(corpus, matcher);
  return load_spans(spans_path);
}

std::string spans_jsonl(const Corpus& corpus, const SpanIndex& spans) {
  std::vector<nlohmann::json> rows;
  for (const auto& t : corpus.tweets)
    for (const auto& s : spans_of(spans, t.id)) rows.push_back(to_json(s));
  return io::to_jsonl(rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pejor: pejorative epithet disambiguation and misogyny detection toolkit"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the default TOML configuration and exit");
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  std::string format = "text";
  std::string out;

  // lexicon validate
  auto* lexicon_cmd = app.add_subcommand("lexicon", "lexicon tools");
  lexicon_cmd->require_subcommand(1);
  auto* lex_validate = lexicon_cmd->add_subcommand("validate", "check lexicon invariants");
  bool strict = false;
  common.add_to(lex_validate, false);
  lex_validate->add_flag("--strict", strict, "treat warnings as failures");
  lex_validate->add_option("--format", format, "text | csv");

  // corpus stats / alpha / subset
  auto* corpus_cmd = app.add_subcommand("corpus", "corpus statistics");
  corpus_cmd->require_subcommand(1);
  std::string corpus_path;
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "label counts per class and split, phi correlation");
  common.add_to(stats_cmd);
  stats_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  stats_cmd->add_option("--format", format, "text | csv");

  std::string annotations_path, annotation_task = "pejorative";
  auto* alpha_cmd = corpus_cmd->add_subcommand("alpha", "Krippendorff's alpha (nominal) from an annotation CSV");
  alpha_cmd->add_option("--annotations", annotations_path, "item_id,annotator_id,task,label CSV")->required();
  alpha_cmd->add_option("--task", annotation_task, "pejorative | misogynous");

  auto* subset_cmd = corpus_cmd->add_subcommand("subset", "tweets with at least one lexicon match");
  common.add_to(subset_cmd);
  subset_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  subset_cmd->add_option("--out", out, "output JSONL (default stdout)");

  // match
  auto* match_cmd = app.add_subcommand("match", "find lexicon words in a corpus");
  common.add_to(match_cmd);
  match_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  match_cmd->add_option("--out", out, "spans JSONL (default stdout)");

  // align
  std::string spans_path, tokenizations_path;
  auto* align_cmd = app.add_subcommand("align", "map match spans onto subword tokens");
  align_cmd->add_option("--spans", spans_path, "spans JSONL from `match`")->required();
  align_cmd->add_option("--tokenizations", tokenizations_path, "tokenization JSONL")->required();
  align_cmd->add_option("--out", out, "output JSONL (default stdout)");

  // enrich
  std::string strategy, source, predictions_path;
  int run_id = 0;
  bool single_anchor = false;
  auto* enrich_cmd = app.add_subcommand("enrich", "inject connotation into tweets (concat or subst)");
  common.add_to(enrich_cmd);
  enrich_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  enrich_cmd->add_option("--spans", spans_path, "spans JSONL (default: run the matcher)");
  enrich_cmd->add_option("--strategy", strategy, "concat | subst");
  enrich_cmd->add_option("--source", source, "gold | predicted");
  enrich_cmd->add_option("--predictions", predictions_path, "model_pej predictions for --source predicted");
  enrich_cmd->add_option("--run-id", run_id, "run of --predictions to use");
  enrich_cmd->add_flag("--single-anchor", single_anchor, "substitute the first anchor only");
  enrich_cmd->add_option("--out", out, "enriched JSONL (default stdout)");

  // train
  std::string task_name = "mis", model_path;
  std::uint64_t seed = 13;
  auto* train_cmd = app.add_subcommand("train", "train the n-gram logistic baseline");
  common.add_to(train_cmd);
  train_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  train_cmd->add_option("--task", task_name, "pej | mis");
  train_cmd->add_option("--seed", seed, "shuffle seed");
  train_cmd->add_option("--spans", spans_path, "spans JSONL (pej; default: run the matcher)");
  train_cmd->add_option("--out", model_path, "checkpoint JSON")->required();

  // predict
  std::string split_name = "test";
  auto* predict_cmd = app.add_subcommand("predict", "score a corpus with a trained baseline");
  common.add_to(predict_cmd);
  predict_cmd->add_option("--model", model_path, "checkpoint JSON")->required();
  predict_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  predict_cmd->add_option("--spans", spans_path, "spans JSONL (pej; default: run the matcher)");
  predict_cmd->add_option("--run-id", run_id, "run id recorded in the output");
  predict_cmd->add_option("--split", split_name, "train | test | all");
  predict_cmd->add_option("--out", out, "predictions JSONL (default stdout)");

  // eval
  std::string approach = "baseline", subset = "whole";
  auto* eval_cmd = app.add_subcommand("eval", "F1 and false positives of predictions against gold labels");
  common.add_to(eval_cmd);
  eval_cmd->add_option("--corpus", corpus_path, "corpus JSONL with gold labels")->required();
  eval_cmd->add_option("--predictions", predictions_path, "predictions JSONL")->required();
  eval_cmd->add_option("--task", task_name, "pej | mis");
  eval_cmd->add_option("--approach", approach, "baseline | concat | subst");
  eval_cmd->add_option("--source", source, "n/a | gold | predicted");
  eval_cmd->add_option("--subset", subset, "whole | epithets");
  eval_cmd->add_option("--split", split_name, "split to evaluate (default test)");
  eval_cmd->add_option("--format", format, "text | csv (csv is the per-run format `compare` reads)");
  eval_cmd->add_option("--out", out, "output file (default stdout)");

  // compare
  std::vector<std::string> report_paths;
  auto* compare_cmd = app.add_subcommand("compare", "comparison table from per-run report CSVs");
  compare_cmd->add_option("reports", report_paths, "report CSV files")->required();
  compare_cmd->add_option("--subset", subset, "whole | epithets");
  compare_cmd->add_option("--task", task_name, "pej | mis");
  compare_cmd->add_option("--format", format, "text | csv");
  compare_cmd->add_option("--out", out, "output file (default stdout)");

  // embed-analyze
  std::string embeddings_path;
  bool frequency = false;
  auto* embed_cmd = app.add_subcommand("embed-analyze", "anchor cosine similarity table and anchor frequencies");
  common.add_to(embed_cmd);
  embed_cmd->add_option("--corpus", corpus_path, "corpus JSONL with gold pejorative labels")->required();
  embed_cmd->add_option("--embeddings", embeddings_path, "embedding JSONL");
  embed_cmd->add_flag("--frequency", frequency, "report anchor frequencies instead");
  embed_cmd->add_option("--format", format, "text | csv");
  embed_cmd->add_option("--out", out, "output file (default stdout)");

  // prompts export / ingest
  auto* prompts_cmd = app.add_subcommand("prompts", "zero-shot LLM prompt batches");
  prompts_cmd->require_subcommand(1);
  std::string out_dir, batch_path, responses_path, model_name = "<model-name>";
  auto* export_cmd = prompts_cmd->add_subcommand("export", "one prompt per matched test tweet");
  common.add_to(export_cmd);
  export_cmd->add_option("--corpus", corpus_path, "corpus JSONL")->required();
  export_cmd->add_option("--out-dir", out_dir, "directory for prompts.jsonl and manifest.json")->required();
  export_cmd->add_option("--model", model_name, "model name recorded in the manifest");
  auto* ingest_cmd = prompts_cmd->add_subcommand("ingest", "join responses with prompts for review");
  ingest_cmd->add_option("--batch", batch_path, "prompts.jsonl from `prompts export`")->required();
  ingest_cmd->add_option("--responses", responses_path, "responses JSONL")->required();
  ingest_cmd->add_option("--corpus", corpus_path, "corpus JSONL for gold connotations");
  ingest_cmd->add_option("--schema", common.schema, "pejorativity | ami");
  ingest_cmd->add_option("--format", format, "text | csv");
  ingest_cmd->add_option("--out", out, "output file (default stdout)");

  // pipeline run
  auto* pipeline_cmd = app.add_subcommand("pipeline", "end-to-end experiment");
  pipeline_cmd->require_subcommand(1);
  auto* run_cmd = pipeline_cmd->add_subcommand("run", "match, predict, enrich, train, evaluate for every seed");
  run_cmd->add_option("--config", common.config, "TOML run configuration")->required();
  run_cmd->add_option("--out-dir", out_dir, "override output.dir");

  // fixtures generate
  auto* fixtures_cmd = app.add_subcommand("fixtures", "synthetic corpora");
  fixtures_cmd->require_subcommand(1);
  std::string kind = "directional";
  std::uint64_t fixture_seed = 0;
  auto* generate_cmd = fixtures_cmd->add_subcommand("generate", "write a synthetic corpus");
  common.add_to(generate_cmd, false);
  generate_cmd->add_option("--kind", kind, "counts | directional | geometry");
  generate_cmd->add_option("--seed", fixture_seed, "generator seed (default per kind)");
  generate_cmd->add_option("--out", out, "output JSONL (default stdout)");
  generate_cmd->add_option("--corpus", corpus_path, "geometry: corpus to plant embeddings for");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (print_config) {
      std::cout << default_config_toml();
      return 0;
    }
    if (app.get_subcommands().empty()) {
      std::cout << app.help();
      return 0;
    }

    if (*lex_validate) {
      check_format(format);
      auto cfg = common.resolve();
      auto entries = parse_lexicon_entries(io::read_file(cfg.lexicon), cfg.lexicon.string());
      auto violations = validate_entries(entries);
      std::size_t errors = 0, warnings = 0;
      std::string report = format == "csv" ? "word,kind,severity,message\n" : "";
      for (const auto& v : violations) {
        (v.severity == Severity::error ? errors : warnings)++;
        std::string sev = v.severity == Severity::error ? "error" : "warning";
        if (format == "csv")
          report += io::csv_escape(v.word) + "," + std::string(to_string(v.kind)) + "," + sev + "," +
                    io::csv_escape(v.message) + "\n";
        else
          report += sev + ": " + v.word + ": " + v.message + "\n";
      }
      if (format == "text")
        report += std::to_string(entries.size()) + " entries, " + std::to_string(errors) + " error(s), " +
                  std::to_string(warnings) + " warning(s)\n";
      std::cout << report;
      return (errors > 0 || (strict && warnings > 0)) ? 1 : 0;
    }

    if (*stats_cmd) {
      check_format(format);
      auto cfg = common.resolve();
      auto lexicon = load_lexicon(cfg.lexicon);
      auto corpus = load_corpus(corpus_path, cfg.schema, &lexicon);
      if (corpus.schema != Schema::pejorativity) throw ConfigError("corpus stats needs the pejorativity schema");
      auto report = corpus_stats(corpus);
      if (format == "csv") {
        std::cout << stats_csv(report);
      } else {
        std::cout << render_stats(report);
        try {
          std::printf("phi(misogynous, pejorative) = %.4f\n", phi_correlation(contingency(report)));
        } catch (const PreconditionError& e) {
          std::printf("phi(misogynous, pejorative) undefined: %s\n", e.what());
        }
      }
      return 0;
    }

    if (*alpha_cmd) {
      auto set = load_annotations(annotations_path, annotation_task);
      std::printf("task=%s annotators=%zu items=%zu labels=%zu alpha=%.6f\n", annotation_task.c_str(),
                  set.annotators().size(), set.items().size(), set.label_count(), krippendorff_alpha(set));
      return 0;
    }

    if (*subset_cmd) {
      auto cfg = common.resolve();
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      auto sub = filter_epithet_subset(corpus, matcher);
      emit(out, corpus_to_jsonl(sub));
      std::fprintf(stderr, "%zu of %zu tweets (%zu train, %zu test)\n", sub.size(), corpus.size(),
                   sub.split(Split::train).size(), sub.split(Split::test).size());
      return 0;
    }

    if (*match_cmd) {
      auto cfg = common.resolve();
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      emit(out, spans_jsonl(corpus, match_corpus(corpus, matcher)));
      return 0;
    }

    if (*align_cmd) {
      auto spans = load_spans(spans_path);
      auto toks = load_tokenizations(tokenizations_path);
      std::vector<nlohmann::json> rows;
      for (const auto& [id, list] : spans) {
        auto it = toks.find(id);
        if (it == toks.end()) throw CoverageError("no tokenization for tweet " + id);
        for (const auto& s : list) {
          auto r = align_subword_span(s, it->second);
          auto j = to_json(s);
          j["token_begin"] = r.begin;
          j["token_end"] = r.end;
          rows.push_back(j);
        }
      }
      emit(out, io::to_jsonl(rows));
      return 0;
    }

    if (*enrich_cmd) {
      auto cfg = common.resolve();
      if (!strategy.empty()) cfg.strategy = parse_strategy(strategy);
      if (!source.empty()) cfg.label_source = parse_label_source(source);
      if (single_anchor) cfg.single_anchor = true;
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      auto spans = spans_for(corpus, matcher, spans_path);
      AssignmentIndex assignments;
      if (cfg.label_source == LabelSource::gold) {
        if (corpus.schema != Schema::pejorativity)
          throw ConfigError("--source gold needs gold pejorative labels (pejorativity schema)");
        assignments = gold_assignments(corpus, spans);
      } else {
        if (predictions_path.empty()) throw ConfigError("--source predicted needs --predictions");
        auto preds = load_external_predictions(predictions_path, &corpus);
        assignments = assignments_from_labels(corpus, spans, labels_for_run(preds, Task::pej, run_id),
                                              LabelSource::predicted);
      }
      auto enriched = enrich_corpus(corpus, spans, assignments, cfg.strategy, cfg.label_source, matcher.lexicon(),
                                    SubstOptions{cfg.single_anchor});
      emit(out, enriched_to_jsonl(enriched));
      return 0;
    }

    if (*train_cmd) {
      auto cfg = common.resolve();
      auto task = parse_task(task_name);
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      std::optional<SpanIndex> spans;
      if (task == Task::pej) spans = spans_for(corpus, matcher, spans_path);
      auto model = train_baseline(corpus, task, cfg.baseline, seed, spans ? &*spans : nullptr);
      io::write_file(model_path, to_json(model).dump() + "\n");
      return 0;
    }

    if (*predict_cmd) {
      auto cfg = common.resolve();
      auto model = load_model(model_path);
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      std::optional<SpanIndex> spans;
      if (model.task == Task::pej) spans = spans_for(corpus, matcher, spans_path);
      auto preds = predict(model, corpus, model.task, run_id, spans ? &*spans : nullptr, parse_split_filter(split_name));
      emit(out, predictions_to_jsonl(preds));
      return 0;
    }

    if (*eval_cmd) {
      check_format(format);
      auto cfg = common.resolve();
      auto task = parse_task(task_name);
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      auto preds = load_external_predictions(predictions_path, &corpus);
      auto sub = parse_subset(subset);
      auto spans = match_corpus(corpus, matcher);
      std::set<std::string, std::less<>> keep;
      for (const auto& t : corpus.tweets) {
        bool matched = task == Task::pej ? !enrichment_spans(t, spans).empty() : !spans_of(spans, t.id).empty();
        if (matched) keep.insert(t.id);
      }
      bool restrict = task == Task::pej || sub == Subset::epithets;
      auto gold = gold_labels(corpus, task, parse_split(split_name), restrict ? &keep : nullptr);
      auto report = evaluate(gold, preds, task, parse_approach(approach),
                             source.empty() ? Source::na : parse_source(source), sub);
      emit(out, format == "csv" ? reports_to_csv({report}) : render_text(compare_pipelines({report})));
      return 0;
    }

    if (*compare_cmd) {
      check_format(format);
      std::vector<EvalReport> reports;
      for (const auto& p : report_paths)
        for (auto& r : reports_from_csv(io::read_file(p), p)) reports.push_back(std::move(r));
      auto want_subset = parse_subset(subset);
      auto want_task = parse_task(task_name);
      std::vector<EvalReport> chosen;
      for (auto& r : reports)
        if (r.subset == want_subset && r.task == want_task) chosen.push_back(std::move(r));
      if (chosen.empty()) throw CoverageError("no reports for task " + task_name + " and subset " + subset);
      auto table = compare_pipelines(chosen);
      emit(out, format == "csv" ? render_csv(table) : render_text(table));
      return 0;
    }

    if (*embed_cmd) {
      check_format(format);
      auto cfg = common.resolve();
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      if (frequency) {
        auto counts = anchor_frequency(corpus, matcher.lexicon(), matcher.lemmatizer());
        std::string text = format == "csv" ? "anchor,count\n" : "";
        for (const auto& [a, n] : counts) {
          if (format == "csv") text += io::csv_escape(a) + "," + std::to_string(n) + "\n";
          else text += a + "\t" + std::to_string(n) + "\n";
        }
        emit(out, text);
        return 0;
      }
      if (embeddings_path.empty()) throw ConfigError("embed-analyze needs --embeddings (or --frequency)");
      auto cells = anchor_similarity_table(corpus, matcher, load_embeddings(embeddings_path));
      if (format == "csv") {
        emit(out, similarity_table_csv(cells));
        return 0;
      }
      std::string text;
      char buf[160];
      for (const auto& [tag, s] : class_average_summary(cells)) {
        auto show = [](const std::optional<double>& v) { return v ? std::to_string(*v).substr(0, 6) : "-"; };
        std::snprintf(buf, sizeof buf, "%-10s pejorative anchors: pej %s neu %s | neutral anchors: pej %s neu %s\n",
                      std::string(to_string(tag)).c_str(), show(s.pejorative_anchor_in_pejorative).c_str(),
                      show(s.pejorative_anchor_in_neutral).c_str(), show(s.neutral_anchor_in_pejorative).c_str(),
                      show(s.neutral_anchor_in_neutral).c_str());
        text += buf;
      }
      emit(out, text);
      return 0;
    }

    if (*export_cmd) {
      auto cfg = common.resolve();
      auto matcher = make_matcher(cfg);
      auto corpus = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
      auto batch = export_prompt_batch(corpus, matcher);
      batch.model = model_name;
      if (batch.items.empty()) std::fprintf(stderr, "warning: no test tweet matches the lexicon; empty batch\n");
      io::write_file(fs::path(out_dir) / "prompts.jsonl", batch_to_jsonl(batch));
      io::write_file(fs::path(out_dir) / "manifest.json", manifest_json(batch).dump(2) + "\n");
      std::fprintf(stderr, "%zu prompts\n", batch.items.size());
      return 0;
    }

    if (*ingest_cmd) {
      check_format(format);
      auto batch = load_prompt_batch(batch_path);
      auto records = load_responses(responses_path, batch);
      std::optional<Corpus> corpus;
      if (!corpus_path.empty())
        corpus = load_corpus(corpus_path, common.schema.empty() ? Schema::pejorativity : parse_schema(common.schema),
                             nullptr);
      auto rows = review_rows(records, corpus ? &*corpus : nullptr);
      emit(out, format == "csv" ? render_review_csv(rows) : render_review_text(rows));
      return 0;
    }

    if (*run_cmd) {
      auto cfg = load_run_config(common.config);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      auto result = run_pipeline(cfg);
      for (const auto& [_, table] : result.tables) std::cout << render_text(table) << "\n";
      return 0;
    }

    if (*generate_cmd) {
      auto cfg = common.resolve();
      auto matcher = make_matcher(cfg);
      Corpus corpus;
      if (kind == "counts") {
        corpus = synthetic::label_counts_fixture(matcher, fixture_seed ? fixture_seed : 7);
      } else if (kind == "directional") {
        synthetic::DirectionalOptions opt;
        if (fixture_seed) opt.seed = fixture_seed;
        corpus = synthetic::directional_corpus(matcher, opt);
      } else if (kind == "geometry") {
        if (corpus_path.empty()) throw ConfigError("--kind geometry needs --corpus");
        auto source = load_corpus(corpus_path, cfg.schema, &matcher.lexicon());
        synthetic::GeometryOptions opt;
        if (fixture_seed) opt.seed = fixture_seed;
        std::vector<nlohmann::json> rows;
        for (const auto& r : synthetic::geometry_embeddings(source, matcher, opt)) rows.push_back(to_json(r));
        emit(out, io::to_jsonl(rows));
        return 0;
      } else {
        throw ConfigError("--kind must be counts, directional or geometry");
      }
      emit(out, corpus_to_jsonl(corpus));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
