#pragma once

// Zero-shot disambiguation prompts for instruction-tuned LLMs: byte-exact
// prompt construction, batch export with the generation settings, and
// ingestion of generated answers for manual review.

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/corpus.hpp"
#include "pejor/enrichment.hpp"
#include "pejor/error.hpp"
#include "pejor/io.hpp"
#include "pejor/matcher.hpp"

namespace pejor {

struct GenerationConfig {
  double temperature = 0.2;
  int num_beams = 4;
  double top_p = 0.75;
  int max_new_tokens = 300;
  double repetition_penalty = 1.8;

  bool operator==(const GenerationConfig&) const = default;
};

inline nlohmann::json to_json(const GenerationConfig& g) {
  return {{"temperature", g.temperature},
          {"num_beams", g.num_beams},
          {"top_p", g.top_p},
          {"max_new_tokens", g.max_new_tokens},
          {"repetition_penalty", g.repetition_penalty}};
}

inline GenerationConfig generation_config_from_json(const nlohmann::json& j, const std::string& where) {
  return {io::field<double>(j, "temperature", where), io::field<int>(j, "num_beams", where),
          io::field<double>(j, "top_p", where), io::field<int>(j, "max_new_tokens", where),
          io::field<double>(j, "repetition_penalty", where)};
}

inline constexpr std::string_view kPromptHead =
    "[INST] Di seguito \xC3\xA8 riportata un'istruzione che descrive un task. Scrivete una risposta che completi "
    "adeguatamente la richiesta.\n"
    "### Istruzione:\n"
    "Qual \xC3\xA8 il significato della parola \"";
inline constexpr std::string_view kPromptMid = "\" in questa frase?\n\"";
inline constexpr std::string_view kPromptTail = "\"[/INST]\n### Risposta:\n";

// Slots are inserted verbatim; no escaping.
inline std::string build_prompt(std::string_view word, std::string_view sentence) {
  if (word.empty() || sentence.empty()) throw PreconditionError("build_prompt needs a word and a sentence");
  std::string out;
  out.reserve(kPromptHead.size() + word.size() + kPromptMid.size() + sentence.size() + kPromptTail.size());
  out += kPromptHead;
  out += word;
  out += kPromptMid;
  out += sentence;
  out += kPromptTail;
  return out;
}

struct PromptItem {
  std::string id;
  std::string word;
  std::string sentence;
  std::string prompt;

  bool operator==(const PromptItem&) const = default;
};

struct PromptBatch {
  std::vector<PromptItem> items;
  GenerationConfig generation;
  std::string model = "<model-name>";
};

inline nlohmann::json to_json(const PromptItem& p) {
  return {{"id", p.id}, {"word", p.word}, {"sentence", p.sentence}, {"prompt", p.prompt}};
}

inline nlohmann::json manifest_json(const PromptBatch& b) {
  return {{"generation_config", to_json(b.generation)},
          {"model", b.model},
          {"prompt_count", b.items.size()},
          {"template", "zero-shot-disambiguation-it/v1"}};
}

// One prompt per test tweet with a matched word; the word asked about is the
// surface form of the first target match.
inline PromptBatch export_prompt_batch(const Corpus& corpus, const Matcher& matcher, GenerationConfig config = {}) {
  PromptBatch batch;
  batch.generation = config;
  for (const auto& t : corpus.tweets) {
    if (t.split != Split::test) continue;
    auto spans = target_spans(matcher.find(t.text, t.id), t.target_word);
    if (spans.empty()) continue;
    const auto& word = spans.front().surface;
    batch.items.push_back({t.id, word, t.text, build_prompt(word, t.text)});
  }
  return batch;
}

inline std::string batch_to_jsonl(const PromptBatch& b) {
  std::vector<nlohmann::json> rows;
  for (const auto& p : b.items) rows.push_back(to_json(p));
  return io::to_jsonl(rows);
}

inline std::vector<PromptItem> load_prompt_batch(const std::filesystem::path& path) {
  std::vector<PromptItem> out;
  std::size_t n = 0;
  for (const auto& row : io::read_jsonl(path)) {
    auto where = path.string() + " record " + std::to_string(++n);
    out.push_back({io::field<std::string>(row, "id", where), io::field<std::string>(row, "word", where),
                   io::field<std::string>(row, "sentence", where), io::field<std::string>(row, "prompt", where)});
  }
  return out;
}

inline PromptBatch load_manifest(const std::filesystem::path& path, std::vector<PromptItem> items = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  PromptBatch b;
  b.items = std::move(items);
  b.generation = generation_config_from_json(io::field<nlohmann::json>(j, "generation_config", path.string()),
                                             path.string());
  b.model = io::field<std::string>(j, "model", path.string());
  return b;
}

struct ResponseRecord {
  std::string id;
  std::string word;
  std::string sentence;
  std::string prompt;
  std::string response;
  std::string model;
};

// Joins responses {"id","model","response"} with the exported prompts.
// Throws ValidationError on an id not in the batch and IntegrityError when a
// stored prompt does not rebuild from its (word, sentence).
inline std::vector<ResponseRecord> ingest_responses(std::string_view content, const std::vector<PromptItem>& batch,
                                                    const std::string& origin = "<responses>") {
  std::map<std::string, const PromptItem*, std::less<>> by_id;
  for (const auto& p : batch) by_id[p.id] = &p;
  std::vector<ResponseRecord> out;
  std::size_t n = 0;
  for (const auto& row : io::parse_jsonl(content, origin)) {
    auto where = origin + " record " + std::to_string(++n);
    auto id = io::field<std::string>(row, "id", where);
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError(where + ": response for unknown prompt id \"" + id + "\"");
    const auto& p = *it->second;
    if (build_prompt(p.word, p.sentence) != p.prompt)
      throw IntegrityError(where + ": stored prompt for \"" + id + "\" does not match its word and sentence");
    out.push_back({id, p.word, p.sentence, p.prompt, io::field<std::string>(row, "response", where),
                   io::field<std::string>(row, "model", where)});
  }
  return out;
}

inline std::vector<ResponseRecord> load_responses(const std::filesystem::path& path,
                                                  const std::vector<PromptItem>& batch) {
  return ingest_responses(io::read_file(path), batch, path.string());
}

struct ReviewRow {
  std::string id;
  std::string tweet;
  std::string word;
  std::string gold;         // "pejorative", "neutral" or "" when unknown
  std::string translation;  // left for the reviewer
  std::string response;
  std::string model;
};

inline std::vector<ReviewRow> review_rows(const std::vector<ResponseRecord>& records, const Corpus* corpus = nullptr) {
  std::vector<ReviewRow> out;
  for (const auto& r : records) {
    std::string gold;
    if (corpus)
      if (const auto* t = corpus->find(r.id); t && t->pejorative)
        gold = std::string(to_string(connotation_of(*t->pejorative)));
    out.push_back({r.id, r.sentence, r.word, gold, "", r.response, r.model});
  }
  return out;
}

inline std::string render_review_csv(const std::vector<ReviewRow>& rows) {
  std::string out = "id,tweet,word,gold,translation,response,model\n";
  for (const auto& r : rows)
    out += io::csv_escape(r.id) + "," + io::csv_escape(r.tweet) + "," + io::csv_escape(r.word) + "," +
           io::csv_escape(r.gold) + "," + io::csv_escape(r.translation) + "," + io::csv_escape(r.response) + "," +
           io::csv_escape(r.model) + "\n";
  return out;
}

inline std::string render_review_text(const std::vector<ReviewRow>& rows) {
  std::string out;
  std::size_t k = 0;
  for (const auto& r : rows) {
    out += std::to_string(++k) + ". [" + r.id + "] " + r.tweet + "\n";
    out += "   word: " + r.word + (r.gold.empty() ? "" : "  gold: " + r.gold) + "\n";
    out += "   translation: " + (r.translation.empty() ? std::string("-") : r.translation) + "\n";
    out += "   " + r.model + ": " + r.response + "\n";
  }
  return out;
}

}  // namespace pejor
