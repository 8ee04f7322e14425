#pragma once

// Locating lexicon words in tweets (lemmatization, then fuzzy comparison of
// lemmas) and mapping the resulting character spans onto subword tokens.
//
// Offsets everywhere are counted in Unicode scalar values, never bytes.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pejor/error.hpp"
#include "pejor/io.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/utf8.hpp"

namespace pejor {

struct MatchSpan {
  std::string tweet_id;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string surface;
  std::string headword;

  bool operator==(const MatchSpan&) const = default;
};

inline nlohmann::json to_json(const MatchSpan& s) {
  return {{"tweet_id", s.tweet_id},
          {"char_start", s.char_start},
          {"char_end", s.char_end},
          {"surface", s.surface},
          {"headword", s.headword}};
}

inline MatchSpan match_span_from_json(const nlohmann::json& j, const std::string& where) {
  return {io::field<std::string>(j, "tweet_id", where), io::field<std::size_t>(j, "char_start", where),
          io::field<std::size_t>(j, "char_end", where), io::field<std::string>(j, "surface", where),
          io::field<std::string>(j, "headword", where)};
}

// --- lemmatization ----------------------------------------------------------

enum class LemmatizerMode {
  external_table,  // form -> lemma lookup, unknown forms lowercased
  suffix_rules,    // built-in Italian feminine plural rules
  identity,        // lowercase only
};

inline std::string_view to_string(LemmatizerMode m) {
  switch (m) {
    case LemmatizerMode::external_table: return "external_table";
    case LemmatizerMode::suffix_rules: return "suffix_rules";
    case LemmatizerMode::identity: return "identity";
  }
  return "identity";
}

inline LemmatizerMode parse_lemmatizer_mode(std::string_view s) {
  if (s == "external_table") return LemmatizerMode::external_table;
  if (s == "suffix_rules") return LemmatizerMode::suffix_rules;
  if (s == "identity") return LemmatizerMode::identity;
  throw ConfigError("unknown lemmatizer mode \"" + std::string(s) + "\"");
}

struct LemmatizerConfig {
  LemmatizerMode mode = LemmatizerMode::suffix_rules;
  std::optional<std::filesystem::path> table_path;
};

namespace detail {

inline bool ends_with(const std::u32string& s, std::u32string_view suffix) {
  return s.size() >= suffix.size() && std::u32string_view(s).substr(s.size() - suffix.size()) == suffix;
}

// Rules are tried in order; the first whose suffix and minimum length match
// wins. The -e rule needs five letters so short words like "cane" or "le" are
// left alone.
struct SuffixRule {
  std::u32string_view from;
  std::u32string_view to;
  std::size_t min_length;
};

inline constexpr SuffixRule kItalianRules[] = {
    {U"acce", U"accia", 5},
    {U"che", U"ca", 4},
    {U"ghe", U"ga", 4},
    {U"e", U"a", 5},
};

inline std::u32string apply_suffix_rules(std::u32string word) {
  for (const auto& r : kItalianRules) {
    if (word.size() >= r.min_length && ends_with(word, r.from)) {
      word.resize(word.size() - r.from.size());
      word += r.to;
      return word;
    }
  }
  return word;
}

}  // namespace detail

class Lemmatizer {
 public:
  Lemmatizer() = default;

  explicit Lemmatizer(const LemmatizerConfig& config) : mode_(config.mode) {
    if (mode_ != LemmatizerMode::external_table) return;
    if (!config.table_path) throw ConfigError("external_table lemmatizer requires a table path");
    load_table(io::read_file(*config.table_path), config.table_path->string());
  }

  static Lemmatizer from_table(std::string_view tsv) {
    Lemmatizer l;
    l.mode_ = LemmatizerMode::external_table;
    l.load_table(tsv, "<lemma table>");
    return l;
  }

  LemmatizerMode mode() const { return mode_; }

  std::u32string lemma(std::u32string_view token) const {
    auto lowered = utf8::lower(token);
    switch (mode_) {
      case LemmatizerMode::identity:
        return lowered;
      case LemmatizerMode::suffix_rules:
        return detail::apply_suffix_rules(std::move(lowered));
      case LemmatizerMode::external_table: {
        auto it = table_.find(lowered);
        return it == table_.end() ? lowered : it->second;
      }
    }
    return lowered;
  }

  std::string lemma(std::string_view token) const { return utf8::encode(lemma(utf8::decode(token))); }

 private:
  void load_table(std::string_view content, const std::string& origin) {
    io::for_each_line(content, [&](std::string_view line, std::size_t lineno) {
      if (line.front() == '#') return;
      auto cols = io::split(line, '\t');
      if (cols.size() != 2)
        throw ParseError(origin + ":" + std::to_string(lineno) + ": expected form<TAB>lemma");
      table_[utf8::lower(utf8::decode(io::trim(cols[0])))] = utf8::lower(utf8::decode(io::trim(cols[1])));
    });
  }

  LemmatizerMode mode_ = LemmatizerMode::suffix_rules;
  std::map<std::u32string, std::u32string> table_;
};

inline std::string lemma(std::string_view token, const LemmatizerConfig& config) {
  return Lemmatizer(config).lemma(token);
}

// --- tokens and edit distance -----------------------------------------------

struct WordToken {
  std::u32string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

// Maximal runs of word characters.
inline std::vector<WordToken> word_tokens(std::u32string_view text) {
  std::vector<WordToken> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!utf8::is_word_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && utf8::is_word_char(text[j])) ++j;
    out.push_back({std::u32string(text.substr(i, j - i)), i, j});
    i = j;
  }
  return out;
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// --- matching ---------------------------------------------------------------

struct MatcherOptions {
  std::size_t max_edit = 1;
  // Fuzzy comparison only when both the lemma and the headword are this long.
  std::size_t min_fuzzy_length = 4;
};

class Matcher {
 public:
  Matcher(Lexicon lexicon, Lemmatizer lemmatizer, MatcherOptions options = {})
      : lexicon_(std::move(lexicon)), lemmatizer_(std::move(lemmatizer)), options_(options) {
    for (const auto& [w, _] : lexicon_) headwords_.emplace_back(utf8::decode(w), w);
  }

  Matcher(Lexicon lexicon, const LemmatizerConfig& config, MatcherOptions options = {})
      : Matcher(std::move(lexicon), Lemmatizer(config), options) {}

  const Lexicon& lexicon() const { return lexicon_; }
  const Lemmatizer& lemmatizer() const { return lemmatizer_; }
  const MatcherOptions& options() const { return options_; }

  // Headword for one word token, if any. Exact lemma equality wins; otherwise
  // the closest headword within max_edit, ties broken alphabetically.
  std::optional<std::string> match_token(std::u32string_view token) const {
    auto lem = lemmatizer_.lemma(token);
    const std::string* best = nullptr;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (const auto& [hw32, hw] : headwords_) {
      if (lem == hw32) return hw;
      if (options_.max_edit == 0) continue;
      if (lem.size() < options_.min_fuzzy_length || hw32.size() < options_.min_fuzzy_length) continue;
      auto len_gap = lem.size() > hw32.size() ? lem.size() - hw32.size() : hw32.size() - lem.size();
      if (len_gap > options_.max_edit) continue;
      auto d = levenshtein(lem, hw32);
      if (d <= options_.max_edit && d < best_dist) {
        best_dist = d;
        best = &hw;
      }
    }
    if (best) return *best;
    return std::nullopt;
  }

  std::vector<MatchSpan> find(std::string_view text, std::string_view tweet_id = {}) const {
    auto t32 = utf8::decode(text);
    std::vector<MatchSpan> out;
    for (const auto& tok : word_tokens(t32)) {
      if (auto hw = match_token(tok.text)) {
        out.push_back({std::string(tweet_id), tok.start, tok.end, utf8::encode(tok.text), *hw});
      }
    }
    return out;
  }

 private:
  Lexicon lexicon_;
  Lemmatizer lemmatizer_;
  MatcherOptions options_;
  std::vector<std::pair<std::u32string, std::string>> headwords_;
};

inline std::vector<MatchSpan> find_matches(std::string_view text, const Lexicon& lexicon,
                                           const LemmatizerConfig& config, std::size_t max_edit = 1) {
  MatcherOptions opts;
  opts.max_edit = max_edit;
  return Matcher(lexicon, config, opts).find(text);
}

// Keeps the spans a label-bearing consumer should act on: those of the tweet's
// target word when it has one, otherwise all of them.
inline std::vector<MatchSpan> target_spans(const std::vector<MatchSpan>& spans,
                                           const std::optional<std::string>& target_word) {
  if (!target_word) return spans;
  std::vector<MatchSpan> out;
  for (const auto& s : spans)
    if (s.headword == *target_word) out.push_back(s);
  return out;
}

// --- subword alignment ------------------------------------------------------

struct Piece {
  std::string piece;
  std::size_t char_start = 0;
  std::size_t char_end = 0;

  bool operator==(const Piece&) const = default;
};

struct Tokenization {
  std::string id;
  std::vector<Piece> pieces;
};

// Half-open [begin, end) over token indices.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const TokenRange&) const = default;
};

inline void validate_tokenization(const Tokenization& t) {
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const auto& p = t.pieces[i];
    if (p.char_start >= p.char_end)
      throw ValidationError("tokenization " + t.id + ": piece " + std::to_string(i) + " has an empty span");
    if (i > 0 && p.char_start < prev_end)
      throw ValidationError("tokenization " + t.id + ": piece " + std::to_string(i) +
                            " overlaps or precedes its predecessor");
    prev_end = p.char_end;
  }
}

inline Tokenization tokenization_from_json(const nlohmann::json& j, const std::string& where) {
  Tokenization t;
  t.id = io::field<std::string>(j, "id", where);
  const auto pieces = io::field<nlohmann::json>(j, "pieces", where);
  if (!pieces.is_array()) throw ParseError(where + ": \"pieces\" must be an array");
  for (const auto& p : pieces) {
    if (!p.is_array() || p.size() != 3 || !p[0].is_string() || !p[1].is_number_unsigned() ||
        !p[2].is_number_unsigned())
      throw ParseError(where + ": each piece must be [piece, start, end]");
    t.pieces.push_back({p[0].get<std::string>(), p[1].get<std::size_t>(), p[2].get<std::size_t>()});
  }
  validate_tokenization(t);
  return t;
}

inline nlohmann::json to_json(const Tokenization& t) {
  auto pieces = nlohmann::json::array();
  for (const auto& p : t.pieces) pieces.push_back({p.piece, p.char_start, p.char_end});
  return {{"id", t.id}, {"pieces", pieces}};
}

inline std::map<std::string, Tokenization> load_tokenizations(const std::filesystem::path& path) {
  std::map<std::string, Tokenization> out;
  std::size_t n = 0;
  for (const auto& row : io::read_jsonl(path)) {
    auto t = tokenization_from_json(row, path.string() + " record " + std::to_string(++n));
    auto id = t.id;
    out.emplace(std::move(id), std::move(t));
  }
  return out;
}

// Minimal contiguous run of pieces overlapping [char_start, char_end). Gaps
// between pieces (whitespace inside a multi-word span) are not required to be
// covered.
inline TokenRange align_subword_span(const MatchSpan& span, const Tokenization& tokenization) {
  std::optional<std::size_t> first;
  std::size_t last = 0;
  for (std::size_t i = 0; i < tokenization.pieces.size(); ++i) {
    const auto& p = tokenization.pieces[i];
    if (p.char_end <= span.char_start || p.char_start >= span.char_end) continue;
    if (!first) first = i;
    last = i;
  }
  if (!first)
    throw ValidationError("no token overlaps span [" + std::to_string(span.char_start) + ", " +
                          std::to_string(span.char_end) + ") of " + span.tweet_id);
  return {*first, last + 1};
}

}  // namespace pejor
