#pragma once

// The polysemic-epithet lexicon: one entry per headword with its neutral and
// pejorative glosses and the unambiguous anchor words that pin down each sense.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/error.hpp"
#include "pejor/io.hpp"
#include "pejor/utf8.hpp"

namespace pejor {

enum class Connotation { neutral, pejorative };

inline std::string_view to_string(Connotation c) {
  return c == Connotation::neutral ? "neutral" : "pejorative";
}

inline Connotation parse_connotation(std::string_view s) {
  if (s == "neutral") return Connotation::neutral;
  if (s == "pejorative") return Connotation::pejorative;
  throw ParseError("unknown connotation \"" + std::string(s) + "\"");
}

inline Connotation connotation_of(bool pejorative) {
  return pejorative ? Connotation::pejorative : Connotation::neutral;
}

struct LexiconEntry {
  std::string word;
  std::string literal_gloss;
  std::string pejorative_gloss;
  std::vector<std::string> neutral_anchors;
  std::vector<std::string> pejorative_anchors;

  const std::vector<std::string>& anchors(Connotation c) const {
    return c == Connotation::neutral ? neutral_anchors : pejorative_anchors;
  }

  bool operator==(const LexiconEntry&) const = default;
};

class Lexicon {
 public:
  Lexicon() = default;

  // Throws ValidationError on a duplicate headword.
  void add(LexiconEntry entry) {
    auto key = entry.word;
    if (!entries_.emplace(key, std::move(entry)).second)
      throw ValidationError("duplicate lexicon word \"" + key + "\"");
  }

  // Case-insensitive on the query.
  const LexiconEntry* find(std::string_view word) const {
    auto it = entries_.find(utf8::lower(word));
    return it == entries_.end() ? nullptr : &it->second;
  }

  const LexiconEntry& at(std::string_view word) const {
    if (const auto* e = find(word)) return *e;
    throw UnknownWordError("\"" + std::string(word) + "\" is not a lexicon word");
  }

  bool contains(std::string_view word) const { return find(word) != nullptr; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Entries in headword order.
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<std::string> words() const {
    std::vector<std::string> out;
    for (const auto& [w, _] : entries_) out.push_back(w);
    return out;
  }

  bool operator==(const Lexicon&) const = default;

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

inline const std::vector<std::string>& anchors_for(const Lexicon& lexicon, std::string_view word,
                                                   Connotation connotation) {
  return lexicon.at(word).anchors(connotation);
}

// --- validation -------------------------------------------------------------

enum class Severity { error, warning };

struct Violation {
  enum class Kind {
    empty_word,
    word_not_lowercase,
    word_has_whitespace,
    duplicate_word,
    empty_anchor_list,
    empty_anchor,
    anchor_overlap,
    anchor_is_headword,
    anchor_is_other_headword,
  };

  std::string word;
  Kind kind;
  Severity severity;
  std::string message;
};

inline std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::empty_word: return "empty_word";
    case Violation::Kind::word_not_lowercase: return "word_not_lowercase";
    case Violation::Kind::word_has_whitespace: return "word_has_whitespace";
    case Violation::Kind::duplicate_word: return "duplicate_word";
    case Violation::Kind::empty_anchor_list: return "empty_anchor_list";
    case Violation::Kind::empty_anchor: return "empty_anchor";
    case Violation::Kind::anchor_overlap: return "anchor_overlap";
    case Violation::Kind::anchor_is_headword: return "anchor_is_headword";
    case Violation::Kind::anchor_is_other_headword: return "anchor_is_other_headword";
  }
  return "unknown";
}

// Checks every entry invariant over a raw entry list (duplicates included).
// Anchors that coincide with a headword are warnings: Table-style lexicons may
// legitimately define a neutral sense by the word itself.
inline std::vector<Violation> validate_entries(const std::vector<LexiconEntry>& entries) {
  std::vector<Violation> out;
  auto add = [&](const std::string& w, Violation::Kind k, Severity s, std::string msg) {
    out.push_back({w, k, s, std::move(msg)});
  };
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> headwords;
  for (const auto& e : entries) headwords.insert(e.word);

  for (const auto& e : entries) {
    if (e.word.empty()) add(e.word, Violation::Kind::empty_word, Severity::error, "empty headword");
    if (utf8::lower(e.word) != e.word)
      add(e.word, Violation::Kind::word_not_lowercase, Severity::error, "headword is not lowercase");
    if (utf8::has_space(e.word))
      add(e.word, Violation::Kind::word_has_whitespace, Severity::error, "headword contains whitespace");
    if (!seen.insert(e.word).second)
      add(e.word, Violation::Kind::duplicate_word, Severity::error, "duplicate headword");

    for (auto c : {Connotation::neutral, Connotation::pejorative}) {
      const auto& list = e.anchors(c);
      if (list.empty())
        add(e.word, Violation::Kind::empty_anchor_list, Severity::error,
            std::string(to_string(c)) + " anchor list is empty");
      for (const auto& a : list) {
        if (a.empty()) {
          add(e.word, Violation::Kind::empty_anchor, Severity::error, "empty anchor string");
        } else if (a == e.word) {
          add(e.word, Violation::Kind::anchor_is_headword, Severity::warning,
              std::string(to_string(c)) + " anchor \"" + a + "\" equals the headword");
        } else if (headwords.contains(a)) {
          add(e.word, Violation::Kind::anchor_is_other_headword, Severity::warning,
              "anchor \"" + a + "\" is itself a lexicon headword");
        }
      }
    }
    for (const auto& a : e.neutral_anchors) {
      if (std::find(e.pejorative_anchors.begin(), e.pejorative_anchors.end(), a) !=
          e.pejorative_anchors.end())
        add(e.word, Violation::Kind::anchor_overlap, Severity::error,
            "anchor \"" + a + "\" is both neutral and pejorative");
    }
  }
  return out;
}

inline std::vector<Violation> validate_lexicon(const Lexicon& lexicon) {
  std::vector<LexiconEntry> entries;
  for (const auto& [_, e] : lexicon) entries.push_back(e);
  return validate_entries(entries);
}

// --- file formats -----------------------------------------------------------

inline constexpr std::string_view kLexiconHeader =
    "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors";

namespace detail {

inline std::vector<std::string> split_anchors(std::string_view s) {
  std::vector<std::string> out;
  if (io::trim(s).empty()) return out;
  for (const auto& part : io::split(s, '|')) out.emplace_back(io::trim(part));
  return out;
}

inline std::vector<LexiconEntry> parse_lexicon_tsv(std::string_view content, const std::string& origin) {
  std::vector<LexiconEntry> entries;
  bool header_seen = false;
  io::for_each_line(content, [&](std::string_view line, std::size_t lineno) {
    auto where = origin + ":" + std::to_string(lineno);
    if (!header_seen) {
      if (io::trim(line) != kLexiconHeader) throw ParseError(where + ": unexpected lexicon header");
      header_seen = true;
      return;
    }
    auto cols = io::split(line, '\t');
    if (cols.size() != 5)
      throw ParseError(where + ": expected 5 tab-separated columns, got " + std::to_string(cols.size()));
    entries.push_back({std::string(io::trim(cols[0])), std::string(io::trim(cols[1])),
                       std::string(io::trim(cols[2])), split_anchors(cols[3]), split_anchors(cols[4])});
  });
  if (!header_seen) throw ParseError(origin + ": empty lexicon file");
  return entries;
}

inline std::vector<LexiconEntry> parse_lexicon_json(std::string_view content, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError(origin + ": lexicon JSON must be an array");
  std::vector<LexiconEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    auto where = origin + "[" + std::to_string(i) + "]";
    const auto& o = doc[i];
    entries.push_back({io::field<std::string>(o, "word", where), io::field<std::string>(o, "literal_gloss", where),
                       io::field<std::string>(o, "pejorative_gloss", where),
                       io::field<std::vector<std::string>>(o, "neutral_anchors", where),
                       io::field<std::vector<std::string>>(o, "pejorative_anchors", where)});
  }
  return entries;
}

}  // namespace detail

struct LexiconLoadOptions {
  // Also reject warning-severity violations.
  bool strict = false;
};

inline Lexicon build_lexicon(const std::vector<LexiconEntry>& entries, const std::string& origin,
                             LexiconLoadOptions options = {}) {
  for (const auto& v : validate_entries(entries)) {
    if (v.severity == Severity::error || options.strict)
      throw ValidationError(origin + ": \"" + v.word + "\": " + v.message);
  }
  Lexicon lex;
  for (const auto& e : entries) lex.add(e);
  return lex;
}

// Raw rows, unvalidated. Accepts the TSV form or, when the content starts
// with '[', the JSON form.
inline std::vector<LexiconEntry> parse_lexicon_entries(std::string_view content,
                                                       const std::string& origin = "<lexicon>") {
  auto body = io::trim(content);
  if (body.empty()) throw ParseError(origin + ": empty lexicon file");
  auto entries = body.front() == '[' ? detail::parse_lexicon_json(content, origin)
                                     : detail::parse_lexicon_tsv(content, origin);
  if (entries.empty()) throw ParseError(origin + ": lexicon has no entries");
  return entries;
}

inline Lexicon parse_lexicon(std::string_view content, const std::string& origin = "<lexicon>",
                             LexiconLoadOptions options = {}) {
  return build_lexicon(parse_lexicon_entries(content, origin), origin, options);
}

inline Lexicon load_lexicon(const std::filesystem::path& path, LexiconLoadOptions options = {}) {
  return parse_lexicon(io::read_file(path), path.string(), options);
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string serialize_tsv(const Lexicon& lexicon) {
  std::string out(kLexiconHeader);
  out += '\n';
  for (const auto& [_, e] : lexicon) {
    out += e.word + '\t' + e.literal_gloss + '\t' + e.pejorative_gloss + '\t' + join(e.neutral_anchors, "|") +
           '\t' + join(e.pejorative_anchors, "|") + '\n';
  }
  return out;
}

inline nlohmann::json to_json(const Lexicon& lexicon) {
  auto arr = nlohmann::json::array();
  for (const auto& [_, e] : lexicon) {
    arr.push_back({{"word", e.word},
                   {"literal_gloss", e.literal_gloss},
                   {"pejorative_gloss", e.pejorative_gloss},
                   {"neutral_anchors", e.neutral_anchors},
                   {"pejorative_anchors", e.pejorative_anchors}});
  }
  return arr;
}

}  // namespace pejor
