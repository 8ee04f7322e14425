#pragma once

// Annotated tweet corpora (word-level pejorativity plus sentence-level
// misogyny, or misogyny only), their summary statistics and epithet subsets.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/error.hpp"
#include "pejor/io.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/matcher.hpp"

namespace pejor {

enum class Split { train, test };

inline std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw ParseError("unknown split \"" + std::string(s) + "\"");
}

// pejorativity: both labels on every record. ami: misogyny only.
enum class Schema { pejorativity, ami };

inline std::string_view to_string(Schema s) { return s == Schema::pejorativity ? "pejorativity" : "ami"; }

inline Schema parse_schema(std::string_view s) {
  if (s == "pejorativity") return Schema::pejorativity;
  if (s == "ami") return Schema::ami;
  throw ConfigError("unknown corpus schema \"" + std::string(s) + "\"");
}

struct AnnotatedTweet {
  std::string id;
  std::string text;
  std::optional<std::string> target_word;
  std::optional<bool> pejorative;
  std::optional<bool> misogynous;
  Split split = Split::train;

  bool operator==(const AnnotatedTweet&) const = default;
};

struct Corpus {
  Schema schema = Schema::pejorativity;
  std::vector<AnnotatedTweet> tweets;

  std::size_t size() const { return tweets.size(); }
  bool empty() const { return tweets.empty(); }

  std::vector<AnnotatedTweet> split(Split s) const {
    std::vector<AnnotatedTweet> out;
    for (const auto& t : tweets)
      if (t.split == s) out.push_back(t);
    return out;
  }

  const AnnotatedTweet* find(std::string_view id) const {
    for (const auto& t : tweets)
      if (t.id == id) return &t;
    return nullptr;
  }

  bool operator==(const Corpus&) const = default;
};

namespace detail {

inline std::optional<bool> optional_bool(const nlohmann::json& o, const char* key, const std::string& where) {
  if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
  if (!o.at(key).is_boolean()) throw ParseError(where + ": field \"" + key + "\" must be bool or null");
  return o.at(key).get<bool>();
}

}  // namespace detail

inline AnnotatedTweet tweet_from_json(const nlohmann::json& o, const std::string& where) {
  if (!o.is_object()) throw ParseError(where + ": expected a JSON object");
  AnnotatedTweet t;
  t.id = io::field<std::string>(o, "id", where);
  t.text = io::field<std::string>(o, "text", where);
  if (o.contains("target_word") && !o.at("target_word").is_null())
    t.target_word = io::field<std::string>(o, "target_word", where);
  t.pejorative = detail::optional_bool(o, "pejorative", where);
  t.misogynous = detail::optional_bool(o, "misogynous", where);
  t.split = parse_split(io::field<std::string>(o, "split", where));
  return t;
}

inline nlohmann::json to_json(const AnnotatedTweet& t) {
  nlohmann::json o;
  o["id"] = t.id;
  o["text"] = t.text;
  o["target_word"] = t.target_word ? nlohmann::json(*t.target_word) : nlohmann::json(nullptr);
  o["pejorative"] = t.pejorative ? nlohmann::json(*t.pejorative) : nlohmann::json(nullptr);
  o["misogynous"] = t.misogynous ? nlohmann::json(*t.misogynous) : nlohmann::json(nullptr);
  o["split"] = to_string(t.split);
  return o;
}

// Enforces the record invariants for the declared schema. The lexicon is
// used to check target words; pass nullptr to skip that check.
inline void validate_corpus(const Corpus& corpus, const Lexicon* lexicon) {
  std::set<std::string, std::less<>> ids;
  for (const auto& t : corpus.tweets) {
    auto where = "record \"" + t.id + "\"";
    if (t.id.empty()) throw ValidationError("record with empty id");
    if (!ids.insert(t.id).second) throw ValidationError(where + ": duplicate id");
    if (t.text.empty()) throw ValidationError(where + ": empty text");
    if (t.target_word && lexicon && !lexicon->contains(*t.target_word))
      throw ValidationError(where + ": target_word \"" + *t.target_word + "\" is not a lexicon headword");
    if (!t.misogynous) throw ValidationError(where + ": missing misogynous label");
    if (corpus.schema == Schema::pejorativity && !t.pejorative)
      throw ValidationError(where + ": missing pejorative label");
    if (corpus.schema == Schema::ami && t.pejorative)
      throw ValidationError(where + ": ami records carry no pejorative label");
  }
}

inline Corpus parse_corpus(std::string_view content, Schema schema, const Lexicon* lexicon,
                           const std::string& origin = "<corpus>") {
  Corpus c;
  c.schema = schema;
  std::size_t n = 0;
  for (const auto& row : io::parse_jsonl(content, origin))
    c.tweets.push_back(tweet_from_json(row, origin + " record " + std::to_string(++n)));
  validate_corpus(c, lexicon);
  return c;
}

inline Corpus load_corpus(const std::filesystem::path& path, Schema schema, const Lexicon* lexicon) {
  return parse_corpus(io::read_file(path), schema, lexicon, path.string());
}

inline std::string corpus_to_jsonl(const Corpus& corpus) {
  std::vector<nlohmann::json> rows;
  for (const auto& t : corpus.tweets) rows.push_back(to_json(t));
  return io::to_jsonl(rows);
}

// --- statistics -------------------------------------------------------------

// cells[misogynous][pejorative][split], indices 1 = true, split 0 = train.
struct StatsReport {
  std::array<std::array<std::array<std::size_t, 2>, 2>, 2> cells{};

  std::size_t cell(bool mis, bool pej, Split s) const {
    return cells[mis ? 1 : 0][pej ? 1 : 0][s == Split::train ? 0 : 1];
  }
  std::size_t cell(bool mis, bool pej) const { return cell(mis, pej, Split::train) + cell(mis, pej, Split::test); }
  std::size_t misogynous(Split s) const { return cell(true, true, s) + cell(true, false, s); }
  std::size_t non_misogynous(Split s) const { return cell(false, true, s) + cell(false, false, s); }
  std::size_t misogynous() const { return misogynous(Split::train) + misogynous(Split::test); }
  std::size_t non_misogynous() const { return non_misogynous(Split::train) + non_misogynous(Split::test); }
  std::size_t total(Split s) const { return misogynous(s) + non_misogynous(s); }
  std::size_t total() const { return misogynous() + non_misogynous(); }
};

inline StatsReport corpus_stats(const Corpus& corpus) {
  StatsReport r;
  for (const auto& t : corpus.tweets) {
    if (!t.misogynous || !t.pejorative) continue;
    r.cells[*t.misogynous ? 1 : 0][*t.pejorative ? 1 : 0][t.split == Split::train ? 0 : 1]++;
  }
  return r;
}

// Same layout as the published corpus table; empty cells print as "-".
inline std::string render_stats(const StatsReport& r) {
  auto num = [](std::size_t n) { return n == 0 ? std::string("-") : std::to_string(n); };
  auto line = [](std::string_view label, const std::string& tr, const std::string& te, const std::string& tot) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-18s %9s %6s %7s\n", std::string(label).c_str(), tr.c_str(), te.c_str(),
                  tot.c_str());
    return std::string(buf);
  };
  auto row = [&](std::string_view label, std::size_t tr, std::size_t te, std::size_t tot) {
    return line(label, num(tr), num(te), num(tot));
  };
  std::string out = line("Class", "Training", "Test", "Total");
  out += row("Misogynous", r.misogynous(Split::train), r.misogynous(Split::test), r.misogynous());
  out += row("  Pejorative", r.cell(true, true, Split::train), r.cell(true, true, Split::test), r.cell(true, true));
  out += row("  Not pejorative", r.cell(true, false, Split::train), r.cell(true, false, Split::test),
             r.cell(true, false));
  out += row("Non-misogynous", r.non_misogynous(Split::train), r.non_misogynous(Split::test), r.non_misogynous());
  out += row("  Pejorative", r.cell(false, true, Split::train), r.cell(false, true, Split::test),
             r.cell(false, true));
  out += row("  Not pejorative", r.cell(false, false, Split::train), r.cell(false, false, Split::test),
             r.cell(false, false));
  out += row("Total", r.total(Split::train), r.total(Split::test), r.total());
  return out;
}

inline std::string stats_csv(const StatsReport& r) {
  std::string out = "misogynous,pejorative,split,count\n";
  for (bool mis : {true, false})
    for (bool pej : {true, false})
      for (auto s : {Split::train, Split::test})
        out += std::string(mis ? "1" : "0") + "," + (pej ? "1" : "0") + "," + std::string(to_string(s)) + "," +
               std::to_string(r.cell(mis, pej, s)) + "\n";
  return out;
}

// a = mis & pej, b = mis & !pej, c = !mis & pej, d = !mis & !pej.
struct ContingencyTable {
  std::size_t a = 0, b = 0, c = 0, d = 0;
};

inline ContingencyTable contingency(const StatsReport& r) {
  return {r.cell(true, true), r.cell(true, false), r.cell(false, true), r.cell(false, false)};
}

// Pearson correlation of two binary variables (the phi coefficient).
inline double phi_correlation(const ContingencyTable& t) {
  const double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
  const double c = static_cast<double>(t.c), d = static_cast<double>(t.d);
  const double m1 = a + b, m2 = c + d, m3 = a + c, m4 = b + d;
  if (m1 == 0 || m2 == 0 || m3 == 0 || m4 == 0)
    throw PreconditionError("phi correlation undefined: a contingency marginal is zero");
  double phi = (a * d - b * c) / std::sqrt(m1 * m2 * m3 * m4);
  return std::clamp(phi, -1.0, 1.0);
}

// --- epithet subsets --------------------------------------------------------

inline std::vector<MatchSpan> match_tweet(const Matcher& matcher, const AnnotatedTweet& t) {
  return matcher.find(t.text, t.id);
}

// Tweets with at least one lexicon match, in corpus order.
inline Corpus filter_epithet_subset(const Corpus& corpus, const Matcher& matcher) {
  Corpus out;
  out.schema = corpus.schema;
  for (const auto& t : corpus.tweets)
    if (!matcher.find(t.text).empty()) out.tweets.push_back(t);
  return out;
}

}  // namespace pejor
