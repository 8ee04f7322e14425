#pragma once

// Injecting word-level connotation into tweet text, either by appending a
// tag per matched word (concat) or by replacing the word with the anchors of
// its connotation (subst).

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/corpus.hpp"
#include "pejor/error.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/matcher.hpp"
#include "pejor/utf8.hpp"

namespace pejor {

enum class Strategy { none, concat, subst };
enum class LabelSource { gold, predicted };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::none: return "none";
    case Strategy::concat: return "concat";
    case Strategy::subst: return "subst";
  }
  return "none";
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "none") return Strategy::none;
  if (s == "concat") return Strategy::concat;
  if (s == "subst") return Strategy::subst;
  throw ConfigError("unknown enrichment strategy \"" + std::string(s) + "\"");
}

inline std::string_view to_string(LabelSource s) { return s == LabelSource::gold ? "gold" : "predicted"; }

inline LabelSource parse_label_source(std::string_view s) {
  if (s == "gold") return LabelSource::gold;
  if (s == "predicted") return LabelSource::predicted;
  throw ConfigError("unknown label source \"" + std::string(s) + "\"");
}

// One connotation per span, aligned with the span list it was built for.
struct ConnotationAssignment {
  std::string tweet_id;
  std::vector<Connotation> per_span;
  LabelSource source = LabelSource::gold;
};

struct EnrichedTweet {
  AnnotatedTweet tweet;  // text holds the enriched form
  std::string original_text;
  Strategy strategy = Strategy::none;
  LabelSource source = LabelSource::gold;

  bool operator==(const EnrichedTweet&) const = default;
};

inline constexpr std::string_view kSepTag = " [SEP] ";
inline constexpr std::string_view kPejorativeTag = "peggiorativo";
inline constexpr std::string_view kNeutralTag = "neutro";

inline std::string_view connotation_tag(Connotation c) {
  return c == Connotation::pejorative ? kPejorativeTag : kNeutralTag;
}

namespace detail {

inline void check_assignment(const AnnotatedTweet& tweet, const std::vector<MatchSpan>& spans,
                             const ConnotationAssignment& assignment) {
  if (assignment.per_span.size() != spans.size())
    throw CoverageError("tweet " + tweet.id + ": " + std::to_string(spans.size()) + " spans but " +
                        std::to_string(assignment.per_span.size()) + " assigned connotations");
}

// Span indices sorted by start offset.
inline std::vector<std::size_t> offset_order(const std::vector<MatchSpan>& spans) {
  std::vector<std::size_t> order(spans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spans[a].char_start < spans[b].char_start; });
  return order;
}

inline EnrichedTweet passthrough(const AnnotatedTweet& tweet, LabelSource source) {
  return {tweet, tweet.text, Strategy::none, source};
}

}  // namespace detail

inline EnrichedTweet concat_enrich(const AnnotatedTweet& tweet, const std::vector<MatchSpan>& spans,
                                   const ConnotationAssignment& assignment) {
  if (spans.empty()) return detail::passthrough(tweet, assignment.source);
  detail::check_assignment(tweet, spans, assignment);
  EnrichedTweet out{tweet, tweet.text, Strategy::concat, assignment.source};
  for (auto i : detail::offset_order(spans)) {
    out.tweet.text += kSepTag;
    out.tweet.text += spans[i].headword;
    out.tweet.text += ": ";
    out.tweet.text += connotation_tag(assignment.per_span[i]);
  }
  return out;
}

// Removes every trailing " [SEP] word: tag" suffix.
inline std::string strip_concat(std::string_view text) {
  while (true) {
    auto pos = text.rfind(kSepTag);
    if (pos == std::string_view::npos) break;
    auto tail = text.substr(pos + kSepTag.size());
    auto colon = tail.find(": ");
    if (colon == std::string_view::npos || colon == 0) break;
    auto word = tail.substr(0, colon);
    auto tag = tail.substr(colon + 2);
    if (word.find(' ') != std::string_view::npos || (tag != kPejorativeTag && tag != kNeutralTag)) break;
    text = text.substr(0, pos);
  }
  return std::string(text);
}

struct SubstOptions {
  // Use only the first anchor instead of all of them.
  bool single_anchor = false;
};

inline EnrichedTweet subst_enrich(const AnnotatedTweet& tweet, const std::vector<MatchSpan>& spans,
                                  const ConnotationAssignment& assignment, const Lexicon& lexicon,
                                  SubstOptions options = {}) {
  if (spans.empty()) return detail::passthrough(tweet, assignment.source);
  detail::check_assignment(tweet, spans, assignment);
  auto text = utf8::decode(tweet.text);
  auto order = detail::offset_order(spans);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& span = spans[*it];
    if (span.char_end > text.size() || span.char_start >= span.char_end)
      throw ValidationError("tweet " + tweet.id + ": span out of range");
    const auto& anchors = lexicon.at(span.headword).anchors(assignment.per_span[*it]);
    std::string replacement = options.single_anchor ? anchors.front() : join(anchors, " ");
    text.replace(span.char_start, span.char_end - span.char_start, utf8::decode(replacement));
  }
  EnrichedTweet out{tweet, tweet.text, Strategy::subst, assignment.source};
  out.tweet.text = utf8::encode(text);
  return out;
}

using SpanIndex = std::map<std::string, std::vector<MatchSpan>, std::less<>>;
using AssignmentIndex = std::map<std::string, ConnotationAssignment, std::less<>>;

inline SpanIndex match_corpus(const Corpus& corpus, const Matcher& matcher) {
  SpanIndex out;
  for (const auto& t : corpus.tweets) out[t.id] = matcher.find(t.text, t.id);
  return out;
}

inline const std::vector<MatchSpan>& spans_of(const SpanIndex& index, std::string_view id) {
  static const std::vector<MatchSpan> none;
  auto it = index.find(id);
  return it == index.end() ? none : it->second;
}

// The spans enrichment acts on for one tweet.
inline std::vector<MatchSpan> enrichment_spans(const AnnotatedTweet& tweet, const SpanIndex& index) {
  return target_spans(spans_of(index, tweet.id), tweet.target_word);
}

// Builds assignments from one word-level label per tweet (gold annotations or
// model_pej predictions); tweets without a label are left unassigned.
inline AssignmentIndex assignments_from_labels(const Corpus& corpus, const SpanIndex& spans,
                                               const std::map<std::string, bool, std::less<>>& labels,
                                               LabelSource source) {
  AssignmentIndex out;
  for (const auto& t : corpus.tweets) {
    auto es = enrichment_spans(t, spans);
    if (es.empty()) continue;
    auto it = labels.find(t.id);
    if (it == labels.end()) continue;
    out[t.id] = {t.id, std::vector<Connotation>(es.size(), connotation_of(it->second)), source};
  }
  return out;
}

inline AssignmentIndex gold_assignments(const Corpus& corpus, const SpanIndex& spans) {
  std::map<std::string, bool, std::less<>> labels;
  for (const auto& t : corpus.tweets)
    if (t.pejorative) labels[t.id] = *t.pejorative;
  return assignments_from_labels(corpus, spans, labels, LabelSource::gold);
}

struct EnrichedCorpus {
  Schema schema = Schema::pejorativity;
  std::vector<EnrichedTweet> tweets;

  Corpus as_corpus() const {
    Corpus c;
    c.schema = schema;
    for (const auto& e : tweets) c.tweets.push_back(e.tweet);
    return c;
  }
};

inline EnrichedCorpus enrich_corpus(const Corpus& corpus, const SpanIndex& spans, const AssignmentIndex& assignments,
                                    Strategy strategy, LabelSource source, const Lexicon& lexicon,
                                    SubstOptions options = {}) {
  if (strategy == Strategy::none) throw ConfigError("enrich_corpus needs strategy concat or subst");
  std::vector<std::string> missing;
  EnrichedCorpus out;
  out.schema = corpus.schema;
  for (const auto& t : corpus.tweets) {
    auto es = enrichment_spans(t, spans);
    if (es.empty()) {
      out.tweets.push_back(detail::passthrough(t, source));
      continue;
    }
    auto it = assignments.find(t.id);
    if (it == assignments.end()) {
      missing.push_back(t.id);
      continue;
    }
    out.tweets.push_back(strategy == Strategy::concat ? concat_enrich(t, es, it->second)
                                                      : subst_enrich(t, es, it->second, lexicon, options));
  }
  if (!missing.empty()) {
    std::string msg = "no connotation assignment for " + std::to_string(missing.size()) + " matched tweet(s):";
    for (const auto& id : missing) msg += " " + id;
    throw CoverageError(msg);
  }
  return out;
}

inline nlohmann::json to_json(const EnrichedTweet& e) {
  auto o = to_json(e.tweet);
  o["strategy"] = to_string(e.strategy);
  o["source"] = to_string(e.source);
  o["original_text"] = e.original_text;
  return o;
}

inline std::string enriched_to_jsonl(const EnrichedCorpus& c) {
  std::vector<nlohmann::json> rows;
  for (const auto& e : c.tweets) rows.push_back(to_json(e));
  return io::to_jsonl(rows);
}

}  // namespace pejor
