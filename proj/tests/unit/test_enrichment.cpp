#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"

using namespace pejor;
using testing_helpers::bundled_lexicon;
using testing_helpers::default_matcher;
using testing_helpers::tweet;

namespace {

ConnotationAssignment assign(const AnnotatedTweet& t, std::vector<Connotation> cs,
                             LabelSource source = LabelSource::gold) {
  return {t.id, std::move(cs), source};
}

const std::vector<std::string> kFiller = {"oggi", "sei", "una", "proprio", "che", "la", "del", "vicino", "ciao",
                                          "città", "perché", "è", "mai", "più", "sempre", "casa", "treno"};
const std::vector<std::string> kEpithets = {"balena", "Balene", "cagna", "oche", "STREGA", "cesso", "vacche",
                                            "femminista", "maiala", "cozze", "lurida", "bambola"};
const std::vector<std::string> kPunct = {" ", " ", " ", ", ", "! ", "? ", " :) "};

std::string random_text(rnd::Engine& rng, bool with_epithets) {
  std::string text;
  auto n = 1 + rnd::index(rng, 10);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += rnd::pick(kPunct, rng);
    text += with_epithets && rnd::bernoulli(rng, 0.3) ? rnd::pick(kEpithets, rng) : rnd::pick(kFiller, rng);
  }
  return text;
}

std::vector<Connotation> random_connotations(rnd::Engine& rng, std::size_t n) {
  std::vector<Connotation> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rnd::bernoulli(rng, 0.5) ? Connotation::pejorative : Connotation::neutral);
  return out;
}

}  // namespace

TEST(Concat, SingleSpan) {
  auto t = tweet("1", "Sei una balena");
  auto spans = default_matcher().find(t.text, t.id);
  auto e = concat_enrich(t, spans, assign(t, {Connotation::pejorative}));
  EXPECT_EQ(e.tweet.text, "Sei una balena [SEP] balena: peggiorativo");
  EXPECT_EQ(e.original_text, "Sei una balena");
  EXPECT_EQ(e.strategy, Strategy::concat);
}

TEST(Concat, TwoSpansInOffsetOrder) {
  auto t = tweet("1", "Quella cagna parla con una oca");
  auto spans = default_matcher().find(t.text, t.id);
  ASSERT_EQ(spans.size(), 2u);
  // Hand the spans over in reverse to check the output is still in offset order.
  std::vector<MatchSpan> reversed = {spans[1], spans[0]};
  auto e = concat_enrich(t, reversed, assign(t, {Connotation::neutral, Connotation::pejorative}));
  std::string expected = t.text;
  expected += " [SEP] cagna: peggiorativo";
  expected += " [SEP] oca: neutro";
  EXPECT_EQ(e.tweet.text, expected);
}

TEST(Concat, NoSpansIsIdentity) {
  auto t = tweet("1", "nessuna parola qui");
  auto e = concat_enrich(t, {}, assign(t, {}));
  EXPECT_EQ(e.tweet.text, t.text);
  EXPECT_EQ(e.strategy, Strategy::none);
}

TEST(Concat, UnassignedSpanIsError) {
  auto t = tweet("1", "Sei una balena");
  auto spans = default_matcher().find(t.text, t.id);
  EXPECT_THROW(concat_enrich(t, spans, assign(t, {})), CoverageError);
}

TEST(Subst, Examples) {
  auto t = tweet("1", "Sei una balena");
  auto spans = default_matcher().find(t.text, t.id);
  EXPECT_EQ(subst_enrich(t, spans, assign(t, {Connotation::pejorative}), bundled_lexicon()).tweet.text,
            "Sei una grassa");
  auto n = tweet("2", "La balena nuota");
  auto ns = default_matcher().find(n.text, n.id);
  EXPECT_EQ(subst_enrich(n, ns, assign(n, {Connotation::neutral}), bundled_lexicon()).tweet.text,
            "La cetaceo balenare nuota");
  EXPECT_EQ(subst_enrich(n, ns, assign(n, {Connotation::neutral}), bundled_lexicon(), {.single_anchor = true})
                .tweet.text,
            "La cetaceo nuota");
}

TEST(Subst, MultiByteTextAndSeveralSpans) {
  auto t = tweet("1", "Perché quella cagna è una strega? Sì.");
  auto spans = default_matcher().find(t.text, t.id);
  ASSERT_EQ(spans.size(), 2u);
  auto e = subst_enrich(t, spans, assign(t, {Connotation::pejorative, Connotation::neutral}), bundled_lexicon());
  EXPECT_EQ(e.tweet.text, "Perché quella donna di facili costumi troia è una maga? Sì.");
}

TEST(Subst, NoSpansIsIdentity) {
  auto t = tweet("1", "nessuna parola qui");
  auto e = subst_enrich(t, {}, assign(t, {}), bundled_lexicon());
  EXPECT_EQ(e.tweet.text, t.text);
  EXPECT_EQ(e.strategy, Strategy::none);
}

TEST(Subst, UnknownHeadwordIsError) {
  auto t = tweet("1", "una cosa");
  std::vector<MatchSpan> spans = {{"1", 4, 8, "cosa", "cosa"}};
  EXPECT_THROW(subst_enrich(t, spans, assign(t, {Connotation::neutral}), bundled_lexicon()), UnknownWordError);
}

TEST(StripConcat, LeavesOrdinaryTextAlone) {
  EXPECT_EQ(strip_concat("testo [SEP] qualcosa di strano"), "testo [SEP] qualcosa di strano");
  EXPECT_EQ(strip_concat("a [SEP] oca: neutro [SEP] cagna: peggiorativo"), "a");
}

TEST(EnrichmentProperties, OverGeneratedTweets) {
  rnd::Engine rng(31);
  std::size_t with_matches = 0, without = 0;
  for (int trial = 0; with_matches < 1000 || without < 1000; ++trial) {
    auto t = tweet("g" + std::to_string(trial), random_text(rng, trial % 2 == 0));
    auto spans = default_matcher().find(t.text, t.id);
    auto a = assign(t, random_connotations(rng, spans.size()));

    auto c = concat_enrich(t, spans, a);
    auto s = subst_enrich(t, spans, a, bundled_lexicon());
    ASSERT_EQ(c.tweet.id, t.id);
    ASSERT_EQ(c.tweet.split, t.split);
    ASSERT_EQ(s.tweet.misogynous, t.misogynous);

    if (spans.empty()) {
      ++without;
      ASSERT_EQ(c.tweet.text, t.text);
      ASSERT_EQ(s.tweet.text, t.text);
      continue;
    }
    ++with_matches;

    // concat: strict prefix, strippable.
    ASSERT_GT(c.tweet.text.size(), t.text.size());
    ASSERT_EQ(c.tweet.text.substr(0, t.text.size()), t.text);
    ASSERT_EQ(strip_concat(c.tweet.text), t.text);

    // subst: rebuilt left to right, every character outside the spans must be
    // carried over in order.
    auto src = utf8::decode(t.text);
    auto out = utf8::decode(s.tweet.text);
    std::size_t in_pos = 0, out_pos = 0;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      const auto& sp = spans[k];
      auto gap = src.substr(in_pos, sp.char_start - in_pos);
      ASSERT_EQ(out.substr(out_pos, gap.size()), gap);
      out_pos += gap.size();
      const auto& anchors = bundled_lexicon().at(sp.headword).anchors(a.per_span[k]);
      std::string repl;
      for (std::size_t i = 0; i < anchors.size(); ++i) repl += (i ? " " : "") + anchors[i];
      auto r32 = utf8::decode(repl);
      ASSERT_EQ(out.substr(out_pos, r32.size()), r32);
      out_pos += r32.size();
      in_pos = sp.char_end;
    }
    ASSERT_EQ(out.substr(out_pos), src.substr(in_pos));

    // No replaced surface survives as a word unless an anchor spells it
    // (femminista lists itself as its neutral anchor).
    std::set<std::u32string> words, anchor_words;
    for (const auto& w : word_tokens(out)) words.insert(utf8::lower(w.text));
    for (std::size_t k = 0; k < spans.size(); ++k)
      for (const auto& an : bundled_lexicon().at(spans[k].headword).anchors(a.per_span[k]))
        for (const auto& w : word_tokens(utf8::decode(an))) anchor_words.insert(utf8::lower(w.text));
    for (const auto& sp : spans) {
      auto surf = utf8::lower(utf8::decode(sp.surface));
      if (anchor_words.contains(surf)) continue;
      ASSERT_FALSE(words.contains(surf)) << t.text << " -> " << s.tweet.text;
    }
    ASSERT_EQ(subst_enrich(t, spans, a, bundled_lexicon()), s);
  }
}

// --- corpus level -------------------------------------------------------------

namespace {

Corpus small_corpus() {
  Corpus c;
  c.tweets = {tweet("1", "Sei una balena", "balena", true, true), tweet("2", "Oggi piove", std::nullopt, false, false),
              tweet("3", "quella oca del vicino", "oca", false, false, Split::test)};
  return c;
}

}  // namespace

TEST(EnrichCorpus, MatchedAndPassthrough) {
  auto c = small_corpus();
  auto spans = match_corpus(c, default_matcher());
  auto e = enrich_corpus(c, spans, gold_assignments(c, spans), Strategy::subst, LabelSource::gold, bundled_lexicon());
  ASSERT_EQ(e.tweets.size(), 3u);
  EXPECT_EQ(e.tweets[0].tweet.text, "Sei una grassa");
  EXPECT_EQ(e.tweets[1].strategy, Strategy::none);
  EXPECT_EQ(e.tweets[1].tweet.text, "Oggi piove");
  EXPECT_EQ(e.tweets[2].tweet.text, "quella pennuto del vicino");
  for (const auto& t : e.tweets) EXPECT_EQ(t.source, LabelSource::gold);
  auto back = e.as_corpus();
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.tweets[i].id, c.tweets[i].id);
    EXPECT_EQ(back.tweets[i].split, c.tweets[i].split);
    EXPECT_EQ(back.tweets[i].misogynous, c.tweets[i].misogynous);
    EXPECT_EQ(back.tweets[i].pejorative, c.tweets[i].pejorative);
  }
  auto row = to_json(e.tweets[0]);
  EXPECT_EQ(row["strategy"], "subst");
  EXPECT_EQ(row["source"], "gold");
  EXPECT_EQ(row["original_text"], "Sei una balena");
}

TEST(EnrichCorpus, CoverageErrorListsIds) {
  auto c = small_corpus();
  auto spans = match_corpus(c, default_matcher());
  try {
    enrich_corpus(c, spans, {}, Strategy::concat, LabelSource::predicted, bundled_lexicon());
    FAIL();
  } catch (const CoverageError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find(" 1"), std::string::npos);
    EXPECT_NE(msg.find(" 3"), std::string::npos);
  }
}

TEST(EnrichCorpus, PredictedLabelsChangeText) {
  auto c = small_corpus();
  auto spans = match_corpus(c, default_matcher());
  auto pej = assignments_from_labels(c, spans, {{"1", true}, {"3", true}}, LabelSource::predicted);
  auto neu = assignments_from_labels(c, spans, {{"1", false}, {"3", false}}, LabelSource::predicted);
  auto a = enrich_corpus(c, spans, pej, Strategy::concat, LabelSource::predicted, bundled_lexicon());
  auto b = enrich_corpus(c, spans, neu, Strategy::concat, LabelSource::predicted, bundled_lexicon());
  EXPECT_NE(a.tweets[0].tweet.text, b.tweets[0].tweet.text);
  EXPECT_EQ(a.tweets[1].tweet.text, b.tweets[1].tweet.text);
  EXPECT_EQ(a.tweets[0].source, LabelSource::predicted);
}

TEST(EnrichCorpus, OnlyTargetWordSpansAreEnriched) {
  Corpus c;
  c.tweets = {tweet("1", "una cagna e una vacca", "vacca", true, true)};
  auto spans = match_corpus(c, default_matcher());
  auto e = enrich_corpus(c, spans, gold_assignments(c, spans), Strategy::subst, LabelSource::gold, bundled_lexicon());
  EXPECT_EQ(e.tweets[0].tweet.text, "una cagna e una donna di facili costumi troia");
}

TEST(EnrichCorpus, StrategyNoneRejected) {
  auto c = small_corpus();
  EXPECT_THROW(enrich_corpus(c, {}, {}, Strategy::none, LabelSource::gold, bundled_lexicon()), ConfigError);
}
