#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace pejor;
using testing_helpers::bundled_lexicon;

namespace {

const char* kHeader = "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors\n";

std::vector<Violation::Kind> kinds(const std::vector<Violation>& vs) {
  std::vector<Violation::Kind> out;
  for (const auto& v : vs) out.push_back(v.kind);
  return out;
}

}  // namespace

TEST(Lexicon, BundledHas24Entries) {
  EXPECT_EQ(bundled_lexicon().size(), 24u);
}

TEST(Lexicon, BalenaRow) {
  const auto& e = bundled_lexicon().at("balena");
  EXPECT_EQ(e.neutral_anchors, (std::vector<std::string>{"cetaceo", "balenare"}));
  EXPECT_EQ(e.pejorative_anchors, (std::vector<std::string>{"grassa"}));
}

TEST(Lexicon, AnchorsFor) {
  const auto& lex = bundled_lexicon();
  EXPECT_EQ(anchors_for(lex, "balena", Connotation::pejorative), (std::vector<std::string>{"grassa"}));
  EXPECT_EQ(anchors_for(lex, "cagna", Connotation::pejorative),
            (std::vector<std::string>{"donna di facili costumi", "troia"}));
  EXPECT_EQ(anchors_for(lex, "cagna", Connotation::neutral), (std::vector<std::string>{"cane femmina", "canide"}));
  EXPECT_THROW(anchors_for(lex, "balcone", Connotation::neutral), UnknownWordError);
}

TEST(Lexicon, LookupIsCaseInsensitiveOnQuery) {
  EXPECT_NE(bundled_lexicon().find("BALENA"), nullptr);
  EXPECT_EQ(anchors_for(bundled_lexicon(), "Cagna", Connotation::neutral).front(), "cane femmina");
}

TEST(Lexicon, EveryAnchorListNonEmpty) {
  for (const auto& [w, e] : bundled_lexicon())
    for (auto c : {Connotation::neutral, Connotation::pejorative}) EXPECT_FALSE(anchors_for(bundled_lexicon(), w, c).empty()) << w;
}

TEST(Lexicon, BundledValidationReportsOnlyFemministaWarning) {
  auto vs = validate_lexicon(bundled_lexicon());
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].word, "femminista");
  EXPECT_EQ(vs[0].kind, Violation::Kind::anchor_is_headword);
  EXPECT_EQ(vs[0].severity, Severity::warning);
  EXPECT_THROW(load_lexicon(testing_helpers::source_dir() / "data/lexicon.tsv", {.strict = true}), ValidationError);
}

TEST(Lexicon, EmptyFileIsParseError) {
  EXPECT_THROW(parse_lexicon(""), ParseError);
  EXPECT_THROW(parse_lexicon(kHeader), ParseError);
}

TEST(Lexicon, MalformedRowIsParseError) {
  EXPECT_THROW(parse_lexicon(std::string(kHeader) + "balena\twhale\tfat\tcetaceo\n"), ParseError);
  EXPECT_THROW(parse_lexicon("word\tgloss\n"), ParseError);
}

TEST(Lexicon, Violations) {
  LexiconEntry ok{"balena", "whale", "fat", {"cetaceo"}, {"grassa"}};
  EXPECT_TRUE(validate_entries({ok}).empty());

  auto empty_list = ok;
  empty_list.pejorative_anchors.clear();
  EXPECT_EQ(kinds(validate_entries({empty_list})), std::vector{Violation::Kind::empty_anchor_list});

  auto self = ok;
  self.pejorative_anchors = {"balena"};
  EXPECT_EQ(kinds(validate_entries({self})), std::vector{Violation::Kind::anchor_is_headword});

  auto overlap = ok;
  overlap.pejorative_anchors = {"cetaceo"};
  EXPECT_EQ(kinds(validate_entries({overlap})), std::vector{Violation::Kind::anchor_overlap});

  auto upper = ok;
  upper.word = "Balena";
  EXPECT_EQ(kinds(validate_entries({upper})), std::vector{Violation::Kind::word_not_lowercase});

  auto spaced = ok;
  spaced.word = "bal ena";
  EXPECT_EQ(kinds(validate_entries({spaced})), std::vector{Violation::Kind::word_has_whitespace});

  EXPECT_EQ(kinds(validate_entries({ok, ok})), std::vector{Violation::Kind::duplicate_word});

  LexiconEntry other{"oca", "goose", "silly", {"pennuto"}, {"balena"}};
  EXPECT_EQ(kinds(validate_entries({ok, other})), std::vector{Violation::Kind::anchor_is_other_headword});
}

TEST(Lexicon, LoadRejectsErrors) {
  std::string bad = std::string(kHeader) + "balena\twhale\tfat\tcetaceo\t\n";
  EXPECT_THROW(parse_lexicon(bad), ValidationError);
  std::string dup = std::string(kHeader) + "oca\tgoose\tsilly\tpennuto\tstupida\noca\tgoose\tsilly\tpennuto\tstupida\n";
  EXPECT_THROW(parse_lexicon(dup), ValidationError);
}

TEST(Lexicon, TsvRoundTripIsStable) {
  auto once = serialize_tsv(bundled_lexicon());
  auto twice = serialize_tsv(parse_lexicon(once));
  EXPECT_EQ(once, twice);
  auto reloaded = parse_lexicon(once);
  ASSERT_EQ(reloaded.size(), bundled_lexicon().size());
  for (const auto& [w, e] : bundled_lexicon()) {
    const auto& r = reloaded.at(w);
    EXPECT_EQ(r.neutral_anchors, e.neutral_anchors);
    EXPECT_EQ(r.pejorative_anchors, e.pejorative_anchors);
    EXPECT_EQ(r.literal_gloss, e.literal_gloss);
  }
}

TEST(Lexicon, JsonFormEquivalent) {
  auto json_text = to_json(bundled_lexicon()).dump();
  auto from_json = parse_lexicon(json_text);
  EXPECT_EQ(serialize_tsv(from_json), serialize_tsv(bundled_lexicon()));
}

TEST(Lexicon, ConnotationStrings) {
  EXPECT_EQ(to_string(Connotation::neutral), "neutral");
  EXPECT_EQ(to_string(Connotation::pejorative), "pejorative");
  EXPECT_EQ(parse_connotation("pejorative"), Connotation::pejorative);
  EXPECT_THROW(parse_connotation("bad"), Error);
}

TEST(Lexicon, MultiWordAnchorsKeptAsPhrases) {
  EXPECT_EQ(bundled_lexicon().at("lesbica").neutral_anchors,
            (std::vector<std::string>{"donna a cui piacciono le donne"}));
}
