#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace pejor;
using testing_helpers::default_matcher;
using testing_helpers::golden;

namespace {

Corpus label_counts() {
  return load_corpus(testing_helpers::source_dir() / "data" / "fixtures" / "label_counts_1200.jsonl",
                     Schema::pejorativity, &testing_helpers::bundled_lexicon());
}

}  // namespace

TEST(Prompt, GoldenFiles) {
  EXPECT_EQ(build_prompt("balena", "Sei una balena"), io::read_file(golden("prompt_balena.txt")));
  EXPECT_EQ(build_prompt("cagna", "Non voglio una cagna un cane ce l'ho giaaaa"),
            io::read_file(golden("prompt_cagna.txt")));
  EXPECT_EQ(build_prompt("oca", "Che \"oca\" che sei, dai!"), io::read_file(golden("prompt_quoted.txt")));
}

TEST(Prompt, Shape) {
  auto p = build_prompt("strega", "Che strega");
  EXPECT_EQ(p.find('\r'), std::string::npos);
  EXPECT_TRUE(p.starts_with("[INST] "));
  EXPECT_TRUE(p.ends_with("### Risposta:\n"));
  EXPECT_EQ(std::count(p.begin(), p.end(), '\n'), 5);
  EXPECT_THROW(build_prompt("", "x"), PreconditionError);
  EXPECT_THROW(build_prompt("x", ""), PreconditionError);
}

TEST(PromptBatch, LabelCountsTestSplit) {
  auto c = label_counts();
  auto batch = export_prompt_batch(c, default_matcher());
  ASSERT_EQ(batch.items.size(), 96u);
  for (const auto& item : batch.items) {
    const auto* t = c.find(item.id);
    ASSERT_NE(t, nullptr);
    EXPECT_EQ(t->split, Split::test);
    EXPECT_EQ(item.sentence, t->text);
    EXPECT_EQ(item.prompt, build_prompt(item.word, item.sentence));
    EXPECT_NE(t->text.find(item.word), std::string::npos);
  }
  EXPECT_EQ(batch.generation, GenerationConfig{});
  EXPECT_EQ(batch.generation.temperature, 0.2);
  EXPECT_EQ(batch.generation.num_beams, 4);
  EXPECT_EQ(batch.generation.top_p, 0.75);
  EXPECT_EQ(batch.generation.max_new_tokens, 300);
  EXPECT_EQ(batch.generation.repetition_penalty, 1.8);
}

TEST(PromptBatch, ManifestRoundTrip) {
  auto batch = export_prompt_batch(label_counts(), default_matcher());
  batch.model = "some-instruct-model";
  auto dir = testing_helpers::scratch_dir("prompts");
  io::write_file(dir / "prompts.jsonl", batch_to_jsonl(batch));
  io::write_file(dir / "manifest.json", manifest_json(batch).dump(2));
  auto items = load_prompt_batch(dir / "prompts.jsonl");
  EXPECT_EQ(items, batch.items);
  auto back = load_manifest(dir / "manifest.json", items);
  EXPECT_EQ(back.generation, batch.generation);
  EXPECT_EQ(back.model, "some-instruct-model");
  EXPECT_EQ(manifest_json(back)["prompt_count"], 96);
  io::write_file(dir / "broken.json", "{");
  EXPECT_THROW(load_manifest(dir / "broken.json"), ParseError);
}

TEST(Responses, IngestAndReview) {
  auto c = label_counts();
  auto batch = export_prompt_batch(c, default_matcher());
  std::string content;
  for (std::size_t i = 0; i < 3; ++i)
    content += nlohmann::json{{"id", batch.items[i].id}, {"model", "m"}, {"response", "risposta " + std::to_string(i)}}
                   .dump() +
               "\n";
  auto recs = ingest_responses(content, batch.items);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[1].response, "risposta 1");
  EXPECT_EQ(recs[1].word, batch.items[1].word);

  auto rows = review_rows(recs, &c);
  ASSERT_EQ(rows.size(), 3u);
  const auto* t = c.find(rows[0].id);
  EXPECT_EQ(rows[0].gold, *t->pejorative ? "pejorative" : "neutral");
  EXPECT_TRUE(rows[0].translation.empty());
  auto csv = render_review_csv(rows);
  EXPECT_TRUE(csv.starts_with("id,tweet,word,gold,translation,response,model\n"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(render_review_text(rows).find("m: risposta 2"), std::string::npos);
  EXPECT_EQ(review_rows(recs)[0].gold, "");
}

TEST(Responses, UnknownIdAndTamperedPrompt) {
  auto batch = export_prompt_batch(label_counts(), default_matcher());
  EXPECT_THROW(ingest_responses(R"({"id":"nope","model":"m","response":"x"})" "\n", batch.items), ValidationError);
  auto tampered = batch.items;
  tampered[0].prompt += " ";
  std::string row = nlohmann::json{{"id", tampered[0].id}, {"model", "m"}, {"response", "x"}}.dump() + "\n";
  EXPECT_THROW(ingest_responses(row, tampered), IntegrityError);
  EXPECT_THROW(ingest_responses(R"({"id":"x"})" "\n", batch.items), ValidationError);
}
