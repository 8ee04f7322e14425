#include <gtest/gtest.h>

#include <fstream>

#include "helpers.hpp"

using namespace pejor;
using testing_helpers::default_matcher;
using testing_helpers::tweet;

namespace {

Hyperparams small_hp() {
  Hyperparams hp;
  hp.dim = 64;
  hp.l2 = 1e-2;
  return hp;
}

SparseVector random_sparse(rnd::Engine& rng, std::size_t dim) {
  std::map<std::uint32_t, double> m;
  auto nnz = 1 + rnd::index(rng, 8);
  for (std::size_t k = 0; k < nnz; ++k) m[static_cast<std::uint32_t>(rnd::index(rng, dim))] = rnd::uniform(rng, -1, 1);
  return {m.begin(), m.end()};
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)}); }

// Twenty tweets whose label is decided by a single word.
Corpus separable_corpus() {
  const std::vector<std::string> good = {"bellissima giornata al mare", "che bella festa ieri sera",
                                         "grazie per il bel regalo", "complimenti per la laurea",
                                         "bella partita stasera", "auguri di buon compleanno",
                                         "un abbraccio forte", "bella idea davvero", "che splendida notizia",
                                         "sei stata bravissima"};
  const std::vector<std::string> bad = {"stai zitta in cucina", "le donne devono stare zitte",
                                        "zitta e lava i piatti", "torna in cucina zitta", "zitta tu non capisci",
                                        "una donna deve stare zitta", "zitta che nessuno ti ascolta",
                                        "vai in cucina e zitta", "zitta zitta zitta", "meglio se stai zitta"};
  Corpus c;
  for (std::size_t i = 0; i < good.size(); ++i) c.tweets.push_back(tweet("g" + std::to_string(i), good[i], {}, false, false));
  for (std::size_t i = 0; i < bad.size(); ++i) c.tweets.push_back(tweet("b" + std::to_string(i), bad[i], {}, false, true));
  return c;
}

}  // namespace

TEST(Gradient, MatchesCentralDifferences) {
  rnd::Engine rng(7);
  const double h = 1e-5;
  std::size_t checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto hp = small_hp();
    hp.l2 = rnd::bernoulli(rng, 0.5) ? 0.0 : rnd::uniform(rng, 1e-4, 0.1);
    auto model = make_model(Task::mis, hp, 0);
    for (auto& w : model.weights) w = rnd::uniform(rng, -1, 1);
    model.bias = rnd::uniform(rng, -1, 1);
    std::vector<Example> batch;
    auto n = 1 + rnd::index(rng, 6);
    for (std::size_t k = 0; k < n; ++k) batch.push_back({random_sparse(rng, hp.dim), rnd::bernoulli(rng, 0.5) ? 1.0 : 0.0});

    auto g = loss_gradient(model, batch);
    for (int probe = 0; probe < 4; ++probe) {
      auto i = rnd::index(rng, hp.dim);
      auto plus = model, minus = model;
      plus.weights[i] += h;
      minus.weights[i] -= h;
      double fd = (loss(plus, batch) - loss(minus, batch)) / (2 * h);
      if (std::abs(fd) < 1e-6 && std::abs(g.weights[i]) < 1e-6) continue;
      ASSERT_LE(rel_err(fd, g.weights[i]), 1e-4) << "trial " << trial << " weight " << i;
      ++checked;
    }
    auto plus = model, minus = model;
    plus.bias += h;
    minus.bias -= h;
    double fd = (loss(plus, batch) - loss(minus, batch)) / (2 * h);
    ASSERT_LE(rel_err(fd, g.bias), 1e-4) << "trial " << trial << " bias";
    ++checked;
  }
  EXPECT_GE(checked, 100u);
}

TEST(Gradient, RegularizationOnlyTerm) {
  // With y = sigmoid(logit) the data term vanishes, leaving l2 * w.
  auto hp = small_hp();
  hp.l2 = 0.3;
  auto model = make_model(Task::mis, hp, 0);
  model.weights[3] = 2.0;
  SparseVector x = {{5, 1.0}};
  std::vector<Example> batch = {{x, sigmoid(model.logit(x))}};
  auto g = loss_gradient(model, batch);
  EXPECT_NEAR(g.weights[3], 0.6, 1e-12);
  EXPECT_NEAR(g.weights[5], 0.0, 1e-12);
  EXPECT_NEAR(g.bias, 0.0, 1e-12);
}

TEST(Gradient, EmptyBatchRejected) {
  auto model = make_model(Task::mis, small_hp(), 0);
  EXPECT_THROW(loss_gradient(model, {}), PreconditionError);
  EXPECT_THROW(loss(model, {}), PreconditionError);
}

TEST(Features, NormalisedSortedAndDeterministic) {
  Hyperparams hp;
  auto a = featurize("Sei una balena", hp);
  auto b = featurize("SEI UNA BALENA", hp);
  EXPECT_EQ(a, b);
  double norm = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    norm += a[i].second * a[i].second;
    if (i) {
      EXPECT_LT(a[i - 1].first, a[i].first);
    }
  }
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_TRUE(featurize("", hp).size() == 1u);  // the padded "  " bigram
}

TEST(Features, MarkersChangeThePejInput) {
  auto t = tweet("1", "quella oca e quella cagna");
  auto spans = default_matcher().find(t.text, t.id);
  ASSERT_EQ(spans.size(), 2u);
  auto first = model_input(t, Task::pej, {spans[0]});
  auto second = model_input(t, Task::pej, {spans[1]});
  EXPECT_EQ(first, "quella ⟦oca⟧ e quella cagna");
  EXPECT_EQ(second, "quella oca e quella ⟦cagna⟧");
  EXPECT_EQ(model_input(t, Task::mis, spans), t.text);
  Hyperparams hp;
  EXPECT_NE(featurize(first, hp), featurize(second, hp));
}

TEST(Baseline, SeparableCorpusIsLearned) {
  auto c = separable_corpus();
  Hyperparams hp;
  hp.epochs = 50;
  auto m = train_baseline(c, Task::mis, hp, 13);
  auto preds = predict(m, c, Task::mis, 0);
  ASSERT_EQ(preds.size(), 20u);
  for (std::size_t i = 0; i < preds.size(); ++i) EXPECT_EQ(preds[i].label, *c.tweets[i].misogynous) << preds[i].id;
}

TEST(Baseline, DeterministicPerSeed) {
  auto c = separable_corpus();
  Hyperparams hp;
  hp.dim = 4096;
  auto a = train_baseline(c, Task::mis, hp, 42);
  auto b = train_baseline(c, Task::mis, hp, 42);
  auto d = train_baseline(c, Task::mis, hp, 2024);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.weights, d.weights);
}

TEST(Baseline, ReorderingTrainingDataOnlyActsThroughTheShuffle) {
  // Full-batch descent does not see order at all.
  auto c = separable_corpus();
  Hyperparams hp;
  hp.dim = 4096;
  hp.batch_size = 1000;
  auto a = train_baseline(c, Task::mis, hp, 1);
  std::reverse(c.tweets.begin(), c.tweets.end());
  auto b = train_baseline(c, Task::mis, hp, 1);
  ASSERT_EQ(a.weights.size(), b.weights.size());
  for (std::size_t i = 0; i < a.weights.size(); ++i) ASSERT_NEAR(a.weights[i], b.weights[i], 1e-10);
  EXPECT_NEAR(a.bias, b.bias, 1e-10);
}

TEST(Baseline, EmptyTrainSplit) {
  Corpus c;
  c.tweets = {tweet("1", "solo test", {}, false, false, Split::test)};
  EXPECT_THROW(train_baseline(c, Task::mis, Hyperparams{}, 13), PreconditionError);
  EXPECT_THROW(train_baseline(c, Task::pej, Hyperparams{}, 13), ConfigError);
}

TEST(Baseline, BadHyperparams) {
  Hyperparams hp;
  hp.dim = 0;
  EXPECT_THROW(make_model(Task::mis, hp, 0), ConfigError);
  hp = {};
  hp.ngram_min = 6;
  EXPECT_THROW(make_model(Task::mis, hp, 0), ConfigError);
}

TEST(Baseline, DecisionThreshold) {
  EXPECT_FALSE(decide(0.5));
  EXPECT_TRUE(decide(0.5000001));
  EXPECT_FALSE(decide(0.0));
}

TEST(Baseline, CheckpointRoundTrip) {
  auto c = separable_corpus();
  Hyperparams hp;
  hp.dim = 4096;
  auto m = train_baseline(c, Task::mis, hp, 13);
  auto dir = testing_helpers::scratch_dir("checkpoint");
  io::write_file(dir / "m.json", to_json(m).dump());
  auto back = load_model(dir / "m.json");
  EXPECT_EQ(back, m);
  EXPECT_EQ(predict(back, c, Task::mis, 0), predict(m, c, Task::mis, 0));
  io::write_file(dir / "bad.json", R"({"format":"something-else"})");
  EXPECT_THROW(load_model(dir / "bad.json"), ParseError);
}

TEST(Baseline, PejPredictionsOnLabelCountsFixture) {
  auto c = load_corpus(testing_helpers::source_dir() / "data" / "fixtures" / "label_counts_1200.jsonl",
                      Schema::pejorativity, &testing_helpers::bundled_lexicon());
  auto spans = match_corpus(c, default_matcher());
  Hyperparams hp;
  hp.epochs = 2;
  auto m = train_baseline(c, Task::pej, hp, 13, &spans);
  auto preds = predict(m, c, Task::pej, 0, &spans, Split::test);
  EXPECT_EQ(preds.size(), 96u);
  for (const auto& p : preds) {
    EXPECT_GE(p.score, 0.0);
    EXPECT_LE(p.score, 1.0);
    EXPECT_EQ(p.label, decide(p.score));
    EXPECT_EQ(p.task, Task::pej);
  }
}

// --- prediction interchange ------------------------------------------------------

TEST(Predictions, JsonlRoundTripAndRunIds) {
  std::vector<PredictionRecord> recs;
  for (int r = 0; r < 3; ++r)
    for (int i = 0; i < 4; ++i) recs.push_back({"t" + std::to_string(i), Task::mis, i % 2 == 0, 0.25 * i, r});
  auto dir = testing_helpers::scratch_dir("predictions");
  io::write_file(dir / "p.jsonl", predictions_to_jsonl(recs));
  auto back = load_external_predictions(dir / "p.jsonl");
  EXPECT_EQ(back, recs);
  EXPECT_EQ(run_ids(back), (std::set<int>{0, 1, 2}));
  auto labels = labels_for_run(back, Task::mis, 1);
  EXPECT_EQ(labels.size(), 4u);
  EXPECT_TRUE(labels.at("t0"));
  EXPECT_FALSE(labels.at("t1"));
}

TEST(Predictions, Validation) {
  auto dir = testing_helpers::scratch_dir("predictions_bad");
  io::write_file(dir / "score.jsonl", R"({"id":"1","task":"mis","label":true,"score":1.3,"run_id":0})" "\n");
  EXPECT_THROW(load_external_predictions(dir / "score.jsonl"), ValidationError);
  io::write_file(dir / "task.jsonl", R"({"id":"1","task":"other","label":true,"score":0.3,"run_id":0})" "\n");
  EXPECT_THROW(load_external_predictions(dir / "task.jsonl"), ParseError);
  io::write_file(dir / "missing.jsonl", R"({"id":"1","task":"mis","label":true,"run_id":0})" "\n");
  EXPECT_THROW(load_external_predictions(dir / "missing.jsonl"), ParseError);

  Corpus c;
  c.tweets = {tweet("1", "uno")};
  io::write_file(dir / "unknown.jsonl", R"({"id":"99","task":"mis","label":true,"score":0.3,"run_id":0})" "\n");
  EXPECT_THROW(load_external_predictions(dir / "unknown.jsonl", &c), ValidationError);
  EXPECT_NO_THROW(load_external_predictions(dir / "unknown.jsonl"));
}
