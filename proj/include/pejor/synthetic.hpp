#pragma once

// Deterministic synthetic corpora for hermetic tests and demos:
//  * a fixture with the exact label counts of the released corpus table
//    (1,200 tweets, 50 per lexicon word), and
//  * a small directional corpus in which misogyny follows the pejorative use
//    of an ambiguous lexicon word and context gives only weak cues, and
//  * embedding sets with a planted geometry for the anchor-similarity analysis.

#include <array>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pejor/corpus.hpp"
#include "pejor/embedding.hpp"
#include "pejor/lexicon.hpp"
#include "pejor/matcher.hpp"
#include "pejor/random.hpp"
#include "pejor/utf8.hpp"

namespace pejor::synthetic {

// Neutral filler vocabulary. Words that happen to match a lexicon headword
// are dropped at generation time.
inline constexpr std::array<std::string_view, 96> kFiller = {
    "oggi",      "domani",    "ieri",       "sempre",    "mai",       "ancora",     "molto",      "poco",
    "tutto",     "niente",    "qualcosa",   "casa",      "strada",    "treno",      "autobus",    "piazza",
    "città",     "paese",     "giardino",   "finestra",  "porta",     "tavolo",     "sedia",      "libro",
    "giornale",  "telefono",  "computer",   "lavoro",    "ufficio",   "scuola",     "università", "esame",
    "vacanza",   "estate",    "inverno",    "autunno",   "primavera", "pioggia",    "sole",       "vento",
    "neve",      "montagna",  "collina",    "fiume",     "lago",      "bosco",      "pranzo",     "cena",
    "colazione", "caffè",     "pane",       "pasta",     "pizza",     "formaggio",  "vino",       "birra",
    "amici",     "famiglia",  "fratello",   "cugino",    "nonno",     "vicino",     "collega",    "partita",
    "squadra",   "calcio",    "musica",     "concerto",  "film",      "serie",      "canzone",    "foto",
    "video",     "post",      "commento",   "risposta",  "domanda",   "notizia",    "politica",   "governo",
    "elezioni",  "sindaco",   "mercato",    "negozio",   "prezzo",    "euro",       "settimana",  "mese",
    "anno",      "sera",      "mattina",    "notte",     "weekend",   "festa",      "viaggio",    "macchina",
};

inline constexpr std::array<std::string_view, 8> kPejorativeCues = {
    "schifo", "vergogna", "zitta", "ridicola", "insopportabile", "odiosa", "imbarazzante", "pessima",
};

inline constexpr std::array<std::string_view, 8> kNeutralCues = {
    "zoo", "documentario", "fattoria", "natura", "allevamento", "veterinario", "acquario", "museo",
};

inline constexpr std::array<std::string_view, 6> kPejorativeFrames = {
    "sei proprio una {w}", "che {w} che sei", "quella {w} non capisce", "guarda questa {w}",
    "sempre la solita {w}", "ma stai zitta {w}",
};

inline constexpr std::array<std::string_view, 6> kNeutralFrames = {
    "ho visto una {w}", "la {w} del vicino", "una {w} in televisione", "foto di una {w}",
    "parlavamo della {w}", "ecco la {w} di oggi",
};

inline std::string fill(std::string_view frame, std::string_view word) {
  std::string out(frame);
  auto pos = out.find("{w}");
  out.replace(pos, 3, word);
  return out;
}

inline std::vector<std::string> clean_filler(const Matcher& matcher) {
  std::vector<std::string> out;
  for (auto w : kFiller)
    if (!matcher.match_token(utf8::decode(w))) out.emplace_back(w);
  return out;
}

inline std::string filler_tail(rnd::Engine& rng, const std::vector<std::string>& filler, std::size_t lo,
                               std::size_t hi) {
  std::string out;
  auto n = lo + rnd::index(rng, hi - lo + 1);
  for (std::size_t i = 0; i < n; ++i) out += " " + rnd::pick(filler, rng);
  return out;
}

// Plural form the matcher maps back to the headword.
inline std::string plural(std::string_view word) {
  std::string w(word);
  if (w == "cesso") return "cessi";
  if (w.ends_with("ca")) return w.substr(0, w.size() - 2) + "che";
  if (w.ends_with("ga")) return w.substr(0, w.size() - 2) + "ghe";
  if (w.ends_with("a")) return w.substr(0, w.size() - 1) + "e";
  return w;
}

struct LabelCounts {
  // {misogynous, pejorative, split, count}
  struct Cell {
    bool mis;
    bool pej;
    Split split;
    std::size_t n;
  };
  std::vector<Cell> cells = {
      {true, true, Split::train, 363},   {true, false, Split::train, 6},  {false, true, Split::train, 172},
      {false, false, Split::train, 563}, {true, true, Split::test, 28},   {true, false, Split::test, 0},
      {false, true, Split::test, 18},    {false, false, Split::test, 50},
  };
};

// 1,200 tweets, 50 per lexicon word, with the label counts of the released
// corpus statistics.
inline Corpus label_counts_fixture(const Matcher& matcher, std::uint64_t seed = 7) {
  rnd::Engine rng(seed);
  auto filler = clean_filler(matcher);
  struct Labels {
    bool mis, pej;
    Split split;
  };
  std::vector<Labels> labels;
  for (const auto& c : LabelCounts{}.cells)
    for (std::size_t i = 0; i < c.n; ++i) labels.push_back({c.mis, c.pej, c.split});
  rnd::shuffle(std::span<Labels>(labels), rng);

  auto words = matcher.lexicon().words();
  Corpus corpus;
  corpus.schema = Schema::pejorativity;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    const auto& word = words[i % words.size()];
    const auto& frames = l.pej ? kPejorativeFrames : kNeutralFrames;
    auto text = fill(rnd::pick(frames, rng), word) + filler_tail(rng, filler, 2, 6);
    char id[32];
    std::snprintf(id, sizeof id, "pj%04zu", i + 1);
    corpus.tweets.push_back({id, text, word, l.pej, l.mis, l.split});
  }
  return corpus;
}

struct DirectionalOptions {
  std::size_t size = 400;
  std::size_t test_size = 100;
  double cue_rate = 0.35;       // chance a tweet carries a context cue of its class
  double label_noise = 0.05;    // chance misogyny disagrees with pejorativity
  double plural_rate = 0.15;
  std::uint64_t seed = 11;
};

// Misogyny follows the pejorative use of the lexicon word, which the surface
// context reveals only through occasional cue words.
inline Corpus directional_corpus(const Matcher& matcher, const DirectionalOptions& opt = {}) {
  rnd::Engine rng(opt.seed);
  auto filler = clean_filler(matcher);
  auto words = matcher.lexicon().words();
  Corpus corpus;
  corpus.schema = Schema::pejorativity;
  for (std::size_t i = 0; i < opt.size; ++i) {
    const auto& word = rnd::pick(words, rng);
    bool pej = rnd::bernoulli(rng, 0.5);
    bool mis = rnd::bernoulli(rng, opt.label_noise) ? !pej : pej;
    std::string form = rnd::bernoulli(rng, opt.plural_rate) ? plural(word) : word;
    // Frames are drawn from both pools so the frame carries no label signal.
    const auto& frames = rnd::bernoulli(rng, 0.5) ? kPejorativeFrames : kNeutralFrames;
    std::string text = fill(rnd::pick(frames, rng), form) + filler_tail(rng, filler, 3, 7);
    if (rnd::bernoulli(rng, opt.cue_rate)) {
      const auto& cues = pej ? kPejorativeCues : kNeutralCues;
      text += " " + std::string(rnd::pick(cues, rng));
    }
    text += filler_tail(rng, filler, 0, 2);
    char id[32];
    std::snprintf(id, sizeof id, "syn%04zu", i + 1);
    Split split = i < opt.size - opt.test_size ? Split::train : Split::test;
    corpus.tweets.push_back({id, text, word, pej, mis, split});
  }
  return corpus;
}

struct GeometryOptions {
  std::size_t dim = 32;
  double finetuned_pull = 1.0;   // weight of the anchors of the sample's own class
  double pretrained_pull = 0.4;  // weight of all anchors, class-blind
  double noise = 0.6;
  std::uint64_t seed = 3;
};

// Anchor vectors are random directions shared by both model tags. Fine-tuned
// occurrence vectors lean towards the anchors matching the gold pejorative
// label of their tweet; pretrained ones lean towards all anchors equally.
inline std::vector<EmbeddingRecord> geometry_embeddings(const Corpus& corpus, const Matcher& matcher,
                                                        const GeometryOptions& opt = {}) {
  rnd::Engine rng(opt.seed);
  auto gaussian = [&] {
    Vector v(opt.dim);
    for (auto& x : v) x = rnd::normal(rng);
    return v;
  };
  std::map<std::string, Vector> anchor_vec;
  for (const auto& word : matcher.lexicon().words())
    for (auto conn : {Connotation::neutral, Connotation::pejorative})
      for (const auto& a : matcher.lexicon().at(word).anchors(conn))
        if (!anchor_vec.contains(a)) anchor_vec[a] = gaussian();

  auto centroid = [&](const std::vector<std::string>& anchors) {
    std::vector<Vector> vs;
    for (const auto& a : anchors) vs.push_back(anchor_vec.at(a));
    return mean_pool(vs);
  };

  std::vector<EmbeddingRecord> out;
  for (auto tag : {ModelTag::pretrained, ModelTag::finetuned})
    for (const auto& [a, v] : anchor_vec) out.push_back({"anchor:" + a, EmbeddingKind::anchor, a, tag, v});

  for (const auto& t : corpus.tweets) {
    if (!t.pejorative) continue;
    for (const auto& s : target_spans(matcher.find(t.text, t.id), t.target_word)) {
      const auto& e = matcher.lexicon().at(s.headword);
      auto own = centroid(e.anchors(connotation_of(*t.pejorative)));
      auto all = e.neutral_anchors;
      all.insert(all.end(), e.pejorative_anchors.begin(), e.pejorative_anchors.end());
      auto both = centroid(all);
      for (auto tag : {ModelTag::pretrained, ModelTag::finetuned}) {
        auto v = gaussian();
        const auto& pull = tag == ModelTag::finetuned ? own : both;
        double w = tag == ModelTag::finetuned ? opt.finetuned_pull : opt.pretrained_pull;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = opt.noise * v[i] + w * pull[i];
        out.push_back({occurrence_id(s), EmbeddingKind::lexicon_occurrence, s.headword, tag, std::move(v)});
      }
    }
  }
  return out;
}

}  // namespace pejor::synthetic
