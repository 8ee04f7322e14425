// Matches lexicon words in a few sentences and shows both enrichment
// strategies for each connotation.

#include <iostream>

#include "pejor/pejor.hpp"

int main() {
  using namespace pejor;
  Matcher matcher(load_lexicon(std::string(kDefaultLexicon)), LemmatizerConfig{});

  const char* sentences[] = {
      "Sei una balena",
      "Le balene nuotano lontano",
      "Non voglio una cagna un cane ce l'ho giaaaa",
  };
  int n = 0;
  for (const char* text : sentences) {
    AnnotatedTweet tweet{"s" + std::to_string(++n), text, std::nullopt, std::nullopt, std::nullopt, Split::test};
    auto spans = matcher.find(tweet.text, tweet.id);
    std::cout << tweet.text << "\n";
    for (const auto& s : spans)
      std::cout << "  match [" << s.char_start << ", " << s.char_end << ") \"" << s.surface << "\" -> " << s.headword
                << "\n";
    for (auto c : {Connotation::pejorative, Connotation::neutral}) {
      ConnotationAssignment a{tweet.id, std::vector<Connotation>(spans.size(), c), LabelSource::gold};
      std::cout << "  " << to_string(c) << "\n";
      std::cout << "    concat: " << concat_enrich(tweet, spans, a).tweet.text << "\n";
      std::cout << "    subst:  " << subst_enrich(tweet, spans, a, matcher.lexicon()).tweet.text << "\n";
    }
  }
}
