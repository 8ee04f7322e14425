#pragma once

#include <filesystem>
#include <string>

#include "pejor/pejor.hpp"

namespace testing_helpers {

inline std::filesystem::path source_dir() { return PEJOR_SOURCE_DIR; }
inline std::filesystem::path test_data(const std::string& name) { return std::filesystem::path(PEJOR_TEST_DATA) / name; }
inline std::filesystem::path golden(const std::string& name) { return std::filesystem::path(PEJOR_GOLDEN_DIR) / name; }

inline const pejor::Lexicon& bundled_lexicon() {
  static const pejor::Lexicon lex = pejor::load_lexicon(source_dir() / "data" / "lexicon.tsv");
  return lex;
}

inline const pejor::Matcher& default_matcher() {
  static const pejor::Matcher m(bundled_lexicon(), pejor::LemmatizerConfig{});
  return m;
}

// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::current_path() / "scratch" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline pejor::AnnotatedTweet tweet(std::string id, std::string text, std::optional<std::string> target = std::nullopt,
                                   std::optional<bool> pej = false, std::optional<bool> mis = false,
                                   pejor::Split split = pejor::Split::train) {
  return {std::move(id), std::move(text), std::move(target), pej, mis, split};
}

}  // namespace testing_helpers
