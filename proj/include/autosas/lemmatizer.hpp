#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autosas/spelling.hpp"
#include "autosas/text.hpp"

namespace autosas {

// Rewrites `suffix` to `replacement` for tags starting with `tag_prefix`.
// The replacement may carry flags after a '|': "doubled" (stem ends in a
// doubled consonant), "vc" (stem ends vowel+consonant), "plain-s" (stem does
// not end in s/u/i) and "dict" (only accepted when the result is a known
// word), e.g. {"VBG", "ing", "e|vc,dict"}.
struct SuffixRule {
  std::string tag_prefix;
  std::string suffix;
  std::string replacement;
};

struct LemmaRules {
  std::vector<SuffixRule> rules;  // tried in order
  // (tag prefix, word) -> lemma; checked before any suffix rule.
  std::map<std::string, std::unordered_map<std::string, std::string>> exceptions;

  static LemmaRules english();
  // Tab-separated records: "rule PREFIX suffix replacement" or
  // "exc PREFIX word lemma". Entries are appended to the built-in table.
  void load_file(const std::filesystem::path& path);
};

class Lemmatizer {
 public:
  explicit Lemmatizer(LemmaRules rules, std::shared_ptr<const Lexicon> dictionary = nullptr);

  // With a dictionary, the first rule output found in it wins; otherwise the
  // first applicable rule wins.
  std::string lemma(std::string_view word, std::string_view pos) const;

 private:
  LemmaRules rules_;
  std::shared_ptr<const Lexicon> dictionary_;
};

TaggedDoc lemmatize(TaggedDoc doc, const Lemmatizer& lemmatizer);

}  // namespace autosas
