#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autosas/corpus.hpp"
#include "autosas/lemmatizer.hpp"
#include "autosas/spelling.hpp"
#include "autosas/tagger.hpp"
#include "autosas/text.hpp"

namespace autosas {

// tokenize -> spell-correct -> tag -> lemmatize
class TextPipeline {
 public:
  TextPipeline(std::shared_ptr<const PosTagger> tagger,
               std::shared_ptr<const Lemmatizer> lemmatizer,
               std::shared_ptr<const SpellCorrector> speller = nullptr);

  TaggedDoc process(std::string_view text) const;

  TextPipeline with_speller(std::shared_ptr<const SpellCorrector> speller) const;
  bool spell_checks() const { return speller_ != nullptr; }

 private:
  std::shared_ptr<const PosTagger> tagger_;
  std::shared_ptr<const Lemmatizer> lemmatizer_;
  std::shared_ptr<const SpellCorrector> speller_;
};

// Sorted lowercase a-z words of the prompt's question, passage and reference
// documents.
std::vector<std::string> prompt_vocabulary(const PromptSpec& prompt);

// Base lexicon plus the given words, so topic vocabulary is never
// "corrected" away.
Lexicon domain_lexicon(const Lexicon& base, std::span<const std::string> words);

}  // namespace autosas
