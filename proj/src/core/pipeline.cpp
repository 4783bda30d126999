#include "autosas/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "autosas/error.hpp"

namespace autosas {

TextPipeline::TextPipeline(std::shared_ptr<const PosTagger> tagger,
                           std::shared_ptr<const Lemmatizer> lemmatizer,
                           std::shared_ptr<const SpellCorrector> speller)
    : tagger_(std::move(tagger)), lemmatizer_(std::move(lemmatizer)), speller_(std::move(speller)) {
  if (!tagger_ || !lemmatizer_) throw InvalidArgument("text pipeline needs a tagger and a lemmatizer");
}

TaggedDoc TextPipeline::process(std::string_view text) const {
  TaggedDoc doc = tokenize_and_split(text);
  if (speller_) doc = correct_spelling(std::move(doc), *speller_);
  doc = pos_tag(std::move(doc), *tagger_);
  return lemmatize(std::move(doc), *lemmatizer_);
}

TextPipeline TextPipeline::with_speller(std::shared_ptr<const SpellCorrector> speller) const {
  return TextPipeline(tagger_, lemmatizer_, std::move(speller));
}

std::vector<std::string> prompt_vocabulary(const PromptSpec& prompt) {
  std::set<std::string> words;
  auto absorb = [&](std::string_view text) {
    for (const Token& t : tokenize_and_split(text).tokens) {
      if (!t.is_word()) continue;
      std::string w = to_lower_ascii(t.surface);
      if (std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) words.insert(w);
    }
  };
  absorb(prompt.question_text);
  if (prompt.passage_text) absorb(*prompt.passage_text);
  for (const auto& doc : prompt.reference_docs) absorb(doc);
  return {words.begin(), words.end()};
}

Lexicon domain_lexicon(const Lexicon& base, std::span<const std::string> words) {
  Lexicon lex = base;
  for (const auto& w : words) lex.add(w, 1);
  return lex;
}

}  // namespace autosas
