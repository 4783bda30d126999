#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "autosas/text.hpp"

namespace autosas {

// The 45-tag Penn Treebank tagset.
std::span<const std::string_view> penn_tagset();
bool is_penn_tag(std::string_view tag);

// Tag forced by the token's shape alone: numbers -> CD, punctuation -> its
// punctuation tag. nullopt for ordinary words.
std::optional<std::string> shape_tag(std::string_view surface);

// word -> most likely tag, e.g. the Brill lexicon ("word TAG" per line).
class TagLexicon {
 public:
  static TagLexicon load(const std::filesystem::path& path);
  void add(std::string word, std::string tag);
  // Exact match first, then lowercase.
  std::optional<std::string_view> lookup(std::string_view word) const;
  std::size_t size() const { return tags_.size(); }
  bool empty() const { return tags_.empty(); }

 private:
  std::unordered_map<std::string, std::string> tags_;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<std::string> tag_sentence(std::span<const std::string> words) const = 0;
};

// Most-frequent-tag baseline with suffix and capitalisation heuristics for
// unknown words.
class LexiconTagger final : public PosTagger {
 public:
  explicit LexiconTagger(std::shared_ptr<const TagLexicon> lexicon);
  std::vector<std::string> tag_sentence(std::span<const std::string> words) const override;
  std::string tag_word(std::string_view word, bool sentence_initial) const;

 private:
  std::shared_ptr<const TagLexicon> lexicon_;
};

struct TaggedSentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
};

// Reads "word_TAG word_TAG ..." lines. Tags must belong to the Penn tagset.
std::vector<TaggedSentence> load_tagged_corpus(const std::filesystem::path& path);
std::vector<TaggedSentence> parse_tagged_corpus(std::string_view text, std::string_view source = "<memory>");

struct PerceptronOptions {
  int iterations = 8;
  std::uint64_t seed = 1;
  // Words seen at least this often with one dominant tag are tagged by lookup.
  int tagdict_min_count = 20;
  double tagdict_min_purity = 0.97;
};

// Greedy left-to-right averaged perceptron over contextual features
// (surrounding words, previous tags, affixes, word shape, lexicon tags).
class PerceptronTagger final : public PosTagger {
 public:
  static constexpr int kFormatVersion = 1;

  PerceptronTagger() = default;

  static PerceptronTagger train(std::span<const TaggedSentence> corpus,
                                std::shared_ptr<const TagLexicon> lexicon = nullptr,
                                const PerceptronOptions& options = {});
  static PerceptronTagger load(const std::filesystem::path& path,
                               std::shared_ptr<const TagLexicon> lexicon = nullptr);
  void save(const std::filesystem::path& path) const;

  std::vector<std::string> tag_sentence(std::span<const std::string> words) const override;

  std::size_t feature_count() const { return weights_.size(); }

 private:
  friend class PerceptronTrainer;

  std::vector<std::string> features(std::span<const std::string> words,
                                    std::size_t i,
                                    std::string_view prev,
                                    std::string_view prev2) const;
  std::size_t predict(const std::vector<std::string>& feats) const;

  std::vector<std::string> tags_;
  std::unordered_map<std::string, std::string> tagdict_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  std::shared_ptr<const TagLexicon> lexicon_;
};

// Fills Token::pos for every token; shape rules override the model.
TaggedDoc pos_tag(TaggedDoc doc, const PosTagger& tagger);

// Share of tokens whose predicted tag matches the gold tag.
double tagging_accuracy(const PosTagger& tagger, std::span<const TaggedSentence> gold);

}  // namespace autosas
