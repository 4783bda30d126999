#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "autosas/text.hpp"

namespace autosas {

// Word list with optional corpus frequencies. Words are stored lowercase.
class Lexicon {
 public:
  Lexicon() = default;

  // One word per line, optionally followed by whitespace and a frequency.
  // Lines starting with ";;;" or "#" are comments. Missing frequency = 1.
  static Lexicon load(const std::filesystem::path& path);

  void add(std::string_view word, std::uint64_t frequency = 1);
  bool contains(std::string_view word) const;
  std::uint64_t frequency(std::string_view word) const;
  std::size_t size() const { return freq_.size(); }
  bool empty() const { return freq_.empty(); }

  const std::unordered_map<std::string, std::uint64_t>& entries() const { return freq_; }

 private:
  std::unordered_map<std::string, std::uint64_t> freq_;
};

// Optimal string alignment distance (Levenshtein plus adjacent
// transpositions), computed over bytes.
int osa_distance(std::string_view a, std::string_view b);

// Nearest-word lookup within edit distance 2 using a deletion-neighbourhood
// index over the lexicon.
class SpellCorrector {
 public:
  static constexpr int kMaxDistance = 2;
  // Tokens shorter than this are never rewritten.
  static constexpr std::size_t kMinLength = 3;

  explicit SpellCorrector(Lexicon lexicon);

  // Best replacement for a lowercase word, or nullopt when the word is known
  // or nothing lies within kMaxDistance. Ties go to the smaller distance,
  // then the higher frequency, then the alphabetically first word.
  std::optional<std::string> suggest(std::string_view word) const;

  const Lexicon& lexicon() const { return lexicon_; }

 private:
  Lexicon lexicon_;
  std::vector<std::string> words_;
  // (hash of deletion string, word id), sorted; collisions are filtered by
  // the exact distance check.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> deletes_;
};

// Rewrites all-lowercase alphabetic tokens that are not in the lexicon.
// Capitalised, mixed-case and digit-bearing tokens pass through unchanged.
TaggedDoc correct_spelling(TaggedDoc doc, const SpellCorrector& corrector);

}  // namespace autosas
