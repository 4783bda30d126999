#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "autosas/spelling.hpp"
#include "autosas/text.hpp"

namespace autosas {

enum class FeatureGroup : int {
  Embeddings = 0,
  PosNgrams,
  WeightedKeywords,
  PromptOverlap,
  LexicalOverlap,
  LogicalOperators,
  Temporal,
  LengthStats,
  WordFreqDifficulty,
};

inline constexpr std::size_t kGroupCount = 9;

std::span<const FeatureGroup> all_groups();
// snake_case identifier, e.g. "pos_ngrams".
std::string_view group_name(FeatureGroup g);
// Display label, e.g. "POS n-grams".
std::string_view group_label(FeatureGroup g);
// Accepts the identifier with '_' or '-'.
std::optional<FeatureGroup> parse_group(std::string_view name);

struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<FeatureGroup> groups;
  std::vector<double> mean;
  std::vector<double> stddev;
  // false for columns passed through unscaled (the embedding block).
  std::vector<bool> normalized;

  std::size_t size() const { return names.size(); }
  void add(std::string name, FeatureGroup group, bool normalize = true);
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::size_t> members(FeatureGroup g) const;
  // FNV-1a over names and groups.
  std::uint64_t fingerprint() const;
  // Throws SchemaError on duplicate names or length mismatches.
  void validate() const;
};

// --- word classes ---------------------------------------------------------

using WordSet = std::unordered_set<std::string>;

// Common English function words.
const WordSet& default_stopwords();
// One word per line; '#' starts a comment.
WordSet load_stopwords(const std::filesystem::path& path);

// Symmetric: every listed synonym also maps back to the head word.
class SynonymLexicon {
 public:
  // "word<TAB>syn1,syn2,..." per line.
  static SynonymLexicon load(const std::filesystem::path& path);
  void add(const std::string& word, const std::string& synonym);
  const std::set<std::string>* find(const std::string& word) const;
  bool empty() const { return map_.empty(); }

 private:
  std::unordered_map<std::string, std::set<std::string>> map_;
};

// Lowercased lemma (or surface when untagged) of a word token.
std::string norm_lemma(const Token& tok);
bool is_noun(const Token& tok);
bool is_verb(const Token& tok);
bool is_open_class(const Token& tok);
bool is_content_word(const Token& tok, const WordSet& stopwords);

std::set<std::string> content_lemmas(const TaggedDoc& doc, const WordSet& stopwords);
std::set<std::string> noun_lemmas(const TaggedDoc& doc);
// (noun lemma, lemma of the nearest main verb in the same sentence), where
// auxiliary be/have/do count only when the sentence has no other verb.
std::set<std::pair<std::string, std::string>> argument_pairs(const TaggedDoc& doc);
std::set<std::string> open_class_lemmas(const TaggedDoc& doc, const WordSet& stopwords);

// --- POS n-grams ----------------------------------------------------------

inline constexpr int kMinNgram = 2;
inline constexpr int kMaxNgram = 4;

// Tag n-grams within sentences, keyed "DT NN VBD", with total occurrence
// counts per n (index n - 2).
using NgramCounts = std::array<std::map<std::string, long>, 3>;

NgramCounts count_pos_ngrams(const TaggedDoc& doc);

struct SignificantNgramSet {
  std::array<std::set<std::string>, 3> grams;
  long incidence_threshold = 0;

  bool empty() const { return grams[0].empty() && grams[1].empty() && grams[2].empty(); }
};

inline constexpr long kNoNgrams = std::numeric_limits<long>::max();

// Incidence = total occurrences across the docs graded >= cutoff; an n-gram
// is kept when its incidence exceeds the threshold.
SignificantNgramSet fit_pos_ngram_vocab(std::span<const TaggedDoc> docs,
                                        std::span<const int> grades,
                                        int high_grade_cutoff,
                                        long incidence_threshold);
NgramCounts pooled_high_grade_counts(std::span<const TaggedDoc> docs,
                                     std::span<const int> grades,
                                     int high_grade_cutoff);
SignificantNgramSet select_ngrams(const NgramCounts& pooled, long incidence_threshold);

// Per n: number of the doc's n-grams found in the set, then that number over
// all of the doc's n-grams (0 when the doc has none).
struct NgramFeatures {
  std::array<double, 3> count{};
  std::array<double, 3> ratio{};
};
NgramFeatures pos_ngram_features(const TaggedDoc& doc, const SignificantNgramSet& set);

// --- keywords ---------------------------------------------------------------

using KeywordWeights = std::map<std::string, double>;

// weight(w) = max over docs d of tf(w, d) * log((1 + D) / (1 + df(w))), with
// tf the share of d's content words equal to w.
KeywordWeights fit_keyword_weights(std::span<const TaggedDoc> reference_docs, const WordSet& stopwords);

struct KeywordFeatures {
  double weight_sum = 0.0;
  double matched = 0.0;
};
KeywordFeatures keyword_features(const TaggedDoc& doc, const KeywordWeights& weights);

// --- overlaps ---------------------------------------------------------------

struct PromptOverlap {
  double coverage = 0.0;
  double jaccard = 0.0;
};
PromptOverlap prompt_overlap(const std::set<std::string>& response_content,
                             const std::set<std::string>& question_content);

struct PassageSets {
  std::set<std::string> nouns;
  std::set<std::pair<std::string, std::string>> arguments;
  std::set<std::string> content;
};
PassageSets passage_sets(const TaggedDoc& passage, const WordSet& stopwords);

struct LexicalOverlap {
  double noun = 0.0;
  double argument = 0.0;
  double content = 0.0;
};
// Denominators are the passage-side set sizes.
LexicalOverlap lexical_overlap(const TaggedDoc& response,
                               const PassageSets& passage,
                               const WordSet& stopwords,
                               const SynonymLexicon* synonyms = nullptr);

// |a ∩ b| / |a|, or 0 when a is empty.
template <typename T>
double coverage_of(const std::set<T>& a, const std::set<T>& b) {
  if (a.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& x : a) hit += b.count(x);
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

// --- logical operators ------------------------------------------------------

inline constexpr std::array<std::string_view, 10> kLogicalOperators = {
    "and", "or", "not", "if", "else", "then", "unless", "whether", "although", "but"};

struct LogicalCounts {
  std::array<double, 10> op{};
  double if_then = 0.0;
  double if_else = 0.0;
  double total = 0.0;
};
// An "if" pairs with a following "then"/"else" in the same sentence before
// the next "if". Contractions ending in n't count as "not".
LogicalCounts logical_operator_counts(const TaggedDoc& doc);

// --- temporal ---------------------------------------------------------------

struct TemporalCounts {
  double past = 0.0;
  double present = 0.0;
  double future = 0.0;
  double progressive = 0.0;
  double perfect = 0.0;
  double tense_switches = 0.0;
};
// A sentence's tense is whichever of past/present/future has the most
// markers (no tense on a tie); switches count changes between consecutive
// sentences that have one.
TemporalCounts temporal_features(const TaggedDoc& doc);

// --- length -------------------------------------------------------------------

struct LengthStats {
  double sentence_count = 0.0;
  double word_count = 0.0;
  double mean_sentence_length = 0.0;
  double mean_word_length = 0.0;
  double max_sentence_length = 0.0;
};
LengthStats length_stats(const TaggedDoc& doc);

// --- difficulty -------------------------------------------------------------

inline constexpr int kDifficultyLevels = 20;

class DifficultyLexicon {
 public:
  // Ranks by descending frequency (ties alphabetical) and cuts the ranking
  // into 20 equal-population levels, level 1 being the most frequent.
  static DifficultyLexicon from_frequencies(const Lexicon& freq);
  void set(const std::string& word, int level);
  // 0 when unknown.
  int level(std::string_view word) const;
  std::size_t size() const { return levels_.size(); }

 private:
  std::unordered_map<std::string, int> levels_;
};

struct DifficultyFeatures {
  // Levels 1..20 then the out-of-lexicon bin.
  std::array<double, kDifficultyLevels + 1> histogram{};
  double unique_words = 0.0;
  double ttr = 0.0;
};
DifficultyFeatures difficulty_diversity_features(const TaggedDoc& doc, const DifficultyLexicon& lexicon);

}  // namespace autosas
