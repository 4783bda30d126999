#include "autosas/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "autosas/error.hpp"

namespace autosas {

namespace {

constexpr std::array<FeatureGroup, kGroupCount> kGroups = {
    FeatureGroup::Embeddings,       FeatureGroup::PosNgrams,  FeatureGroup::WeightedKeywords,
    FeatureGroup::PromptOverlap,    FeatureGroup::LexicalOverlap, FeatureGroup::LogicalOperators,
    FeatureGroup::Temporal,         FeatureGroup::LengthStats, FeatureGroup::WordFreqDifficulty};

constexpr std::array<std::string_view, kGroupCount> kGroupNames = {
    "embeddings", "pos_ngrams", "weighted_keywords", "prompt_overlap", "lexical_overlap",
    "logical_operators", "temporal", "length_stats", "word_freq_difficulty"};

constexpr std::array<std::string_view, kGroupCount> kGroupLabels = {
    "Word2Vec / Doc2Vec embeddings", "POS n-grams", "Weighted keywords",
    "Prompt overlap", "Lexical overlap", "Logical operators",
    "Temporal features", "Sentence and word length", "Word frequency and difficulty"};

bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalpha(u);
  });
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

bool is_aux_lemma(std::string_view lemma) { return lemma == "be" || lemma == "have" || lemma == "do"; }

bool is_adverb_gap(const Token& t) {
  const std::string lower = to_lower_ascii(t.surface);
  return starts_with(t.pos, "RB") || lower == "not" || lower == "n't";
}

// Index of the next token after i that is not an adverb, or end.
std::size_t skip_adverbs(const TaggedDoc& doc, std::size_t i, std::size_t end) {
  std::size_t j = i + 1;
  while (j < end && is_adverb_gap(doc.tokens[j])) ++j;
  return j;
}

std::vector<std::string> sentence_tags(const TaggedDoc& doc, std::pair<std::size_t, std::size_t> bounds) {
  std::vector<std::string> tags;
  for (std::size_t i = bounds.first; i < bounds.second; ++i) tags.push_back(doc.tokens[i].pos);
  return tags;
}

std::string join_gram(const std::vector<std::string>& tags, std::size_t start, int n) {
  std::string key = tags[start];
  for (int k = 1; k < n; ++k) {
    key += ' ';
    key += tags[start + static_cast<std::size_t>(k)];
  }
  return key;
}

}  // namespace

std::span<const FeatureGroup> all_groups() { return kGroups; }

std::string_view group_name(FeatureGroup g) { return kGroupNames[static_cast<std::size_t>(g)]; }

std::string_view group_label(FeatureGroup g) { return kGroupLabels[static_cast<std::size_t>(g)]; }

std::optional<FeatureGroup> parse_group(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '-', '_');
  key = to_lower_ascii(key);
  for (std::size_t i = 0; i < kGroupCount; ++i)
    if (kGroupNames[i] == key) return kGroups[i];
  return std::nullopt;
}

void FeatureSchema::add(std::string name, FeatureGroup group, bool normalize) {
  names.push_back(std::move(name));
  groups.push_back(group);
  mean.push_back(0.0);
  stddev.push_back(0.0);
  normalized.push_back(normalize);
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> FeatureSchema::members(FeatureGroup g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (groups[i] == g) out.push_back(i);
  return out;
}

std::uint64_t FeatureSchema::fingerprint() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  };
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (char c : names[i]) mix(static_cast<unsigned char>(c));
    mix(0);
    mix(static_cast<unsigned char>(groups[i]));
  }
  return h;
}

void FeatureSchema::validate() const {
  const std::size_t n = names.size();
  if (groups.size() != n || mean.size() != n || stddev.size() != n || normalized.size() != n)
    throw SchemaError("feature schema columns have inconsistent lengths");
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen.insert(names[i]).second) throw SchemaError("duplicate feature name '" + names[i] + "'");
    if (!std::isfinite(mean[i]) || !std::isfinite(stddev[i]) || stddev[i] < 0.0)
      throw SchemaError("non-finite normalization statistics for '" + names[i] + "'");
  }
}

// --- word classes ---------------------------------------------------------

const WordSet& default_stopwords() {
  static const WordSet words = {
      "a",       "about",   "above",  "after",   "again",   "against", "all",     "am",      "an",
      "and",     "any",     "are",    "as",      "at",      "be",      "because", "been",    "before",
      "being",   "below",   "between", "both",   "but",     "by",      "can",     "could",   "did",
      "do",      "does",    "doing",  "down",    "during",  "each",    "else",    "few",     "for",
      "from",    "further", "had",    "has",     "have",    "having",  "he",      "her",     "here",
      "hers",    "herself", "him",    "himself", "his",     "how",     "i",       "if",      "in",
      "into",    "is",      "it",     "its",     "itself",  "just",    "may",     "me",      "might",
      "more",    "most",    "must",   "my",      "myself",  "no",      "nor",     "not",     "now",
      "of",      "off",     "on",     "once",    "only",    "or",      "other",   "our",     "ours",
      "ourselves", "out",   "over",   "own",     "same",    "shall",   "she",     "should",  "so",
      "some",    "such",    "than",   "that",    "the",     "their",   "theirs",  "them",    "themselves",
      "then",    "there",   "these",  "they",    "this",    "those",   "through", "to",      "too",
      "under",   "until",   "up",     "very",    "was",     "we",      "were",    "what",    "when",
      "where",   "which",   "while",  "who",     "whom",    "why",     "will",    "with",    "would",
      "you",     "your",    "yours",  "yourself", "yourselves", "also", "s",      "t",       "'s",
      "n't",     "unless",  "whether", "although", "though", "yet",    "let",     "us",      "thing",
      "things"};
  return words;
}

WordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list: " + path.string());
  WordSet out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start < line.size()) out.insert(to_lower_ascii(line.substr(start)));
  }
  return out;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open synonym lexicon: " + path.string());
  SynonymLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 'word<TAB>syn1,syn2'");
    const std::string head = to_lower_ascii(line.substr(0, tab));
    std::string rest = line.substr(tab + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      auto comma = rest.find(',', start);
      if (comma == std::string::npos) comma = rest.size();
      std::string syn = rest.substr(start, comma - start);
      while (!syn.empty() && syn.front() == ' ') syn.erase(syn.begin());
      while (!syn.empty() && syn.back() == ' ') syn.pop_back();
      if (!syn.empty()) lex.add(head, to_lower_ascii(syn));
      start = comma + 1;
    }
  }
  return lex;
}

void SynonymLexicon::add(const std::string& word, const std::string& synonym) {
  if (word == synonym) return;
  map_[word].insert(synonym);
  map_[synonym].insert(word);
}

const std::set<std::string>* SynonymLexicon::find(const std::string& word) const {
  auto it = map_.find(word);
  return it == map_.end() ? nullptr : &it->second;
}

std::string norm_lemma(const Token& tok) {
  return tok.lemma.empty() ? to_lower_ascii(tok.surface) : tok.lemma;
}

bool is_noun(const Token& tok) { return starts_with(tok.pos, "NN"); }
bool is_verb(const Token& tok) { return starts_with(tok.pos, "VB"); }

bool is_open_class(const Token& tok) {
  return is_noun(tok) || is_verb(tok) || starts_with(tok.pos, "JJ") || starts_with(tok.pos, "RB");
}

bool is_content_word(const Token& tok, const WordSet& stopwords) {
  if (!tok.is_word() || !has_alpha(tok.surface)) return false;
  return !stopwords.count(to_lower_ascii(tok.surface)) && !stopwords.count(norm_lemma(tok));
}

std::set<std::string> content_lemmas(const TaggedDoc& doc, const WordSet& stopwords) {
  std::set<std::string> out;
  for (const Token& t : doc.tokens)
    if (is_content_word(t, stopwords)) out.insert(norm_lemma(t));
  return out;
}

std::set<std::string> noun_lemmas(const TaggedDoc& doc) {
  std::set<std::string> out;
  for (const Token& t : doc.tokens)
    if (is_noun(t) && t.is_word()) out.insert(norm_lemma(t));
  return out;
}

std::set<std::pair<std::string, std::string>> argument_pairs(const TaggedDoc& doc) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [first, last] : doc.sentence_bounds) {
    std::vector<std::size_t> verbs, main_verbs;
    for (std::size_t i = first; i < last; ++i) {
      if (!is_verb(doc.tokens[i])) continue;
      verbs.push_back(i);
      if (!is_aux_lemma(norm_lemma(doc.tokens[i]))) main_verbs.push_back(i);
    }
    const auto& pool = main_verbs.empty() ? verbs : main_verbs;
    if (pool.empty()) continue;
    for (std::size_t i = first; i < last; ++i) {
      const Token& t = doc.tokens[i];
      if (!is_noun(t) || !t.is_word()) continue;
      std::size_t best = pool.front();
      std::size_t best_dist = best > i ? best - i : i - best;
      for (std::size_t v : pool) {
        const std::size_t dist = v > i ? v - i : i - v;
        if (dist < best_dist) {  // earlier verb wins ties
          best = v;
          best_dist = dist;
        }
      }
      out.emplace(norm_lemma(t), norm_lemma(doc.tokens[best]));
    }
  }
  return out;
}

std::set<std::string> open_class_lemmas(const TaggedDoc& doc, const WordSet& stopwords) {
  std::set<std::string> out;
  for (const Token& t : doc.tokens)
    if (is_open_class(t) && is_content_word(t, stopwords)) out.insert(norm_lemma(t));
  return out;
}

// --- POS n-grams ----------------------------------------------------------

NgramCounts count_pos_ngrams(const TaggedDoc& doc) {
  NgramCounts counts;
  for (const auto& bounds : doc.sentence_bounds) {
    const auto tags = sentence_tags(doc, bounds);
    for (int n = kMinNgram; n <= kMaxNgram; ++n) {
      if (tags.size() < static_cast<std::size_t>(n)) continue;
      for (std::size_t s = 0; s + static_cast<std::size_t>(n) <= tags.size(); ++s)
        ++counts[static_cast<std::size_t>(n - kMinNgram)][join_gram(tags, s, n)];
    }
  }
  return counts;
}

NgramCounts pooled_high_grade_counts(std::span<const TaggedDoc> docs,
                                     std::span<const int> grades,
                                     int high_grade_cutoff) {
  if (docs.size() != grades.size()) throw InvalidArgument("docs and grades differ in length");
  NgramCounts pooled;
  bool any = false;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (grades[i] < high_grade_cutoff) continue;
    any = true;
    const auto c = count_pos_ngrams(docs[i]);
    for (std::size_t k = 0; k < 3; ++k)
      for (const auto& [gram, n] : c[k]) pooled[k][gram] += n;
  }
  if (!any)
    throw InvalidArgument("no training response reaches the high-grade cutoff " + std::to_string(high_grade_cutoff));
  return pooled;
}

SignificantNgramSet select_ngrams(const NgramCounts& pooled, long incidence_threshold) {
  SignificantNgramSet set;
  set.incidence_threshold = incidence_threshold;
  for (std::size_t k = 0; k < 3; ++k)
    for (const auto& [gram, n] : pooled[k])
      if (n > incidence_threshold) set.grams[k].insert(gram);
  return set;
}

SignificantNgramSet fit_pos_ngram_vocab(std::span<const TaggedDoc> docs,
                                        std::span<const int> grades,
                                        int high_grade_cutoff,
                                        long incidence_threshold) {
  return select_ngrams(pooled_high_grade_counts(docs, grades, high_grade_cutoff), incidence_threshold);
}

NgramFeatures pos_ngram_features(const TaggedDoc& doc, const SignificantNgramSet& set) {
  NgramFeatures f;
  const auto counts = count_pos_ngrams(doc);
  for (std::size_t k = 0; k < 3; ++k) {
    long total = 0, hit = 0;
    for (const auto& [gram, n] : counts[k]) {
      total += n;
      if (set.grams[k].count(gram)) hit += n;
    }
    f.count[k] = static_cast<double>(hit);
    f.ratio[k] = total > 0 ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
  }
  return f;
}

// --- keywords ---------------------------------------------------------------

KeywordWeights fit_keyword_weights(std::span<const TaggedDoc> reference_docs, const WordSet& stopwords) {
  const double d = static_cast<double>(reference_docs.size());
  std::vector<std::map<std::string, double>> tf(reference_docs.size());
  std::map<std::string, std::size_t> df;
  for (std::size_t i = 0; i < reference_docs.size(); ++i) {
    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const Token& t : reference_docs[i].tokens) {
      if (!is_content_word(t, stopwords)) continue;
      ++counts[norm_lemma(t)];
      ++total;
    }
    for (const auto& [w, c] : counts) {
      tf[i][w] = static_cast<double>(c) / static_cast<double>(total);
      ++df[w];
    }
  }
  KeywordWeights weights;
  for (const auto& [w, n] : df) {
    const double idf = std::log((1.0 + d) / (1.0 + static_cast<double>(n)));
    if (idf <= 0.0) continue;
    double best = 0.0;
    for (const auto& doc_tf : tf)
      if (auto it = doc_tf.find(w); it != doc_tf.end()) best = std::max(best, it->second * idf);
    if (best > 0.0) weights[w] = best;
  }
  return weights;
}

KeywordFeatures keyword_features(const TaggedDoc& doc, const KeywordWeights& weights) {
  KeywordFeatures f;
  std::set<std::string> seen;
  for (const Token& t : doc.tokens) {
    if (!t.is_word()) continue;
    const std::string lemma = norm_lemma(t);
    auto it = weights.find(lemma);
    if (it == weights.end() || !seen.insert(lemma).second) continue;
    f.weight_sum += it->second;
    f.matched += 1.0;
  }
  return f;
}

// --- overlaps ---------------------------------------------------------------

PromptOverlap prompt_overlap(const std::set<std::string>& response_content,
                             const std::set<std::string>& question_content) {
  PromptOverlap f;
  if (question_content.empty()) return f;
  std::size_t common = 0;
  for (const auto& w : question_content) common += response_content.count(w);
  const std::size_t uni = response_content.size() + question_content.size() - common;
  f.coverage = static_cast<double>(common) / static_cast<double>(question_content.size());
  f.jaccard = uni ? static_cast<double>(common) / static_cast<double>(uni) : 0.0;
  return f;
}

PassageSets passage_sets(const TaggedDoc& passage, const WordSet& stopwords) {
  return {noun_lemmas(passage), argument_pairs(passage), open_class_lemmas(passage, stopwords)};
}

LexicalOverlap lexical_overlap(const TaggedDoc& response,
                               const PassageSets& passage,
                               const WordSet& stopwords,
                               const SynonymLexicon* synonyms) {
  LexicalOverlap f;
  f.noun = coverage_of(passage.nouns, noun_lemmas(response));
  f.argument = coverage_of(passage.arguments, argument_pairs(response));
  std::set<std::string> content = open_class_lemmas(response, stopwords);
  if (synonyms && !synonyms->empty()) {
    std::set<std::string> expanded = content;
    for (const auto& w : content)
      if (const auto* syn = synonyms->find(w)) expanded.insert(syn->begin(), syn->end());
    content = std::move(expanded);
  }
  f.content = coverage_of(passage.content, content);
  return f;
}

// --- logical operators ------------------------------------------------------

LogicalCounts logical_operator_counts(const TaggedDoc& doc) {
  LogicalCounts c;
  auto op_index = [](const Token& t) -> int {
    if (!t.is_word()) return -1;
    const std::string w = to_lower_ascii(t.surface);
    for (std::size_t k = 0; k < kLogicalOperators.size(); ++k)
      if (w == kLogicalOperators[k]) return static_cast<int>(k);
    if (w.size() > 3 && w.compare(w.size() - 3, 3, "n't") == 0) return 2;
    if (w.size() > 3 && w.compare(w.size() - 3, 3, "n\xE2\x80\x99t") == 0) return 2;
    return -1;
  };
  for (const auto& [first, last] : doc.sentence_bounds) {
    for (std::size_t i = first; i < last; ++i) {
      const int k = op_index(doc.tokens[i]);
      if (k < 0) continue;
      c.op[static_cast<std::size_t>(k)] += 1.0;
      if (kLogicalOperators[static_cast<std::size_t>(k)] != "if") continue;
      bool then_seen = false, else_seen = false;
      for (std::size_t j = i + 1; j < last; ++j) {
        const int kj = op_index(doc.tokens[j]);
        if (kj < 0) continue;
        const auto name = kLogicalOperators[static_cast<std::size_t>(kj)];
        if (name == "if") break;
        if (name == "then") then_seen = true;
        if (name == "else") else_seen = true;
      }
      c.if_then += then_seen ? 1.0 : 0.0;
      c.if_else += else_seen ? 1.0 : 0.0;
    }
  }
  for (double v : c.op) c.total += v;
  return c;
}

// --- temporal ---------------------------------------------------------------

TemporalCounts temporal_features(const TaggedDoc& doc) {
  TemporalCounts c;
  int previous = -1;  // 0 past, 1 present, 2 future
  for (const auto& [first, last] : doc.sentence_bounds) {
    double past = 0, present = 0, future = 0;
    for (std::size_t i = first; i < last; ++i) {
      const Token& t = doc.tokens[i];
      if (t.pos == "VBD") past += 1;
      if (t.pos == "VBD" || t.pos == "VBN") c.past += 1;
      if (t.pos == "VBP" || t.pos == "VBZ") {
        c.present += 1;
        present += 1;
      }
      const std::size_t j = skip_adverbs(doc, i, last);
      if (j >= last) continue;
      const Token& next = doc.tokens[j];
      const std::string lower = to_lower_ascii(t.surface);
      if ((lower == "will" || lower == "shall") && next.pos == "VB") {
        c.future += 1;
        future += 1;
      }
      const std::string lemma = norm_lemma(t);
      if (lemma == "be" && next.pos == "VBG") c.progressive += 1;
      if (lemma == "have" && next.pos == "VBN") c.perfect += 1;
    }
    int tense = -1;
    const double top = std::max({past, present, future});
    if (top > 0) {
      const int ties = (past == top) + (present == top) + (future == top);
      if (ties == 1) tense = past == top ? 0 : present == top ? 1 : 2;
    }
    if (tense < 0) continue;
    if (previous >= 0 && tense != previous) c.tense_switches += 1;
    previous = tense;
  }
  return c;
}

// --- length -------------------------------------------------------------------

LengthStats length_stats(const TaggedDoc& doc) {
  LengthStats s;
  std::size_t chars = 0;
  for (const auto& [first, last] : doc.sentence_bounds) {
    double words = 0;
    for (std::size_t i = first; i < last; ++i) {
      if (!doc.tokens[i].is_word()) continue;
      words += 1;
      chars += utf8_length(doc.tokens[i].surface);
    }
    s.word_count += words;
    s.max_sentence_length = std::max(s.max_sentence_length, words);
  }
  s.sentence_count = static_cast<double>(doc.sentence_count());
  if (s.sentence_count > 0) s.mean_sentence_length = s.word_count / s.sentence_count;
  if (s.word_count > 0) s.mean_word_length = static_cast<double>(chars) / s.word_count;
  return s;
}

// --- difficulty -------------------------------------------------------------

DifficultyLexicon DifficultyLexicon::from_frequencies(const Lexicon& freq) {
  std::vector<std::pair<std::string, std::uint64_t>> ranked(freq.entries().begin(), freq.entries().end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  DifficultyLexicon lex;
  const std::size_t n = ranked.size();
  for (std::size_t r = 0; r < n; ++r)
    lex.levels_[ranked[r].first] = static_cast<int>(r * kDifficultyLevels / n) + 1;
  return lex;
}

void DifficultyLexicon::set(const std::string& word, int level) {
  if (level < 1 || level > kDifficultyLevels)
    throw InvalidArgument("difficulty level must lie in 1.." + std::to_string(kDifficultyLevels));
  levels_[to_lower_ascii(word)] = level;
}

int DifficultyLexicon::level(std::string_view word) const {
  auto it = levels_.find(std::string(word));
  return it == levels_.end() ? 0 : it->second;
}

DifficultyFeatures difficulty_diversity_features(const TaggedDoc& doc, const DifficultyLexicon& lexicon) {
  DifficultyFeatures f;
  std::set<std::string> distinct;
  double total = 0;
  for (const Token& t : doc.tokens) {
    if (!t.is_word()) continue;
    total += 1;
    const std::string lemma = norm_lemma(t);
    distinct.insert(lemma);
    int level = lexicon.level(to_lower_ascii(t.surface));
    if (level == 0) level = lexicon.level(lemma);
    f.histogram[level == 0 ? kDifficultyLevels : static_cast<std::size_t>(level - 1)] += 1;
  }
  f.unique_words = static_cast<double>(distinct.size());
  f.ttr = total > 0 ? f.unique_words / total : 0.0;
  return f;
}

}  // namespace autosas
