#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "autosas/corpus.hpp"
#include "autosas/embeddings.hpp"
#include "autosas/features.hpp"
#include "autosas/pipeline.hpp"

namespace autosas {

using GroupMask = std::array<bool, kGroupCount>;

inline GroupMask all_groups_enabled() {
  GroupMask m;
  m.fill(true);
  return m;
}

struct ExtractorOptions {
  GroupMask enabled = all_groups_enabled();
  // Defaults to ceil((grade_min + grade_max) / 2).
  std::optional<int> high_grade_cutoff;
  long ngram_threshold = 0;
  bool remove_common_component = false;
};

// Read-only inputs shared by every prompt.
struct ExtractorResources {
  std::shared_ptr<const EmbeddingTable> embeddings;  // may be null
  std::shared_ptr<const DifficultyLexicon> difficulty;
  std::shared_ptr<const WordSet> stopwords;
  std::shared_ptr<const SynonymLexicon> synonyms;  // may be null
};

// Everything learned from a prompt's training data.
struct FittedFeatures {
  std::string prompt_id;
  int grade_min = 0;
  int grade_max = 3;
  GroupMask enabled = all_groups_enabled();
  std::set<std::string> question_content;
  std::optional<PassageSets> passage;
  int high_grade_cutoff = 2;
  SignificantNgramSet ngrams;
  KeywordWeights keywords;
  std::size_t embedding_dim = 0;  // 0: no embedding block
  std::map<std::string, double> doc_idf;  // empty: table idf (or uniform)
  std::vector<double> common_component;
  FeatureSchema schema;
};

class FeatureExtractor {
 public:
  FeatureExtractor(ExtractorResources resources, FittedFeatures state);

  // Fits prompt word sets, the n-gram vocabulary, keyword weights, document
  // idf and normalization statistics. Only `train` is read.
  static FeatureExtractor fit(ExtractorResources resources,
                              const PromptSpec& prompt,
                              const TextPipeline& pipeline,
                              std::span<const TaggedDoc> train,
                              std::span<const int> grades,
                              const ExtractorOptions& options);

  // Unnormalized values in schema order.
  std::vector<double> raw(const TaggedDoc& doc) const;
  std::vector<double> normalize(std::vector<double> raw) const;
  std::vector<double> assemble(const TaggedDoc& doc) const { return normalize(raw(doc)); }

  const FittedFeatures& state() const { return state_; }
  const FeatureSchema& schema() const { return state_.schema; }
  const ExtractorResources& resources() const { return resources_; }

 private:
  ExtractorResources resources_;
  FittedFeatures state_;
  std::unique_ptr<IdfMeanProvider> doc_provider_;
};

// Column layout for the enabled groups.
FeatureSchema build_schema(const GroupMask& enabled, std::size_t embedding_dim);

}  // namespace autosas
