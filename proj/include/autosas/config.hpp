#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosas/corpus.hpp"
#include "autosas/embeddings.hpp"
#include "autosas/extractor.hpp"
#include "autosas/feedback.hpp"
#include "autosas/forest.hpp"

namespace autosas {

namespace fs = std::filesystem;

// Directory holding the bundled lexicons; AUTOSAS_DATA_DIR overrides the
// compiled-in location.
fs::path data_dir();

struct ResourcePaths {
  std::optional<fs::path> embeddings;
  VectorFormat embeddings_format = VectorFormat::Text;
  std::optional<fs::path> idf;
  fs::path spelling_lexicon;
  fs::path tag_lexicon;
  std::optional<fs::path> tagger_model;
  std::optional<fs::path> tagger_corpus;
  fs::path difficulty_lexicon;
  std::optional<fs::path> stopwords;
  std::optional<fs::path> synonyms;
  std::optional<fs::path> lemma_rules;

  static ResourcePaths defaults();
};

struct RunConfig {
  fs::path source;  // config file, empty when built in memory
  std::optional<fs::path> dataset;
  std::optional<fs::path> prompts;
  ResourcePaths resources = ResourcePaths::defaults();
  SplitRatios split;
  std::uint64_t seed = 42;
  ScoreResolution resolution = ScoreResolution::ScoreA;
  std::size_t cross_prompt_negatives = 10;
  std::size_t shuffled_negatives = 10;
  ForestParams forest;
  int sweep_trees = 100;
  std::vector<long> ngram_thresholds = {0, 1, 2, 3, 5, 8, 13, 21, 34};
  GroupMask enabled = all_groups_enabled();
  std::optional<int> high_grade_cutoff;
  bool remove_common_component = false;
  bool spell_check = true;
  std::vector<std::string> prompt_ids;  // empty: every prompt in the table
  fs::path out_dir = "autosas-out";
  FeedbackOptions feedback;
  ImportanceMode ablation_mode = ImportanceMode::RefitAblation;
};

// JSON document; relative paths resolve against base_dir.
RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir);
RunConfig load_run_config(const fs::path& path);
// Config path from AUTOSAS_CONFIG, if set.
std::optional<fs::path> default_config_path();

// Throws ConfigError: ratios, group toggles, hyperparameters, and existence
// of every referenced file.
void validate(const RunConfig& config, bool needs_dataset = true);

std::string describe_resource(const std::optional<fs::path>& p);

}  // namespace autosas
