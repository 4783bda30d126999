#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "autosas/config.hpp"
#include "autosas/model.hpp"
#include "autosas/resources.hpp"

namespace autosas {

// Reference per-set QWK on ASAP-SAS sets 1-10 and its mean, printed beside
// measured values.
std::optional<double> reference_qwk(const std::string& prompt_id);
inline constexpr double kReferenceMeanQwk = 0.791;
// Reference fall in accuracy (percent) when a group is removed.
double reference_fall_percent(FeatureGroup g);

struct TestPrediction {
  std::string id;
  int human = 0;
  int predicted = 0;
  double raw = 0.0;
};

struct PromptResult {
  std::string prompt_id;
  int grade_min = 0;
  int grade_max = 3;
  std::size_t n_train = 0;  // originals only
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
  std::size_t n_cross_prompt = 0;
  std::size_t n_shuffled = 0;
  long ngram_threshold = 0;
  std::vector<std::pair<long, std::optional<double>>> sweep;
  std::optional<double> validation_qwk;
  std::optional<double> test_qwk;
  std::vector<TestPrediction> test_predictions;
  double seconds = 0.0;  // wall time, kept out of the structured report
};

struct ExperimentReport {
  std::string kind;  // "training" or "evaluation"
  std::vector<PromptResult> prompts;
  std::optional<double> mean_test_qwk;
  std::optional<double> mean_validation_qwk;
};

// A prompt's split, augmented training set and processed documents; shared
// by every fit of the prompt (threshold sweep, ablation).
struct PreparedPrompt {
  PromptSpec prompt;
  SplitSet split;
  std::vector<std::string> domain_words;
  std::vector<std::string> train_ids;  // originals first, then augmented
  std::vector<TaggedDoc> train_docs;
  std::vector<int> train_grades;
  std::size_t n_train_original = 0;
  std::size_t n_cross_prompt = 0;
  std::size_t n_shuffled = 0;
  std::vector<std::string> validation_ids;
  std::vector<TaggedDoc> validation_docs;
  std::vector<int> validation_grades;
  std::vector<std::string> test_ids;
  std::vector<TaggedDoc> test_docs;
  std::vector<int> test_grades;
};

PreparedPrompt prepare_prompt(const RunConfig& config,
                              const PromptSpec& prompt,
                              std::span<const Response> all_responses,
                              const LoadedResources& resources);

struct TrainedPrompt {
  PromptResult result;
  ScoringModel model;
};

// Sweeps the n-gram threshold on validation QWK (when POS n-grams are
// enabled), then fits features and the full forest on the training part.
TrainedPrompt fit_prompt(const RunConfig& config,
                         const PreparedPrompt& prepared,
                         const LoadedResources& resources,
                         const GroupMask& enabled,
                         bool score_test);

struct ExperimentRun {
  ExperimentReport report;
  std::vector<ScoringModel> models;
};

// Loads dataset and prompts named by the config and trains every selected
// prompt. score_test = false leaves the test part untouched.
ExperimentRun run_experiment(const RunConfig& config, bool score_test = true);

std::string report_json(const ExperimentReport& report, const RunConfig& config);
std::string report_text(const ExperimentReport& report);
std::string timings_json(const ExperimentReport& report);

struct AblationRow {
  FeatureGroup group;
  double mean_qwk = 0.0;
  double fall = 0.0;          // full - ablated
  double fall_percent = 0.0;  // 100 * fall / full
  std::map<std::string, double> per_prompt_qwk;
};

struct AblationReport {
  ImportanceMode mode = ImportanceMode::RefitAblation;
  double full_mean_qwk = 0.0;
  std::map<std::string, double> full_per_prompt_qwk;
  std::vector<AblationRow> rows;  // fall descending, ties in group order
};

// Removes each listed group in turn (groups disabled in the config are
// skipped) and reports the fall in mean test QWK. Empty `groups` means every
// enabled group.
AblationReport run_ablation(const RunConfig& config, std::span<const FeatureGroup> groups = {});

// Mean test QWK over the selected prompts with the given groups removed
// together. Throws SchemaError when no group is left.
double ablated_mean_qwk(const RunConfig& config, const GroupMask& removed);

std::string ablation_json(const AblationReport& report, const RunConfig& config);
std::string ablation_text(const AblationReport& report);

// Writes report.json, report.txt, timings.json and models/<prompt>.json
// under config.out_dir.
void write_experiment_outputs(const RunConfig& config, const ExperimentRun& run);

std::string model_file_name(const std::string& prompt_id);

}  // namespace autosas
