#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "autosas/config.hpp"
#include "autosas/extractor.hpp"
#include "autosas/feedback.hpp"
#include "autosas/forest.hpp"
#include "autosas/resources.hpp"

namespace autosas {

// One trained prompt: resources it was built with, fitted feature state,
// forest and feedback thresholds.
struct ScoringModel {
  static constexpr int kFormatVersion = 1;

  std::string prompt_id;
  int grade_min = 0;
  int grade_max = 3;
  ResourcePaths resources;
  std::map<std::string, std::string> resource_digests;
  bool spell_check = true;
  std::vector<std::string> domain_words;
  FittedFeatures features;
  Forest forest;
  FeedbackThresholds feedback;
};

std::string serialize_model(const ScoringModel& model);
// FormatError on malformed input, VersionError on another format version.
ScoringModel parse_model(std::string_view text, std::string_view source = "<memory>");

void save_model(const ScoringModel& model, const std::filesystem::path& path);
ScoringModel load_model(const std::filesystem::path& path);

struct ScoredResponse {
  int grade = 0;
  double raw = 0.0;
  std::vector<double> raw_features;
  std::vector<double> features;  // normalized
};

class Scorer {
 public:
  // Loads the model's resources when none are given; warns when a resource
  // file changed since training.
  explicit Scorer(ScoringModel model, std::shared_ptr<const LoadedResources> resources = nullptr);

  ScoredResponse score(std::string_view text) const;
  FeedbackReport feedback(const std::string& response_id, std::string_view text,
                          const FeedbackOptions& options = {}) const;

  const ScoringModel& model() const { return model_; }
  const FeatureExtractor& extractor() const { return *extractor_; }

 private:
  ScoringModel model_;
  std::shared_ptr<const LoadedResources> resources_;
  std::unique_ptr<TextPipeline> pipeline_;
  std::unique_ptr<FeatureExtractor> extractor_;
};

}  // namespace autosas
