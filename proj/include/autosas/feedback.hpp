#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "autosas/features.hpp"
#include "autosas/forest.hpp"

namespace autosas {

struct FeedbackOptions {
  std::size_t top_groups = kGroupCount;  // rows in the plain-text table
  std::size_t top_members = 3;
  double percentile = 25.0;
};

// A flag fires when `feature` lies below its training percentile and the
// owning group pulled the prediction down.
struct FlagRule {
  FeatureGroup group;
  std::string_view feature;
  std::string_view message;
};
std::span<const FlagRule> default_flag_rules();

struct FeedbackThresholds {
  double percentile = 25.0;
  std::map<std::string, double> values;  // feature -> raw threshold
};

// Linear interpolation between closest ranks; p in [0, 100].
double percentile_of(std::vector<double> values, double p);

// Thresholds for the flag features present in the schema, from raw
// (unnormalized) training rows.
FeedbackThresholds fit_feedback_thresholds(const FeatureSchema& schema,
                                           std::span<const std::vector<double>> raw_rows,
                                           double percentile);

struct MemberValue {
  std::string name;
  double value = 0.0;         // raw feature value
  double contribution = 0.0;
};

struct GroupEntry {
  FeatureGroup group;
  double contribution = 0.0;
  std::vector<MemberValue> top_members;
};

struct FeedbackReport {
  std::string response_id;
  std::string prompt_id;
  int grade = 0;
  double raw_prediction = 0.0;
  double bias = 0.0;
  std::vector<GroupEntry> groups;  // nonzero groups, by |contribution| descending
  std::vector<std::string> flags;
};

FeedbackReport build_report(std::string response_id,
                            std::string prompt_id,
                            const Contribution& contribution,
                            const FeatureSchema& schema,
                            std::span<const double> raw_values,
                            const FeedbackThresholds& thresholds,
                            int grade_min,
                            int grade_max,
                            const FeedbackOptions& options = {});

enum class ReportFormat { PlainText, Structured };

// Plain text prints numbers with 3 decimals; the structured form keeps full
// precision.
std::string render(const FeedbackReport& report, ReportFormat format, std::size_t top_groups = kGroupCount);
FeedbackReport parse_feedback_report(std::string_view json_text);

}  // namespace autosas
