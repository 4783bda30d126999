#include "autosas/feedback.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "autosas/error.hpp"

namespace autosas {

namespace {

constexpr std::array<FlagRule, 7> kFlagRules = {{
    {FeatureGroup::PromptOverlap, "prompt_coverage", "low prompt overlap"},
    {FeatureGroup::WeightedKeywords, "keyword_weight_sum", "few key terms from the topic"},
    {FeatureGroup::LexicalOverlap, "content_overlap", "little use of the reading passage"},
    {FeatureGroup::WordFreqDifficulty, "unique_words", "low lexical diversity"},
    {FeatureGroup::LengthStats, "word_count", "response is short"},
    {FeatureGroup::LogicalOperators, "logic_total", "few logical connectives"},
    {FeatureGroup::PosNgrams, "pos_3gram_ratio", "sentence structure unlike strong answers"},
}};

std::string fixed3(double v) {
  if (v == 0.0) v = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string signed3(double v) {
  std::string s = fixed3(v);
  return s[0] == '-' ? s : "+" + s;
}

}  // namespace

std::span<const FlagRule> default_flag_rules() { return kFlagRules; }

double percentile_of(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

FeedbackThresholds fit_feedback_thresholds(const FeatureSchema& schema,
                                           std::span<const std::vector<double>> raw_rows,
                                           double percentile) {
  FeedbackThresholds t;
  t.percentile = percentile;
  if (raw_rows.empty()) return t;
  for (const FlagRule& rule : kFlagRules) {
    auto idx = schema.index_of(rule.feature);
    if (!idx) continue;
    std::vector<double> column;
    column.reserve(raw_rows.size());
    for (const auto& r : raw_rows) column.push_back(r.at(*idx));
    t.values[std::string(rule.feature)] = percentile_of(std::move(column), percentile);
  }
  return t;
}

FeedbackReport build_report(std::string response_id,
                            std::string prompt_id,
                            const Contribution& contribution,
                            const FeatureSchema& schema,
                            std::span<const double> raw_values,
                            const FeedbackThresholds& thresholds,
                            int grade_min,
                            int grade_max,
                            const FeedbackOptions& options) {
  if (contribution.per_feature.size() != schema.size() || raw_values.size() != schema.size())
    throw SchemaError("contribution does not match the feature schema");
  FeedbackReport r;
  r.response_id = std::move(response_id);
  r.prompt_id = std::move(prompt_id);
  r.bias = contribution.bias;
  r.raw_prediction = contribution.prediction;
  r.grade = round_grade(contribution.prediction, grade_min, grade_max);

  std::array<double, kGroupCount> per_group{};
  for (std::size_t j = 0; j < schema.size(); ++j)
    per_group[static_cast<std::size_t>(schema.groups[j])] += contribution.per_feature[j];

  for (FeatureGroup g : all_groups()) {
    const double c = per_group[static_cast<std::size_t>(g)];
    if (c == 0.0) continue;
    GroupEntry e{g, c, {}};
    auto members = schema.members(g);
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(contribution.per_feature[a]) > std::abs(contribution.per_feature[b]);
    });
    for (std::size_t k = 0; k < members.size() && k < options.top_members; ++k) {
      const std::size_t j = members[k];
      if (contribution.per_feature[j] == 0.0) break;
      e.top_members.push_back({schema.names[j], raw_values[j], contribution.per_feature[j]});
    }
    r.groups.push_back(std::move(e));
  }
  std::stable_sort(r.groups.begin(), r.groups.end(),
                   [](const GroupEntry& a, const GroupEntry& b) { return std::abs(a.contribution) > std::abs(b.contribution); });

  for (const FlagRule& rule : kFlagRules) {
    auto t = thresholds.values.find(std::string(rule.feature));
    auto idx = schema.index_of(rule.feature);
    if (t == thresholds.values.end() || !idx) continue;
    if (raw_values[*idx] < t->second && per_group[static_cast<std::size_t>(rule.group)] < 0.0)
      r.flags.emplace_back(rule.message);
  }
  return r;
}

std::string render(const FeedbackReport& r, ReportFormat format, std::size_t top_groups) {
  if (format == ReportFormat::Structured) {
    nlohmann::json j;
    j["format"] = "autosas-feedback";
    j["version"] = 1;
    j["response_id"] = r.response_id;
    j["prompt_id"] = r.prompt_id;
    j["grade"] = r.grade;
    j["raw_prediction"] = r.raw_prediction;
    j["bias"] = r.bias;
    j["groups"] = nlohmann::json::array();
    for (const auto& g : r.groups) {
      nlohmann::json members = nlohmann::json::array();
      for (const auto& m : g.top_members)
        members.push_back({{"name", m.name}, {"value", m.value}, {"contribution", m.contribution}});
      j["groups"].push_back({{"group", std::string(group_name(g.group))},
                             {"label", std::string(group_label(g.group))},
                             {"contribution", g.contribution},
                             {"members", members}});
    }
    j["flags"] = r.flags;
    return j.dump(2) + "\n";
  }

  std::string out;
  out += "Response " + r.response_id + " (prompt " + r.prompt_id + ")\n";
  out += "Predicted grade: " + std::to_string(r.grade) + " (raw " + fixed3(r.raw_prediction) + ")\n";
  out += "Baseline: " + fixed3(r.bias) + "\n";
  const std::size_t shown = std::min(top_groups, r.groups.size());
  if (shown > 0) {
    out += "\nContributions:\n";
    for (std::size_t k = 0; k < shown; ++k) {
      const GroupEntry& g = r.groups[k];
      char line[128];
      std::snprintf(line, sizeof line, "  %-32s %8s", std::string(group_label(g.group)).c_str(),
                    signed3(g.contribution).c_str());
      out += line;
      std::string members;
      for (const auto& m : g.top_members) {
        if (!members.empty()) members += ", ";
        members += m.name + "=" + fixed3(m.value);
      }
      if (!members.empty()) out += "   " + members;
      out += "\n";
    }
  }
  if (!r.flags.empty()) {
    out += "\nAreas to improve:\n";
    for (const auto& f : r.flags) out += "  - " + f + "\n";
  }
  return out;
}

FeedbackReport parse_feedback_report(std::string_view json_text) {
  try {
    const auto j = nlohmann::json::parse(json_text);
    if (j.at("format") != "autosas-feedback") throw FormatError("not a feedback document");
    if (j.at("version") != 1) throw VersionError("unsupported feedback version " + j.at("version").dump());
    FeedbackReport r;
    r.response_id = j.at("response_id").get<std::string>();
    r.prompt_id = j.at("prompt_id").get<std::string>();
    r.grade = j.at("grade").get<int>();
    r.raw_prediction = j.at("raw_prediction").get<double>();
    r.bias = j.at("bias").get<double>();
    for (const auto& g : j.at("groups")) {
      auto group = parse_group(g.at("group").get<std::string>());
      if (!group) throw FormatError("unknown group in feedback document");
      GroupEntry e{*group, g.at("contribution").get<double>(), {}};
      for (const auto& m : g.at("members"))
        e.top_members.push_back({m.at("name").get<std::string>(), m.at("value").get<double>(),
                                 m.at("contribution").get<double>()});
      r.groups.push_back(std::move(e));
    }
    r.flags = j.at("flags").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("feedback document: ") + e.what());
  }
}

}  // namespace autosas
