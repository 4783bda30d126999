#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace autosas {

enum class Origin { Original, CrossPromptNegative, ShuffledNegative };

std::string_view origin_name(Origin origin);

struct Response {
  std::string id;
  std::string prompt_id;
  std::string text;
  int score_a = 0;
  std::optional<int> score_b;
  int resolved_score = 0;
  Origin origin = Origin::Original;
};

struct PromptSpec {
  std::string prompt_id;
  std::string question_text;
  std::optional<std::string> passage_text;
  int grade_min = 0;
  int grade_max = 3;
  std::vector<std::string> reference_docs;
};

using PromptTable = std::map<std::string, PromptSpec>;

// JSON document: {"prompts": [{"id", "question" | "question_file",
// "passage" | "passage_file", "grade_min", "grade_max", "reference_docs":
// [path | {"text": ...}]}]}. Relative paths resolve against the table's
// directory.
PromptTable load_prompt_table(const std::filesystem::path& path);

enum class ScoreResolution { ScoreA, ScoreB, Max };

std::optional<ScoreResolution> parse_score_resolution(std::string_view name);
std::string_view score_resolution_name(ScoreResolution r);

// Reads the ASAP short-answer TSV layout: header
// "Id<TAB>EssaySet<TAB>Score1<TAB>Score2<TAB>EssayText", one response per row.
// Errors carry the 1-based line number.
std::vector<Response> load_asap_tsv(const std::filesystem::path& path,
                                    const PromptTable& prompts,
                                    ScoreResolution resolution = ScoreResolution::ScoreA);

// Responses to be scored: either "Id EssaySet EssayText" or the full scored
// layout, with score columns ignored.
struct UnscoredResponse {
  std::string id;
  std::string prompt_id;
  std::string text;
};
std::vector<UnscoredResponse> load_unscored_tsv(const std::filesystem::path& path);

// Orders ids numerically when both parse as integers, otherwise lexically.
bool id_less(std::string_view a, std::string_view b);

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

struct SplitSet {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  SplitRatios ratios;
};

// Per-grade allocation by largest remainder, adjusted so each part's total
// also stays within one item of ratio * N. Ids inside a stratum are shuffled
// with the seed before being dealt out. Augmented responses are rejected.
SplitSet stratified_split(std::span<const Response> responses, SplitRatios ratios, std::uint64_t seed);

// k highest-scored responses from prompts other than `target`, relabelled
// with the target's lowest grade. Ties go to the smaller id.
std::vector<Response> augment_cross_prompt(const PromptSpec& target,
                                           std::span<const Response> other_prompts,
                                           std::size_t k = 10);

// Copies of the m highest-scored responses with their tokens permuted and the
// score set to grade_min. Responses with fewer than two distinct tokens are
// skipped.
std::vector<Response> augment_shuffled(std::span<const Response> train,
                                       const PromptSpec& prompt,
                                       std::size_t m,
                                       std::uint64_t seed);

}  // namespace autosas
