#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>

#include "autosas/config.hpp"
#include "autosas/error.hpp"
#include "autosas/experiment.hpp"
#include "autosas/qwk.hpp"
#include "synthetic.hpp"

using namespace autosas;
namespace fs = std::filesystem;

namespace {

// Grade equals the number of keyword sentences; nothing else varies.
testing::SyntheticSet one_feature_set(std::size_t per_grade) {
  testing::SyntheticSet set;
  const auto p = testing::synthetic_prompt(0);
  set.prompts[p.spec.prompt_id] = p.spec;
  Rng rng(17);
  int id = 1;
  for (int k = 0; k <= 3; ++k)
    for (std::size_t i = 0; i < per_grade; ++i) {
      Response r;
      r.id = std::to_string(id++);
      r.prompt_id = p.spec.prompt_id;
      r.text = testing::synthetic_text(p, k, 0, rng);
      r.score_a = r.resolved_score = k;
      set.responses.push_back(r);
    }
  return set;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("reference figures") {
  CHECK(reference_qwk("1") == 0.872);
  CHECK(reference_qwk("8") == 0.624);
  CHECK(!reference_qwk("11"));
  CHECK(!reference_qwk("s1"));
  double sum = 0;
  for (int i = 1; i <= 10; ++i) sum += *reference_qwk(std::to_string(i));
  CHECK(std::abs(sum / 10 - kReferenceMeanQwk) < 0.0005);
  CHECK(reference_fall_percent(FeatureGroup::Embeddings) == 23.54);
  CHECK(reference_fall_percent(FeatureGroup::PromptOverlap) == 20.85);
  CHECK(reference_fall_percent(FeatureGroup::WordFreqDifficulty) == 1.02);
}

TEST_CASE("twenty responses graded by one feature") {
  auto cfg = testing::synthetic_config(one_feature_set(5), testing::scratch_dir("one-feature"), 100);
  cfg.cross_prompt_negatives = 0;
  cfg.shuffled_negatives = 0;
  const auto run = run_experiment(cfg, true);
  REQUIRE(run.report.prompts.size() == 1);
  const auto& p = run.report.prompts[0];
  REQUIRE(p.test_qwk);
  CHECK(*p.test_qwk >= 0.9);
  std::vector<int> h, m;
  for (const auto& t : p.test_predictions) {
    h.push_back(t.human);
    m.push_back(t.predicted);
  }
  CHECK(quadratic_weighted_kappa(h, m, 0, 3) == *p.test_qwk);
}

TEST_CASE("threshold sweep keeps the best validation score") {
  auto cfg = testing::synthetic_config(testing::make_synthetic(120, 5, 2), testing::scratch_dir("sweep"), 30);
  cfg.prompt_ids = {"s1"};
  const auto run = run_experiment(cfg, true);
  const auto& p = run.report.prompts.at(0);
  REQUIRE(p.sweep.size() == cfg.ngram_thresholds.size());
  std::optional<double> best;
  long chosen = p.sweep.front().first;
  for (const auto& [t, q] : p.sweep)
    if (q && (!best || *q > *best)) {
      best = q;
      chosen = t;
    }
  CHECK(p.ngram_threshold == chosen);
  CHECK(p.n_cross_prompt == 10);
  CHECK(p.n_shuffled == 10);
  CHECK(p.n_train + p.n_validation + p.n_test == 120);
}

TEST_CASE("reports are deterministic") {
  const auto set = testing::make_synthetic(40, 2, 2);
  auto cfg = testing::synthetic_config(set, testing::scratch_dir("determinism"), 20);
  const auto a = run_experiment(cfg, true);
  const auto b = run_experiment(cfg, true);
  CHECK(report_json(a.report, cfg) == report_json(b.report, cfg));
  REQUIRE(a.models.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(serialize_model(a.models[i]) == serialize_model(b.models[i]));
  CHECK(report_text(a.report).find("Mean") != std::string::npos);
}

TEST_CASE("ablation with nothing removed equals the full model") {
  auto cfg = testing::synthetic_config(testing::make_synthetic(60, 8, 2), testing::scratch_dir("ablate0"), 20);
  cfg.prompt_ids = {"s1"};
  const auto run = run_experiment(cfg, true);
  GroupMask none{};
  CHECK(ablated_mean_qwk(cfg, none) == *run.report.mean_test_qwk);
  GroupMask all;
  all.fill(true);
  CHECK_THROWS_AS(ablated_mean_qwk(cfg, all), SchemaError);
}

TEST_CASE("ablation report is sorted by fall") {
  auto cfg = testing::synthetic_config(testing::make_synthetic(60, 8, 2), testing::scratch_dir("ablate"), 20);
  cfg.prompt_ids = {"s1"};
  const std::vector<FeatureGroup> groups = {FeatureGroup::PromptOverlap, FeatureGroup::Temporal,
                                            FeatureGroup::WeightedKeywords};
  for (auto mode : {ImportanceMode::RefitAblation, ImportanceMode::Permutation}) {
    cfg.ablation_mode = mode;
    const auto rep = run_ablation(cfg, groups);
    REQUIRE(rep.rows.size() == 3);
    for (std::size_t k = 1; k < rep.rows.size(); ++k) CHECK(rep.rows[k - 1].fall >= rep.rows[k].fall);
    for (const auto& r : rep.rows) {
      CHECK(r.fall == doctest::Approx(rep.full_mean_qwk - r.mean_qwk));
      CHECK(r.fall_percent == doctest::Approx(100 * r.fall / rep.full_mean_qwk));
    }
    CHECK(ablation_text(rep).find("Fall") != std::string::npos);
  }
}

TEST_CASE("config: parsing and validation") {
  const auto dir = testing::scratch_dir("config");
  const auto path = testing::write_synthetic(testing::make_synthetic(10, 1, 1), dir,
                                             R"({"features": {"disable": ["temporal", "length-stats"]},
                                                 "augmentation": {"cross_prompt": 3}, "prompt_ids": ["s1"]})");
  const auto cfg = load_run_config(path);
  CHECK(cfg.dataset == dir / "responses.tsv");
  CHECK(!cfg.enabled[static_cast<std::size_t>(FeatureGroup::Temporal)]);
  CHECK(!cfg.enabled[static_cast<std::size_t>(FeatureGroup::LengthStats)]);
  CHECK(cfg.enabled[static_cast<std::size_t>(FeatureGroup::PosNgrams)]);
  CHECK(cfg.cross_prompt_negatives == 3);
  CHECK(cfg.seed == 7);
  CHECK_NOTHROW(validate(cfg));

  CHECK_THROWS_AS(parse_run_config(R"({"bogus": 1})", dir), ConfigError);
  auto ratios = cfg;
  ratios.split = SplitRatios{0.5, 0.1, 0.1};
  CHECK_THROWS_AS(validate(ratios), ConfigError);
  auto none = cfg;
  none.enabled.fill(false);
  CHECK_THROWS_AS(validate(none), ConfigError);
  auto missing = cfg;
  missing.dataset = dir / "absent.tsv";
  CHECK_THROWS_AS(validate(missing), ConfigError);
  auto no_trees = cfg;
  no_trees.forest.n_trees = 0;
  CHECK_THROWS_AS(validate(no_trees), ConfigError);
}

TEST_CASE("output files") {
  auto cfg = testing::synthetic_config(testing::make_synthetic(30, 4, 2), testing::scratch_dir("outputs"), 10);
  const auto run = run_experiment(cfg, true);
  write_experiment_outputs(cfg, run);
  for (const char* f : {"report.json", "report.txt", "timings.json"}) CHECK(fs::exists(cfg.out_dir / f));
  CHECK(fs::exists(cfg.out_dir / "models" / model_file_name("s1")));
  CHECK(load_model(cfg.out_dir / "models" / model_file_name("s2")).prompt_id == "s2");
  CHECK(model_file_name("a/b") == "prompt-a_b.json");
}

}  // TEST_SUITE
