#include "autosas/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include <json.hpp>

#include "autosas/error.hpp"
#include "autosas/log.hpp"
#include "autosas/qwk.hpp"

namespace autosas {

using nlohmann::json;

namespace {

constexpr std::array<double, 10> kReferenceQwk = {0.872, 0.824, 0.745, 0.743, 0.845,
                                                  0.858, 0.725, 0.624, 0.843, 0.832};
constexpr std::array<double, kGroupCount> kReferenceFall = {23.54, 12.36, 16.93, 20.85, 8.45,
                                                            6.40,  4.2,   2.11,  1.02};

struct RunData {
  PromptTable prompts;
  std::vector<Response> responses;
  std::vector<std::string> selected;
};

RunData load_run_data(const RunConfig& config) {
  validate(config, true);
  RunData d;
  d.prompts = load_prompt_table(*config.prompts);
  d.responses = load_asap_tsv(*config.dataset, d.prompts, config.resolution);
  std::vector<std::string> ids = config.prompt_ids;
  if (ids.empty())
    for (const auto& [id, spec] : d.prompts) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [](const auto& a, const auto& b) { return id_less(a, b); });
  for (const auto& id : ids) {
    if (!d.prompts.count(id)) throw ConfigError("prompt '" + id + "' is not in the prompt table");
    const bool has = std::any_of(d.responses.begin(), d.responses.end(),
                                 [&](const Response& r) { return r.prompt_id == id; });
    if (!has) {
      warn("prompt " + id + " has no responses in the dataset; skipped");
      continue;
    }
    d.selected.push_back(id);
  }
  if (d.selected.empty()) throw ConfigError("no prompt with responses selected");
  return d;
}

void warn_missing_vectors(const RunConfig& config, const LoadedResources& resources) {
  if (config.enabled[static_cast<std::size_t>(FeatureGroup::Embeddings)] && !resources.extractor.embeddings)
    warn("no word vectors configured; embedding features omitted");
}

std::vector<int> predict_grades(const Forest& forest, const Matrix& x, int gmin, int gmax) {
  std::vector<int> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = forest.predict_grade(x.row(i), gmin, gmax);
  return out;
}

std::optional<double> safe_qwk(std::span<const int> human, std::span<const int> model, int gmin, int gmax) {
  if (human.empty()) return std::nullopt;
  try {
    return quadratic_weighted_kappa(human, model, gmin, gmax);
  } catch (const DegenerateRatingsError&) {
    return std::nullopt;
  }
}

Matrix feature_matrix(const FeatureExtractor& ex, std::span<const TaggedDoc> docs) {
  std::vector<std::vector<double>> rows;
  rows.reserve(docs.size());
  for (const auto& d : docs) rows.push_back(ex.assemble(d));
  Matrix m = Matrix::from_rows(rows);
  m.cols = ex.schema().size();
  return m;
}

ExtractorOptions extractor_options(const RunConfig& config, const GroupMask& enabled, long threshold) {
  ExtractorOptions o;
  o.enabled = enabled;
  o.high_grade_cutoff = config.high_grade_cutoff;
  o.ngram_threshold = threshold;
  o.remove_common_component = config.remove_common_component;
  return o;
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt3(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

json config_summary(const RunConfig& c) {
  json enabled = json::array();
  for (FeatureGroup g : all_groups())
    if (c.enabled[static_cast<std::size_t>(g)]) enabled.push_back(std::string(group_name(g)));
  return {{"seed", c.seed},
          {"split", {{"train", c.split.train}, {"validation", c.split.validation}, {"test", c.split.test}}},
          {"score_resolution", std::string(score_resolution_name(c.resolution))},
          {"augmentation", {{"cross_prompt", c.cross_prompt_negatives}, {"shuffled", c.shuffled_negatives}}},
          {"forest",
           {{"n_trees", c.forest.n_trees},
            {"max_depth", c.forest.max_depth},
            {"min_samples_leaf", c.forest.min_samples_leaf},
            {"features_per_split", c.forest.features_per_split}}},
          {"sweep_trees", c.sweep_trees},
          {"ngram_thresholds", c.ngram_thresholds},
          {"enabled_groups", enabled},
          {"spell_check", c.spell_check},
          {"remove_common_component", c.remove_common_component}};
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::optional<double> reference_qwk(const std::string& prompt_id) {
  for (std::size_t i = 0; i < kReferenceQwk.size(); ++i)
    if (prompt_id == std::to_string(i + 1)) return kReferenceQwk[i];
  return std::nullopt;
}

double reference_fall_percent(FeatureGroup g) { return kReferenceFall[static_cast<std::size_t>(g)]; }

std::string model_file_name(const std::string& prompt_id) {
  std::string safe;
  for (char c : prompt_id) safe += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  return "prompt-" + safe + ".json";
}

PreparedPrompt prepare_prompt(const RunConfig& config,
                              const PromptSpec& prompt,
                              std::span<const Response> all_responses,
                              const LoadedResources& resources) {
  PreparedPrompt p;
  p.prompt = prompt;
  std::vector<Response> own, others;
  for (const Response& r : all_responses) {
    if (r.origin != Origin::Original) continue;
    (r.prompt_id == prompt.prompt_id ? own : others).push_back(r);
  }
  if (own.size() < 2) throw InvalidArgument("prompt " + prompt.prompt_id + " needs at least 2 responses");
  p.split = stratified_split(own, config.split, config.seed);

  std::map<std::string, const Response*> by_id;
  for (const Response& r : own) by_id[r.id] = &r;
  std::vector<Response> train;
  for (const auto& id : p.split.train) train.push_back(*by_id.at(id));

  std::vector<Response> cross;
  if (config.cross_prompt_negatives > 0 && !others.empty())
    cross = augment_cross_prompt(prompt, others, config.cross_prompt_negatives);
  else if (config.cross_prompt_negatives > 0)
    warn("prompt " + prompt.prompt_id + ": no other prompts loaded; no cross-prompt negatives");
  const auto shuffled = augment_shuffled(train, prompt, config.shuffled_negatives, config.seed + 1);
  p.n_train_original = train.size();
  p.n_cross_prompt = cross.size();
  p.n_shuffled = shuffled.size();

  p.domain_words = prompt_vocabulary(prompt);
  const TextPipeline pipeline = resources.prompt_pipeline(config.spell_check, p.domain_words);
  auto add = [&](const Response& r, std::vector<std::string>& ids, std::vector<TaggedDoc>& docs,
                 std::vector<int>& grades) {
    ids.push_back(r.id);
    docs.push_back(pipeline.process(r.text));
    grades.push_back(r.resolved_score);
  };
  for (const auto& r : train) add(r, p.train_ids, p.train_docs, p.train_grades);
  for (const auto& r : cross) add(r, p.train_ids, p.train_docs, p.train_grades);
  for (const auto& r : shuffled) add(r, p.train_ids, p.train_docs, p.train_grades);
  for (const auto& id : p.split.validation) add(*by_id.at(id), p.validation_ids, p.validation_docs, p.validation_grades);
  for (const auto& id : p.split.test) add(*by_id.at(id), p.test_ids, p.test_docs, p.test_grades);
  return p;
}

TrainedPrompt fit_prompt(const RunConfig& config,
                         const PreparedPrompt& p,
                         const LoadedResources& resources,
                         const GroupMask& enabled,
                         bool score_test) {
  const auto started = std::chrono::steady_clock::now();
  const PromptSpec& prompt = p.prompt;
  const TextPipeline pipeline = resources.prompt_pipeline(config.spell_check, p.domain_words);
  std::vector<double> y(p.train_grades.begin(), p.train_grades.end());

  TrainedPrompt out;
  PromptResult& res = out.result;
  res.prompt_id = prompt.prompt_id;
  res.grade_min = prompt.grade_min;
  res.grade_max = prompt.grade_max;
  res.n_train = p.n_train_original;
  res.n_validation = p.validation_docs.size();
  res.n_test = p.test_docs.size();
  res.n_cross_prompt = p.n_cross_prompt;
  res.n_shuffled = p.n_shuffled;

  ForestParams params = config.forest;
  params.seed = config.seed;

  std::vector<long> candidates = {config.ngram_thresholds.front()};
  if (enabled[static_cast<std::size_t>(FeatureGroup::PosNgrams)] && !p.validation_docs.empty())
    candidates = config.ngram_thresholds;
  res.ngram_threshold = candidates.front();
  if (candidates.size() > 1) {
    ForestParams sweep = params;
    sweep.n_trees = config.sweep_trees;
    std::optional<double> best;
    for (long t : candidates) {
      auto ex = FeatureExtractor::fit(resources.extractor, prompt, pipeline, p.train_docs, p.train_grades,
                                      extractor_options(config, enabled, t));
      const Forest f = Forest::train(feature_matrix(ex, p.train_docs), y, sweep);
      const auto q = safe_qwk(p.validation_grades,
                              predict_grades(f, feature_matrix(ex, p.validation_docs), prompt.grade_min, prompt.grade_max),
                              prompt.grade_min, prompt.grade_max);
      res.sweep.emplace_back(t, q);
      if (q && (!best || *q > *best)) {
        best = q;
        res.ngram_threshold = t;
      }
    }
  }

  FeatureExtractor ex = FeatureExtractor::fit(resources.extractor, prompt, pipeline, p.train_docs, p.train_grades,
                                              extractor_options(config, enabled, res.ngram_threshold));
  Forest forest = Forest::train(feature_matrix(ex, p.train_docs), y, params);
  forest.schema_fingerprint = ex.schema().fingerprint();

  if (!p.validation_docs.empty())
    res.validation_qwk = safe_qwk(
        p.validation_grades,
        predict_grades(forest, feature_matrix(ex, p.validation_docs), prompt.grade_min, prompt.grade_max),
        prompt.grade_min, prompt.grade_max);

  if (score_test && !p.test_docs.empty()) {
    std::vector<int> predicted;
    for (std::size_t i = 0; i < p.test_docs.size(); ++i) {
      const auto x = ex.assemble(p.test_docs[i]);
      const double raw = forest.predict(x);
      const int grade = round_grade(raw, prompt.grade_min, prompt.grade_max);
      predicted.push_back(grade);
      res.test_predictions.push_back({p.test_ids[i], p.test_grades[i], grade, raw});
    }
    try {
      res.test_qwk = quadratic_weighted_kappa(p.test_grades, predicted, prompt.grade_min, prompt.grade_max);
    } catch (const DegenerateRatingsError& e) {
      throw DegenerateRatingsError("prompt " + prompt.prompt_id + ": test " + e.what());
    }
  }

  std::vector<std::vector<double>> raw_rows;
  for (std::size_t i = 0; i < p.n_train_original; ++i) raw_rows.push_back(ex.raw(p.train_docs[i]));

  ScoringModel& m = out.model;
  m.prompt_id = prompt.prompt_id;
  m.grade_min = prompt.grade_min;
  m.grade_max = prompt.grade_max;
  m.resources = resources.paths;
  m.resource_digests = resource_digests(resources.paths);
  m.spell_check = config.spell_check;
  m.domain_words = p.domain_words;
  m.features = ex.state();
  m.feedback = fit_feedback_thresholds(ex.schema(), raw_rows, config.feedback.percentile);
  m.forest = std::move(forest);

  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

ExperimentRun run_experiment(const RunConfig& config, bool score_test) {
  const RunData data = load_run_data(config);
  const auto resources = load_resources(config.resources);
  warn_missing_vectors(config, *resources);
  ExperimentRun run;
  run.report.kind = score_test ? "evaluation" : "training";
  double test_sum = 0.0, val_sum = 0.0;
  std::size_t test_n = 0, val_n = 0;
  for (const auto& id : data.selected) {
    try {
      const auto started = std::chrono::steady_clock::now();
      const PreparedPrompt prepared = prepare_prompt(config, data.prompts.at(id), data.responses, *resources);
      TrainedPrompt trained = fit_prompt(config, prepared, *resources, config.enabled, score_test);
      trained.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      if (trained.result.test_qwk) {
        test_sum += *trained.result.test_qwk;
        ++test_n;
      }
      if (trained.result.validation_qwk) {
        val_sum += *trained.result.validation_qwk;
        ++val_n;
      }
      run.report.prompts.push_back(std::move(trained.result));
      run.models.push_back(std::move(trained.model));
    } catch (const Error& e) {
      const std::string msg = "prompt " + id + ": " + e.what();
      switch (e.kind()) {
        case ErrorKind::DegenerateRatings: throw;
        case ErrorKind::Schema: throw SchemaError(msg);
        case ErrorKind::Config: throw ConfigError(msg);
        case ErrorKind::Io: throw IoError(msg);
        case ErrorKind::Format: throw FormatError(msg);
        case ErrorKind::Version: throw VersionError(msg);
        default: throw InvalidArgument(msg);
      }
    }
  }
  if (test_n) run.report.mean_test_qwk = test_sum / static_cast<double>(test_n);
  if (val_n) run.report.mean_validation_qwk = val_sum / static_cast<double>(val_n);
  return run;
}

std::string report_json(const ExperimentReport& report, const RunConfig& config) {
  json j;
  j["format"] = "autosas-report";
  j["version"] = 1;
  j["kind"] = report.kind;
  j["config"] = config_summary(config);
  j["prompts"] = json::array();
  bool all_reference = !report.prompts.empty();
  for (const auto& p : report.prompts) {
    json sweep = json::array();
    for (const auto& [t, q] : p.sweep) sweep.push_back({{"threshold", t}, {"validation_qwk", opt_json(q)}});
    json preds = json::array();
    for (const auto& t : p.test_predictions)
      preds.push_back({{"id", t.id}, {"human", t.human}, {"predicted", t.predicted}, {"raw", t.raw}});
    const auto ref = reference_qwk(p.prompt_id);
    all_reference = all_reference && ref.has_value();
    j["prompts"].push_back({{"prompt_id", p.prompt_id},
                            {"grade_range", {p.grade_min, p.grade_max}},
                            {"counts",
                             {{"train", p.n_train},
                              {"validation", p.n_validation},
                              {"test", p.n_test},
                              {"cross_prompt_negatives", p.n_cross_prompt},
                              {"shuffled_negatives", p.n_shuffled}}},
                            {"ngram_threshold", p.ngram_threshold},
                            {"threshold_sweep", sweep},
                            {"validation_qwk", opt_json(p.validation_qwk)},
                            {"test_qwk", opt_json(p.test_qwk)},
                            {"reference_qwk", opt_json(ref)},
                            {"test_predictions", preds}});
  }
  j["mean_validation_qwk"] = opt_json(report.mean_validation_qwk);
  j["mean_test_qwk"] = opt_json(report.mean_test_qwk);
  j["reference_mean_qwk"] = all_reference && report.prompts.size() == kReferenceQwk.size() ? json(kReferenceMeanQwk)
                                                                                          : json(nullptr);
  return j.dump(2) + "\n";
}

std::string report_text(const ExperimentReport& report) {
  std::string out = report.kind == "evaluation" ? "Quadratic weighted kappa by prompt\n\n"
                                                : "Validation quadratic weighted kappa by prompt\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %6s %5s %5s %6s %9s %9s %9s %9s\n", "Prompt", "Train", "Val", "Test",
                "+Aug", "Threshold", "Val QWK", "Test QWK", "Reference");
  out += line;
  for (const auto& p : report.prompts) {
    std::snprintf(line, sizeof line, "%-10s %6zu %5zu %5zu %6zu %9ld %9s %9s %9s\n", p.prompt_id.c_str(), p.n_train,
                  p.n_validation, p.n_test, p.n_cross_prompt + p.n_shuffled, p.ngram_threshold,
                  fmt3(p.validation_qwk).c_str(), fmt3(p.test_qwk).c_str(), fmt3(reference_qwk(p.prompt_id)).c_str());
    out += line;
  }
  bool all_reference = report.prompts.size() == kReferenceQwk.size();
  for (const auto& p : report.prompts) all_reference = all_reference && reference_qwk(p.prompt_id).has_value();
  std::snprintf(line, sizeof line, "%-10s %6s %5s %5s %6s %9s %9s %9s %9s\n", "Mean", "", "", "", "", "",
                fmt3(report.mean_validation_qwk).c_str(), fmt3(report.mean_test_qwk).c_str(),
                all_reference ? fmt3(kReferenceMeanQwk).c_str() : "-");
  out += line;
  return out;
}

std::string timings_json(const ExperimentReport& report) {
  json j = json::object();
  double total = 0.0;
  for (const auto& p : report.prompts) {
    j["prompts"][p.prompt_id] = p.seconds;
    total += p.seconds;
  }
  j["total_seconds"] = total;
  return j.dump(2) + "\n";
}

void write_experiment_outputs(const RunConfig& config, const ExperimentRun& run) {
  const fs::path& out = config.out_dir;
  write_file(out / "report.json", report_json(run.report, config));
  write_file(out / "report.txt", report_text(run.report));
  write_file(out / "timings.json", timings_json(run.report));
  for (const auto& m : run.models) save_model(m, out / "models" / model_file_name(m.prompt_id));
}

namespace {

struct PreparedRun {
  RunData data;
  std::shared_ptr<const LoadedResources> resources;
  std::vector<PreparedPrompt> prompts;
};

PreparedRun prepare_run(const RunConfig& config) {
  PreparedRun r{load_run_data(config), load_resources(config.resources), {}};
  warn_missing_vectors(config, *r.resources);
  for (const auto& id : r.data.selected)
    r.prompts.push_back(prepare_prompt(config, r.data.prompts.at(id), r.data.responses, *r.resources));
  return r;
}

double mean_test_qwk(const RunConfig& config, const PreparedRun& run, const GroupMask& enabled,
                     std::map<std::string, double>* per_prompt) {
  double sum = 0.0;
  for (const auto& p : run.prompts) {
    const auto trained = fit_prompt(config, p, *run.resources, enabled, true);
    if (!trained.result.test_qwk) throw InvalidArgument("prompt " + p.prompt.prompt_id + " has an empty test part");
    sum += *trained.result.test_qwk;
    if (per_prompt) (*per_prompt)[p.prompt.prompt_id] = *trained.result.test_qwk;
  }
  return sum / static_cast<double>(run.prompts.size());
}

GroupMask remove_groups(const GroupMask& enabled, const GroupMask& removed) {
  GroupMask m = enabled;
  for (std::size_t g = 0; g < kGroupCount; ++g) m[g] = m[g] && !removed[g];
  if (std::none_of(m.begin(), m.end(), [](bool b) { return b; }))
    throw SchemaError("removing these groups leaves an empty feature schema");
  return m;
}

}  // namespace

double ablated_mean_qwk(const RunConfig& config, const GroupMask& removed) {
  const GroupMask mask = remove_groups(config.enabled, removed);
  const PreparedRun run = prepare_run(config);
  return mean_test_qwk(config, run, mask, nullptr);
}

AblationReport run_ablation(const RunConfig& config, std::span<const FeatureGroup> groups) {
  std::vector<FeatureGroup> targets(groups.begin(), groups.end());
  if (targets.empty())
    for (FeatureGroup g : all_groups())
      if (config.enabled[static_cast<std::size_t>(g)]) targets.push_back(g);
  const PreparedRun run = prepare_run(config);

  AblationReport rep;
  rep.mode = config.ablation_mode;
  if (config.ablation_mode == ImportanceMode::RefitAblation) {
    rep.full_mean_qwk = mean_test_qwk(config, run, config.enabled, &rep.full_per_prompt_qwk);
    for (FeatureGroup g : targets) {
      if (!config.enabled[static_cast<std::size_t>(g)]) continue;
      GroupMask removed{};
      removed[static_cast<std::size_t>(g)] = true;
      AblationRow row{g, 0.0, 0.0, 0.0, {}};
      row.mean_qwk = mean_test_qwk(config, run, remove_groups(config.enabled, removed), &row.per_prompt_qwk);
      rep.rows.push_back(std::move(row));
    }
  } else {
    std::map<FeatureGroup, AblationRow> rows;
    for (FeatureGroup g : targets)
      if (config.enabled[static_cast<std::size_t>(g)]) rows.emplace(g, AblationRow{g, 0.0, 0.0, 0.0, {}});
    double full = 0.0;
    for (const auto& p : run.prompts) {
      const auto trained = fit_prompt(config, p, *run.resources, config.enabled, true);
      const Scorer scorer(trained.model, run.resources);
      Matrix x_test = feature_matrix(scorer.extractor(), p.test_docs);
      const std::vector<double> y_train(p.train_grades.begin(), p.train_grades.end());
      const auto imp = group_importance(trained.model.forest, feature_matrix(scorer.extractor(), p.train_docs), y_train,
                                        x_test, p.test_grades, scorer.extractor().schema(),
                                        ImportanceMode::Permutation, p.prompt.grade_min, p.prompt.grade_max,
                                        config.seed);
      const double base = *trained.result.test_qwk;
      full += base;
      rep.full_per_prompt_qwk[p.prompt.prompt_id] = base;
      for (auto& [g, row] : rows) {
        double q = base;  // groups without columns are unaffected
        for (const auto& gi : imp)
          if (gi.group == g) q = gi.qwk;
        row.per_prompt_qwk[p.prompt.prompt_id] = q;
        row.mean_qwk += q;
      }
    }
    const double n = static_cast<double>(run.prompts.size());
    rep.full_mean_qwk = full / n;
    for (auto& [g, row] : rows) {
      row.mean_qwk /= n;
      rep.rows.push_back(row);
    }
  }
  for (auto& row : rep.rows) {
    row.fall = rep.full_mean_qwk - row.mean_qwk;
    row.fall_percent = rep.full_mean_qwk != 0.0 ? 100.0 * row.fall / rep.full_mean_qwk : 0.0;
  }
  std::stable_sort(rep.rows.begin(), rep.rows.end(), [](const AblationRow& a, const AblationRow& b) {
    return a.fall > b.fall;
  });
  return rep;
}

std::string ablation_json(const AblationReport& rep, const RunConfig& config) {
  json j;
  j["format"] = "autosas-ablation";
  j["version"] = 1;
  j["mode"] = rep.mode == ImportanceMode::RefitAblation ? "refit" : "permutation";
  j["config"] = config_summary(config);
  j["full_mean_qwk"] = rep.full_mean_qwk;
  j["full_per_prompt_qwk"] = rep.full_per_prompt_qwk;
  j["rows"] = json::array();
  int rank = 0;
  for (const auto& r : rep.rows)
    j["rows"].push_back({{"rank", ++rank},
                         {"group", std::string(group_name(r.group))},
                         {"label", std::string(group_label(r.group))},
                         {"mean_qwk", r.mean_qwk},
                         {"fall", r.fall},
                         {"fall_percent", r.fall_percent},
                         {"reference_fall_percent", reference_fall_percent(r.group)},
                         {"per_prompt_qwk", r.per_prompt_qwk}});
  return j.dump(2) + "\n";
}

std::string ablation_text(const AblationReport& rep) {
  std::string out = "Fall in mean test QWK when a feature group is removed (";
  out += rep.mode == ImportanceMode::RefitAblation ? "refit" : "permutation";
  out += ")\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "Full model mean QWK: %.3f\n\n", rep.full_mean_qwk);
  out += line;
  std::snprintf(line, sizeof line, "%-4s %-32s %9s %8s %8s %10s\n", "Rank", "Feature group", "QWK", "Fall", "Fall %",
                "Reference");
  out += line;
  int rank = 0;
  for (const auto& r : rep.rows) {
    std::snprintf(line, sizeof line, "%-4d %-32s %9.3f %8.3f %7.2f%% %9.2f%%\n", ++rank,
                  std::string(group_label(r.group)).c_str(), r.mean_qwk, r.fall, r.fall_percent,
                  reference_fall_percent(r.group));
    out += line;
  }
  return out;
}

}  // namespace autosas
