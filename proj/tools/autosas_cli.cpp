#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "autosas/autosas.h"

namespace fs = std::filesystem;

namespace {

constexpr int kUsageExit = 64;

const char* const kGroups[] = {"embeddings",         "pos-ngrams",        "weighted-keywords",
                               "prompt-overlap",     "lexical-overlap",   "logical-operators",
                               "temporal",           "length-stats",      "word-freq-difficulty"};

struct RunOptions {
  std::optional<std::string> config;
  std::vector<std::string> prompts;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool disabled[std::size(kGroups)] = {};
};

struct Failure {
  autosas_status status;
};

void check(autosas_status s) {
  if (s != AUTOSAS_OK) throw Failure{s};
}

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config, "Run config (default: $AUTOSAS_CONFIG)");
  cmd->add_option("--prompt", o.prompts, "Restrict to prompt id (repeatable)");
  cmd->add_option("--seed", o.seed, "Override the config seed");
  cmd->add_option("--out", o.out, "Override the output directory");
  for (std::size_t i = 0; i < std::size(kGroups); ++i)
    cmd->add_flag(std::string("--disable-") + kGroups[i], o.disabled[i],
                  std::string("Turn off the ") + kGroups[i] + " feature group");
}

struct ConfigHandle {
  autosas_config* p = nullptr;
  ~ConfigHandle() { autosas_config_free(p); }
};

struct ModelHandle {
  autosas_model* p = nullptr;
  ModelHandle() = default;
  ModelHandle(ModelHandle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ModelHandle(const ModelHandle&) = delete;
  ~ModelHandle() { autosas_model_free(p); }
};

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { autosas_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

void load_config(const RunOptions& o, ConfigHandle& cfg) {
  check(autosas_config_load(o.config ? o.config->c_str() : nullptr, &cfg.p));
  if (o.seed) check(autosas_config_set_seed(cfg.p, *o.seed));
  if (o.out) check(autosas_config_set_out_dir(cfg.p, o.out->c_str()));
  for (const auto& p : o.prompts) check(autosas_config_select_prompt(cfg.p, p.c_str()));
  for (std::size_t i = 0; i < std::size(kGroups); ++i)
    if (o.disabled[i]) check(autosas_config_disable_group(cfg.p, kGroups[i]));
  check(autosas_config_validate(cfg.p));
}

using RunFn = autosas_status (*)(const autosas_config*, char**);

void run_stage(const RunOptions& o, RunFn fn) {
  ConfigHandle cfg;
  load_config(o, cfg);
  OwnedString report, out_dir;
  check(fn(cfg.p, &report.p));
  check(autosas_config_out_dir(cfg.p, &out_dir.p));
  std::cout << report.str();
  std::cerr << "outputs written to " << out_dir.str() << "\n";
}

std::vector<std::string> model_paths(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(a))
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path().string());
      std::sort(found.begin(), found.end());
      if (found.empty()) {
        std::cerr << "error: no model files in " << a << "\n";
        throw Failure{AUTOSAS_ERR_IO};
      }
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(a);
    }
  }
  return out;
}

void emit(const std::string& text, const std::optional<std::string>& path) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f || !(f << text)) {
    std::cerr << "error: cannot write " << *path << "\n";
    throw Failure{AUTOSAS_ERR_IO};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short-answer scoring: train, score, evaluate, ablate, feedback"};
  app.require_subcommand(1);
  app.set_version_flag("--version", autosas_version());

  RunOptions train_opts, eval_opts, ablate_opts;
  auto* train = app.add_subcommand("train", "Train one model per prompt and write a validation report");
  add_run_options(train, train_opts);
  auto* evaluate = app.add_subcommand("evaluate", "Train, then report test QWK per prompt");
  add_run_options(evaluate, eval_opts);
  auto* ablate = app.add_subcommand("ablate", "Measure the QWK fall from removing each feature group");
  add_run_options(ablate, ablate_opts);

  std::vector<std::string> score_models;
  std::string score_input;
  std::optional<std::string> score_out;
  auto* score = app.add_subcommand("score", "Grade responses with trained models");
  score->add_option("--model", score_models, "Model file or directory of models (repeatable)")->required();
  score->add_option("--responses", score_input, "Response TSV")->required();
  score->add_option("--output", score_out, "Write grades here instead of stdout");

  std::string fb_model;
  std::optional<std::string> fb_input, fb_id, fb_text, fb_out;
  std::string fb_format = "text";
  std::size_t fb_top = 0;
  auto* feedback = app.add_subcommand("feedback", "Explain a model's grade for responses");
  feedback->add_option("--model", fb_model, "Model file")->required();
  auto* fb_resp = feedback->add_option("--responses", fb_input, "Response TSV");
  feedback->add_option("--id", fb_id, "Only this response id");
  auto* fb_txt = feedback->add_option("--text", fb_text, "Response text given inline");
  fb_resp->excludes(fb_txt);
  feedback->add_option("--format", fb_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  feedback->add_option("--top-groups", fb_top, "Rows in the contribution table (0: all)");
  feedback->add_option("--output", fb_out, "Write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageExit;
  }

  autosas_set_warning_handler(
      [](const char* m, void*) { std::cerr << "warning: " << m << "\n"; }, nullptr);

  try {
    if (*train) run_stage(train_opts, autosas_train);
    if (*evaluate) run_stage(eval_opts, autosas_evaluate);
    if (*ablate) run_stage(ablate_opts, autosas_ablate);
    if (*score) {
      std::vector<ModelHandle> models;
      for (const auto& p : model_paths(score_models)) {
        ModelHandle m;
        check(autosas_model_load(p.c_str(), &m.p));
        models.push_back(std::move(m));
      }
      std::vector<const autosas_model*> ptrs;
      for (const auto& m : models) ptrs.push_back(m.p);
      OwnedString out;
      check(autosas_score_file(ptrs.data(), ptrs.size(), score_input.c_str(), &out.p));
      emit(out.str(), score_out);
    }
    if (*feedback) {
      if (!fb_input && !fb_text) {
        std::cerr << "error: feedback needs --responses or --text\n";
        return kUsageExit;
      }
      ModelHandle m;
      check(autosas_model_load(fb_model.c_str(), &m.p));
      const auto fmt = fb_format == "json" ? AUTOSAS_FORMAT_JSON : AUTOSAS_FORMAT_TEXT;
      OwnedString out;
      if (fb_text)
        check(autosas_feedback_text(m.p, fb_id ? fb_id->c_str() : nullptr, fb_text->c_str(), fmt, fb_top, &out.p));
      else
        check(autosas_feedback_file(m.p, fb_input->c_str(), fb_id ? fb_id->c_str() : nullptr, fmt, fb_top, &out.p));
      emit(out.str(), fb_out);
    }
  } catch (const Failure& f) {
    if (f.status != AUTOSAS_ERR_IO || *autosas_last_error())
      std::cerr << "error (" << autosas_status_name(f.status) << "): " << autosas_last_error() << "\n";
    return static_cast<int>(f.status);
  }
  return 0;
}
