#include "autosas/autosas.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include <json.hpp>

#include "autosas/config.hpp"
#include "autosas/error.hpp"
#include "autosas/experiment.hpp"
#include "autosas/log.hpp"
#include "autosas/model.hpp"
#include "autosas/qwk.hpp"

struct autosas_config {
  autosas::RunConfig config;
  bool prompts_overridden = false;
};

struct autosas_model {
  std::unique_ptr<autosas::Scorer> scorer;
};

namespace {

thread_local std::string g_last_error;

autosas_status fail(autosas_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
autosas_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return AUTOSAS_OK;
  } catch (const autosas::Error& e) {
    return fail(static_cast<autosas_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(AUTOSAS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(AUTOSAS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(AUTOSAS_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw autosas::InvalidArgument(std::string(what) + " is null");
}

void write_text(const autosas::fs::path& path, const std::string& text) {
  autosas::fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw autosas::IoError("cannot write " + path.string());
  out << text;
}

autosas::ReportFormat report_format(autosas_format f) {
  if (f == AUTOSAS_FORMAT_TEXT) return autosas::ReportFormat::PlainText;
  if (f == AUTOSAS_FORMAT_JSON) return autosas::ReportFormat::Structured;
  throw autosas::InvalidArgument("unknown report format");
}

std::string render_reports(const std::vector<autosas::FeedbackReport>& reports, autosas_format format,
                           std::size_t top_groups) {
  const auto fmt = report_format(format);
  if (fmt == autosas::ReportFormat::Structured) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(nlohmann::json::parse(autosas::render(r, fmt, top_groups)));
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += "\n";
    out += autosas::render(reports[i], fmt, top_groups);
  }
  return out;
}

std::mutex g_handler_mutex;

}  // namespace

extern "C" {

const char* autosas_version(void) { return "1.0.0"; }

const char* autosas_last_error(void) { return g_last_error.c_str(); }

const char* autosas_status_name(autosas_status status) {
  switch (status) {
    case AUTOSAS_OK: return "ok";
    case AUTOSAS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AUTOSAS_ERR_CONFIG: return "config error";
    case AUTOSAS_ERR_IO: return "i/o error";
    case AUTOSAS_ERR_FORMAT: return "format error";
    case AUTOSAS_ERR_VERSION: return "version mismatch";
    case AUTOSAS_ERR_DEGENERATE_RATINGS: return "degenerate ratings";
    case AUTOSAS_ERR_SCHEMA: return "schema error";
    case AUTOSAS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void autosas_string_free(char* s) { std::free(s); }

void autosas_set_warning_handler(autosas_warning_fn fn, void* user_data) {
  std::lock_guard lock(g_handler_mutex);
  if (!fn) {
    autosas::set_warning_handler({});
    return;
  }
  autosas::set_warning_handler([fn, user_data](const std::string& m) { fn(m.c_str(), user_data); });
}

autosas_status autosas_qwk(const int* human, const int* model, size_t n, int grade_min, int grade_max,
                           double* kappa) {
  return guarded([&] {
    require(kappa, "kappa");
    if (n > 0) {
      require(human, "human");
      require(model, "model");
    }
    *kappa = autosas::quadratic_weighted_kappa(std::span<const int>(human, n), std::span<const int>(model, n),
                                               grade_min, grade_max);
  });
}

autosas_status autosas_config_load(const char* path, autosas_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    autosas::fs::path p;
    if (path) {
      p = path;
    } else if (auto env = autosas::default_config_path()) {
      p = *env;
    } else {
      throw autosas::ConfigError("no config path given and AUTOSAS_CONFIG is not set");
    }
    auto cfg = std::make_unique<autosas_config>();
    cfg->config = autosas::load_run_config(p);
    *out = cfg.release();
  });
}

autosas_status autosas_config_from_json(const char* json, const char* base_dir, autosas_config** out) {
  return guarded([&] {
    require(out, "out");
    require(json, "json");
    *out = nullptr;
    auto cfg = std::make_unique<autosas_config>();
    cfg->config = autosas::parse_run_config(json, base_dir ? autosas::fs::path(base_dir) : autosas::fs::current_path());
    *out = cfg.release();
  });
}

void autosas_config_free(autosas_config* config) { delete config; }

autosas_status autosas_config_set_seed(autosas_config* config, uint64_t seed) {
  return guarded([&] {
    require(config, "config");
    config->config.seed = seed;
  });
}

autosas_status autosas_config_set_out_dir(autosas_config* config, const char* dir) {
  return guarded([&] {
    require(config, "config");
    require(dir, "dir");
    if (!*dir) throw autosas::InvalidArgument("output directory is empty");
    config->config.out_dir = dir;
  });
}

autosas_status autosas_config_select_prompt(autosas_config* config, const char* prompt_id) {
  return guarded([&] {
    require(config, "config");
    require(prompt_id, "prompt_id");
    if (!config->prompts_overridden) config->config.prompt_ids.clear();
    config->prompts_overridden = true;
    config->config.prompt_ids.emplace_back(prompt_id);
  });
}

autosas_status autosas_config_disable_group(autosas_config* config, const char* group) {
  return guarded([&] {
    require(config, "config");
    require(group, "group");
    const auto g = autosas::parse_group(group);
    if (!g) throw autosas::InvalidArgument(std::string("unknown feature group '") + group + "'");
    config->config.enabled[static_cast<std::size_t>(*g)] = false;
  });
}

autosas_status autosas_config_validate(const autosas_config* config) {
  return guarded([&] {
    require(config, "config");
    autosas::validate(config->config, true);
  });
}

autosas_status autosas_config_out_dir(const autosas_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = dup(config->config.out_dir.string());
  });
}

autosas_status autosas_train(const autosas_config* config, char** report) {
  return guarded([&] {
    require(config, "config");
    const auto run = autosas::run_experiment(config->config, false);
    autosas::write_experiment_outputs(config->config, run);
    if (report) *report = dup(autosas::report_text(run.report));
  });
}

autosas_status autosas_evaluate(const autosas_config* config, char** report) {
  return guarded([&] {
    require(config, "config");
    const auto run = autosas::run_experiment(config->config, true);
    autosas::write_experiment_outputs(config->config, run);
    if (report) *report = dup(autosas::report_text(run.report));
  });
}

autosas_status autosas_ablate(const autosas_config* config, char** report) {
  return guarded([&] {
    require(config, "config");
    const auto& cfg = config->config;
    const auto rep = autosas::run_ablation(cfg);
    write_text(cfg.out_dir / "ablation.json", autosas::ablation_json(rep, cfg));
    const std::string text = autosas::ablation_text(rep);
    write_text(cfg.out_dir / "ablation.txt", text);
    if (report) *report = dup(text);
  });
}

autosas_status autosas_model_load(const char* path, autosas_model** out) {
  return guarded([&] {
    require(out, "out");
    require(path, "path");
    *out = nullptr;
    auto m = std::make_unique<autosas_model>();
    m->scorer = std::make_unique<autosas::Scorer>(autosas::load_model(path));
    *out = m.release();
  });
}

void autosas_model_free(autosas_model* model) { delete model; }

autosas_status autosas_model_prompt(const autosas_model* model, char** prompt_id) {
  return guarded([&] {
    require(model, "model");
    require(prompt_id, "prompt_id");
    *prompt_id = dup(model->scorer->model().prompt_id);
  });
}

autosas_status autosas_score_text(const autosas_model* model, const char* text, int* grade, double* raw) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    const auto r = model->scorer->score(text);
    if (grade) *grade = r.grade;
    if (raw) *raw = r.raw;
  });
}

autosas_status autosas_score_file(const autosas_model* const* models, size_t n_models, const char* responses_path,
                                  char** out) {
  return guarded([&] {
    require(out, "out");
    require(responses_path, "responses_path");
    if (n_models == 0) throw autosas::InvalidArgument("no models given");
    require(models, "models");
    std::map<std::string, const autosas::Scorer*> by_prompt;
    for (size_t i = 0; i < n_models; ++i) {
      require(models[i], "model");
      const auto& id = models[i]->scorer->model().prompt_id;
      if (!by_prompt.emplace(id, models[i]->scorer.get()).second)
        throw autosas::InvalidArgument("two models for prompt " + id);
    }
    const auto rows = autosas::load_unscored_tsv(responses_path);
    std::string result = "Id\tEssaySet\tGrade\tRaw\n";
    for (const auto& r : rows) {
      const auto it = by_prompt.find(r.prompt_id);
      if (it == by_prompt.end())
        throw autosas::InvalidArgument("response " + r.id + ": no model for prompt " + r.prompt_id);
      const auto s = it->second->score(r.text);
      char raw[40];
      std::snprintf(raw, sizeof raw, "%.6f", s.raw);
      result += r.id + "\t" + r.prompt_id + "\t" + std::to_string(s.grade) + "\t" + raw + "\n";
    }
    *out = dup(result);
  });
}

autosas_status autosas_feedback_text(const autosas_model* model, const char* response_id, const char* text,
                                     autosas_format format, size_t top_groups, char** out) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    require(out, "out");
    const auto fmt = report_format(format);
    autosas::FeedbackOptions opts;
    if (top_groups) opts.top_groups = top_groups;
    const auto rep = model->scorer->feedback(response_id ? response_id : "response", text, opts);
    *out = dup(autosas::render(rep, fmt, opts.top_groups));
  });
}

autosas_status autosas_feedback_file(const autosas_model* model, const char* responses_path, const char* response_id,
                                     autosas_format format, size_t top_groups, char** out) {
  return guarded([&] {
    require(model, "model");
    require(responses_path, "responses_path");
    require(out, "out");
    autosas::FeedbackOptions opts;
    if (top_groups) opts.top_groups = top_groups;
    const auto& prompt = model->scorer->model().prompt_id;
    std::vector<autosas::FeedbackReport> reports;
    for (const auto& r : autosas::load_unscored_tsv(responses_path)) {
      if (response_id ? r.id != response_id : r.prompt_id != prompt) continue;
      if (r.prompt_id != prompt)
        throw autosas::InvalidArgument("response " + r.id + " belongs to prompt " + r.prompt_id +
                                       ", model is for prompt " + prompt);
      reports.push_back(model->scorer->feedback(r.id, r.text, opts));
    }
    if (response_id && reports.empty())
      throw autosas::InvalidArgument(std::string("response ") + response_id + " not found");
    *out = dup(render_reports(reports, format, opts.top_groups));
  });
}

}  // extern "C"
