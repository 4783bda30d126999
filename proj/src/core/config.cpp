#include "autosas/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "autosas/error.hpp"

#ifndef AUTOSAS_DEFAULT_DATA_DIR
#define AUTOSAS_DEFAULT_DATA_DIR "data"
#endif

namespace autosas {

using nlohmann::json;

fs::path data_dir() {
  if (const char* env = std::getenv("AUTOSAS_DATA_DIR"); env && *env) return fs::path(env);
  return fs::path(AUTOSAS_DEFAULT_DATA_DIR);
}

ResourcePaths ResourcePaths::defaults() {
  const fs::path d = data_dir();
  ResourcePaths r;
  r.spelling_lexicon = d / "word-frequencies.txt";
  r.difficulty_lexicon = d / "word-frequencies.txt";
  r.tag_lexicon = d / "tag-lexicon.txt";
  r.tagger_corpus = d / "tagger" / "train.txt";
  return r;
}

namespace {

void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path fp(p);
  return fp.is_absolute() || base.empty() ? fp : base / fp;
}

std::optional<fs::path> opt_path(const json& obj, const char* key, const fs::path& base,
                                 std::optional<fs::path> fallback) {
  if (!obj.contains(key)) return fallback;
  if (obj.at(key).is_null()) return std::nullopt;
  return resolve(base, obj.at(key).get<std::string>());
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    check_keys(doc, "config",
               {"dataset", "prompts", "resources", "split", "seed", "score_resolution", "augmentation", "forest",
                "features", "spell_check", "prompt_ids", "out_dir", "feedback", "ablation"});
    const fs::path& b = base_dir;
    c.dataset = opt_path(doc, "dataset", b, std::nullopt);
    c.prompts = opt_path(doc, "prompts", b, std::nullopt);
    if (doc.contains("resources")) {
      const json& r = doc.at("resources");
      check_keys(r, "resources",
                 {"embeddings", "embeddings_format", "idf", "spelling_lexicon", "tag_lexicon", "tagger_model",
                  "tagger_corpus", "difficulty_lexicon", "stopwords", "synonyms", "lemma_rules"});
      auto& p = c.resources;
      p.embeddings = opt_path(r, "embeddings", b, p.embeddings);
      if (r.contains("embeddings_format")) {
        auto f = parse_vector_format(r.at("embeddings_format").get<std::string>());
        if (!f) throw ConfigError("embeddings_format must be 'text' or 'binary'");
        p.embeddings_format = *f;
      }
      p.idf = opt_path(r, "idf", b, p.idf);
      if (auto v = opt_path(r, "spelling_lexicon", b, p.spelling_lexicon)) p.spelling_lexicon = *v;
      if (auto v = opt_path(r, "tag_lexicon", b, p.tag_lexicon)) p.tag_lexicon = *v;
      if (auto v = opt_path(r, "difficulty_lexicon", b, p.difficulty_lexicon)) p.difficulty_lexicon = *v;
      p.tagger_model = opt_path(r, "tagger_model", b, p.tagger_model);
      p.tagger_corpus = opt_path(r, "tagger_corpus", b, p.tagger_corpus);
      p.stopwords = opt_path(r, "stopwords", b, p.stopwords);
      p.synonyms = opt_path(r, "synonyms", b, p.synonyms);
      p.lemma_rules = opt_path(r, "lemma_rules", b, p.lemma_rules);
    }
    if (doc.contains("split")) {
      const json& s = doc.at("split");
      check_keys(s, "split", {"train", "validation", "test"});
      c.split.train = s.value("train", c.split.train);
      c.split.validation = s.value("validation", c.split.validation);
      c.split.test = s.value("test", c.split.test);
    }
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("score_resolution")) {
      auto r = parse_score_resolution(doc.at("score_resolution").get<std::string>());
      if (!r) throw ConfigError("score_resolution must be score_a, score_b or max");
      c.resolution = *r;
    }
    if (doc.contains("augmentation")) {
      const json& a = doc.at("augmentation");
      check_keys(a, "augmentation", {"cross_prompt", "shuffled"});
      c.cross_prompt_negatives = a.value("cross_prompt", c.cross_prompt_negatives);
      c.shuffled_negatives = a.value("shuffled", c.shuffled_negatives);
    }
    if (doc.contains("forest")) {
      const json& f = doc.at("forest");
      check_keys(f, "forest", {"n_trees", "max_depth", "min_samples_leaf", "features_per_split", "threads"});
      c.forest.n_trees = f.value("n_trees", c.forest.n_trees);
      if (f.contains("max_depth")) c.forest.max_depth = f.at("max_depth").is_null() ? -1 : f.at("max_depth").get<int>();
      c.forest.min_samples_leaf = f.value("min_samples_leaf", c.forest.min_samples_leaf);
      if (f.contains("features_per_split"))
        c.forest.features_per_split = f.at("features_per_split").is_null() ? 0 : f.at("features_per_split").get<int>();
      c.forest.threads = f.value("threads", c.forest.threads);
    }
    if (doc.contains("features")) {
      const json& f = doc.at("features");
      check_keys(f, "features",
                 {"disable", "ngram_thresholds", "high_grade_cutoff", "sweep_trees", "remove_common_component"});
      if (f.contains("disable")) {
        for (const auto& g : f.at("disable")) {
          auto group = parse_group(g.get<std::string>());
          if (!group) throw ConfigError("unknown feature group '" + g.get<std::string>() + "'");
          c.enabled[static_cast<std::size_t>(*group)] = false;
        }
      }
      if (f.contains("ngram_thresholds")) c.ngram_thresholds = f.at("ngram_thresholds").get<std::vector<long>>();
      if (f.contains("high_grade_cutoff") && !f.at("high_grade_cutoff").is_null())
        c.high_grade_cutoff = f.at("high_grade_cutoff").get<int>();
      c.sweep_trees = f.value("sweep_trees", c.sweep_trees);
      c.remove_common_component = f.value("remove_common_component", c.remove_common_component);
    }
    c.spell_check = doc.value("spell_check", c.spell_check);
    if (doc.contains("prompt_ids")) {
      for (const auto& id : doc.at("prompt_ids"))
        c.prompt_ids.push_back(id.is_string() ? id.get<std::string>() : std::to_string(id.get<long long>()));
    }
    if (doc.contains("out_dir")) c.out_dir = resolve(b, doc.at("out_dir").get<std::string>());
    if (doc.contains("feedback")) {
      const json& f = doc.at("feedback");
      check_keys(f, "feedback", {"top_groups", "top_members", "percentile"});
      c.feedback.top_groups = f.value("top_groups", c.feedback.top_groups);
      c.feedback.top_members = f.value("top_members", c.feedback.top_members);
      c.feedback.percentile = f.value("percentile", c.feedback.percentile);
    }
    if (doc.contains("ablation")) {
      const json& a = doc.at("ablation");
      check_keys(a, "ablation", {"mode"});
      const auto mode = a.value("mode", std::string("refit"));
      if (mode == "refit") c.ablation_mode = ImportanceMode::RefitAblation;
      else if (mode == "permutation") c.ablation_mode = ImportanceMode::Permutation;
      else throw ConfigError("ablation.mode must be 'refit' or 'permutation'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  RunConfig c = parse_run_config(buf.str(), fs::absolute(base).lexically_normal());
  c.source = path;
  return c;
}

std::optional<fs::path> default_config_path() {
  if (const char* env = std::getenv("AUTOSAS_CONFIG"); env && *env) return fs::path(env);
  return std::nullopt;
}

void validate(const RunConfig& c, bool needs_dataset) {
  const double sum = c.split.train + c.split.validation + c.split.test;
  if (c.split.train < 0 || c.split.validation < 0 || c.split.test < 0 || std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("split ratios must be nonnegative and sum to 1");
  if (c.split.train <= 0) throw ConfigError("split.train must be positive");
  bool any = false;
  for (bool b : c.enabled) any = any || b;
  if (!any) throw ConfigError("at least one feature group must be enabled");
  if (c.forest.n_trees < 1) throw ConfigError("forest.n_trees must be at least 1");
  if (c.forest.min_samples_leaf < 1) throw ConfigError("forest.min_samples_leaf must be at least 1");
  if (c.forest.features_per_split < 0) throw ConfigError("forest.features_per_split must be nonnegative");
  if (c.forest.threads < 0) throw ConfigError("forest.threads must be nonnegative");
  if (c.sweep_trees < 1) throw ConfigError("features.sweep_trees must be at least 1");
  if (c.ngram_thresholds.empty()) throw ConfigError("features.ngram_thresholds must not be empty");
  for (long t : c.ngram_thresholds)
    if (t < 0) throw ConfigError("n-gram thresholds must be nonnegative");
  if (c.feedback.percentile < 0 || c.feedback.percentile > 100)
    throw ConfigError("feedback.percentile must lie in [0, 100]");

  auto must_exist = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  if (needs_dataset) {
    if (!c.dataset) throw ConfigError("config has no dataset");
    if (!c.prompts) throw ConfigError("config has no prompt table");
    must_exist(*c.dataset, "dataset");
    must_exist(*c.prompts, "prompt table");
  }
  const auto& r = c.resources;
  if (r.embeddings) must_exist(*r.embeddings, "embeddings");
  if (r.idf) must_exist(*r.idf, "idf sidecar");
  must_exist(r.spelling_lexicon, "spelling lexicon");
  must_exist(r.tag_lexicon, "tag lexicon");
  if (r.tagger_model) must_exist(*r.tagger_model, "tagger model");
  if (r.tagger_corpus) must_exist(*r.tagger_corpus, "tagger corpus");
  must_exist(r.difficulty_lexicon, "difficulty lexicon");
  if (r.stopwords) must_exist(*r.stopwords, "stopword list");
  if (r.synonyms) must_exist(*r.synonyms, "synonym lexicon");
  if (r.lemma_rules) must_exist(*r.lemma_rules, "lemma rules");
}

std::string describe_resource(const std::optional<fs::path>& p) { return p ? p->string() : std::string("(none)"); }

}  // namespace autosas
