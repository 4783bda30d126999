#include "autosas/model.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "autosas/error.hpp"
#include "autosas/log.hpp"

namespace autosas {

using nlohmann::json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  std::size_t used = 0;
  const auto v = std::stoull(s, &used, 16);
  if (used != s.size()) throw FormatError("bad fingerprint '" + s + "'");
  return v;
}

json opt_path_json(const std::optional<fs::path>& p) { return p ? json(p->string()) : json(nullptr); }

std::optional<fs::path> opt_path_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return fs::path(j.at(key).get<std::string>());
}

json resources_json(const ResourcePaths& r) {
  return {{"embeddings", opt_path_json(r.embeddings)},
          {"embeddings_format", r.embeddings_format == VectorFormat::Binary ? "binary" : "text"},
          {"idf", opt_path_json(r.idf)},
          {"spelling_lexicon", r.spelling_lexicon.string()},
          {"tag_lexicon", r.tag_lexicon.string()},
          {"tagger_model", opt_path_json(r.tagger_model)},
          {"tagger_corpus", opt_path_json(r.tagger_corpus)},
          {"difficulty_lexicon", r.difficulty_lexicon.string()},
          {"stopwords", opt_path_json(r.stopwords)},
          {"synonyms", opt_path_json(r.synonyms)},
          {"lemma_rules", opt_path_json(r.lemma_rules)}};
}

ResourcePaths resources_from(const json& j) {
  ResourcePaths r;
  r.embeddings = opt_path_from(j, "embeddings");
  r.embeddings_format = j.at("embeddings_format") == "binary" ? VectorFormat::Binary : VectorFormat::Text;
  r.idf = opt_path_from(j, "idf");
  r.spelling_lexicon = j.at("spelling_lexicon").get<std::string>();
  r.tag_lexicon = j.at("tag_lexicon").get<std::string>();
  r.tagger_model = opt_path_from(j, "tagger_model");
  r.tagger_corpus = opt_path_from(j, "tagger_corpus");
  r.difficulty_lexicon = j.at("difficulty_lexicon").get<std::string>();
  r.stopwords = opt_path_from(j, "stopwords");
  r.synonyms = opt_path_from(j, "synonyms");
  r.lemma_rules = opt_path_from(j, "lemma_rules");
  return r;
}

json features_json(const FittedFeatures& f) {
  json enabled = json::array();
  for (FeatureGroup g : all_groups())
    if (f.enabled[static_cast<std::size_t>(g)]) enabled.push_back(std::string(group_name(g)));
  json passage = nullptr;
  if (f.passage) {
    json args = json::array();
    for (const auto& [n, v] : f.passage->arguments) args.push_back({n, v});
    passage = {{"nouns", f.passage->nouns}, {"arguments", args}, {"content", f.passage->content}};
  }
  json ngrams = {{"incidence_threshold", f.ngrams.incidence_threshold}};
  for (int n = kMinNgram; n <= kMaxNgram; ++n)
    ngrams[std::to_string(n)] = f.ngrams.grams[static_cast<std::size_t>(n - kMinNgram)];
  json groups = json::array();
  for (FeatureGroup g : f.schema.groups) groups.push_back(std::string(group_name(g)));
  return {{"enabled_groups", enabled},
          {"question_content", f.question_content},
          {"passage", passage},
          {"high_grade_cutoff", f.high_grade_cutoff},
          {"ngrams", ngrams},
          {"keywords", f.keywords},
          {"embedding_dim", f.embedding_dim},
          {"doc_idf", f.doc_idf},
          {"common_component", f.common_component},
          {"schema",
           {{"names", f.schema.names},
            {"groups", groups},
            {"mean", f.schema.mean},
            {"stddev", f.schema.stddev},
            {"normalized", f.schema.normalized},
            {"fingerprint", hex64(f.schema.fingerprint())}}}};
}

FittedFeatures features_from(const json& j, const ScoringModel& m) {
  FittedFeatures f;
  f.prompt_id = m.prompt_id;
  f.grade_min = m.grade_min;
  f.grade_max = m.grade_max;
  f.enabled.fill(false);
  for (const auto& g : j.at("enabled_groups")) {
    auto group = parse_group(g.get<std::string>());
    if (!group) throw FormatError("unknown feature group " + g.dump());
    f.enabled[static_cast<std::size_t>(*group)] = true;
  }
  f.question_content = j.at("question_content").get<std::set<std::string>>();
  if (!j.at("passage").is_null()) {
    const json& p = j.at("passage");
    PassageSets ps;
    ps.nouns = p.at("nouns").get<std::set<std::string>>();
    for (const auto& a : p.at("arguments")) ps.arguments.emplace(a.at(0).get<std::string>(), a.at(1).get<std::string>());
    ps.content = p.at("content").get<std::set<std::string>>();
    f.passage = std::move(ps);
  }
  f.high_grade_cutoff = j.at("high_grade_cutoff").get<int>();
  const json& ng = j.at("ngrams");
  f.ngrams.incidence_threshold = ng.at("incidence_threshold").get<long>();
  for (int n = kMinNgram; n <= kMaxNgram; ++n)
    f.ngrams.grams[static_cast<std::size_t>(n - kMinNgram)] = ng.at(std::to_string(n)).get<std::set<std::string>>();
  f.keywords = j.at("keywords").get<KeywordWeights>();
  f.embedding_dim = j.at("embedding_dim").get<std::size_t>();
  f.doc_idf = j.at("doc_idf").get<std::map<std::string, double>>();
  f.common_component = j.at("common_component").get<std::vector<double>>();
  const json& s = j.at("schema");
  f.schema.names = s.at("names").get<std::vector<std::string>>();
  for (const auto& g : s.at("groups")) {
    auto group = parse_group(g.get<std::string>());
    if (!group) throw FormatError("unknown feature group " + g.dump());
    f.schema.groups.push_back(*group);
  }
  f.schema.mean = s.at("mean").get<std::vector<double>>();
  f.schema.stddev = s.at("stddev").get<std::vector<double>>();
  f.schema.normalized = s.at("normalized").get<std::vector<bool>>();
  f.schema.validate();
  if (hex64(f.schema.fingerprint()) != s.at("fingerprint").get<std::string>())
    throw SchemaError("feature schema fingerprint mismatch");
  return f;
}

json forest_json(const Forest& forest) {
  const ForestParams& p = forest.params();
  json trees = json::array();
  for (const Tree& t : forest.trees())
    trees.push_back({{"feature", t.feature},
                     {"threshold", t.threshold},
                     {"value", t.value},
                     {"left", t.left},
                     {"right", t.right}});
  return {{"params",
           {{"n_trees", p.n_trees},
            {"max_depth", p.max_depth},
            {"min_samples_leaf", p.min_samples_leaf},
            {"features_per_split", p.features_per_split},
            {"seed", p.seed}}},
          {"n_features", forest.n_features()},
          {"schema_fingerprint", hex64(forest.schema_fingerprint)},
          {"trees", trees}};
}

Forest forest_from(const json& j) {
  ForestParams p;
  const json& pj = j.at("params");
  p.n_trees = pj.at("n_trees").get<int>();
  p.max_depth = pj.at("max_depth").get<int>();
  p.min_samples_leaf = pj.at("min_samples_leaf").get<int>();
  p.features_per_split = pj.at("features_per_split").get<int>();
  p.seed = pj.at("seed").get<std::uint64_t>();
  const auto width = j.at("n_features").get<std::size_t>();
  std::vector<Tree> trees;
  for (const auto& tj : j.at("trees")) {
    Tree t;
    t.feature = tj.at("feature").get<std::vector<std::int32_t>>();
    t.threshold = tj.at("threshold").get<std::vector<double>>();
    t.value = tj.at("value").get<std::vector<double>>();
    t.left = tj.at("left").get<std::vector<std::int32_t>>();
    t.right = tj.at("right").get<std::vector<std::int32_t>>();
    const std::size_t n = t.feature.size();
    if (n == 0 || t.threshold.size() != n || t.value.size() != n || t.left.size() != n || t.right.size() != n)
      throw FormatError("tree arrays have inconsistent lengths");
    for (std::size_t k = 0; k < n; ++k) {
      if (t.feature[k] < 0) continue;
      const auto f = static_cast<std::size_t>(t.feature[k]);
      const auto l = t.left[k], r = t.right[k];
      if (f >= width || l <= static_cast<std::int32_t>(k) || r <= static_cast<std::int32_t>(k) ||
          static_cast<std::size_t>(l) >= n || static_cast<std::size_t>(r) >= n)
        throw FormatError("tree node " + std::to_string(k) + " has invalid links");
    }
    trees.push_back(std::move(t));
  }
  if (static_cast<int>(trees.size()) != p.n_trees) throw FormatError("tree count does not match n_trees");
  Forest forest(p, width, std::move(trees));
  forest.schema_fingerprint = parse_hex64(j.at("schema_fingerprint").get<std::string>());
  return forest;
}

}  // namespace

std::string serialize_model(const ScoringModel& m) {
  json j;
  j["format"] = "autosas-model";
  j["version"] = ScoringModel::kFormatVersion;
  j["prompt"] = {{"id", m.prompt_id}, {"grade_min", m.grade_min}, {"grade_max", m.grade_max}};
  j["pipeline"] = {{"spell_check", m.spell_check}, {"domain_words", m.domain_words}};
  j["resources"] = resources_json(m.resources);
  j["resource_digests"] = m.resource_digests;
  j["features"] = features_json(m.features);
  j["forest"] = forest_json(m.forest);
  j["feedback"] = {{"percentile", m.feedback.percentile}, {"thresholds", m.feedback.values}};
  return j.dump() + "\n";
}

ScoringModel parse_model(std::string_view text, std::string_view source) {
  const std::string where(source);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(where + ": model file is not valid JSON (" + e.what() + ")");
  }
  try {
    if (!j.is_object() || j.value("format", std::string()) != "autosas-model")
      throw FormatError(where + ": not an autosas model file");
    const int version = j.at("version").get<int>();
    if (version != ScoringModel::kFormatVersion)
      throw VersionError(where + ": model format version " + std::to_string(version) + " is not supported (expected " +
                         std::to_string(ScoringModel::kFormatVersion) + ")");
    ScoringModel m;
    m.prompt_id = j.at("prompt").at("id").get<std::string>();
    m.grade_min = j.at("prompt").at("grade_min").get<int>();
    m.grade_max = j.at("prompt").at("grade_max").get<int>();
    m.spell_check = j.at("pipeline").at("spell_check").get<bool>();
    m.domain_words = j.at("pipeline").at("domain_words").get<std::vector<std::string>>();
    m.resources = resources_from(j.at("resources"));
    m.resource_digests = j.at("resource_digests").get<std::map<std::string, std::string>>();
    m.features = features_from(j.at("features"), m);
    m.forest = forest_from(j.at("forest"));
    m.feedback.percentile = j.at("feedback").at("percentile").get<double>();
    m.feedback.values = j.at("feedback").at("thresholds").get<std::map<std::string, double>>();
    if (m.forest.n_features() != m.features.schema.size() ||
        m.forest.schema_fingerprint != m.features.schema.fingerprint())
      throw SchemaError(where + ": forest was trained on a different feature schema");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(where + ": corrupt model file (" + e.what() + ")");
  }
}

void save_model(const ScoringModel& model, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path.string());
  out << serialize_model(model);
  if (!out) throw IoError("failed writing model: " + path.string());
}

ScoringModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str(), path.string());
}

Scorer::Scorer(ScoringModel model, std::shared_ptr<const LoadedResources> resources)
    : model_(std::move(model)), resources_(std::move(resources)) {
  if (!resources_) {
    const auto current = resource_digests(model_.resources);
    for (const auto& [role, digest] : model_.resource_digests) {
      auto it = current.find(role);
      if (it == current.end() || it->second != digest)
        warn("resource '" + role + "' differs from the one the model was trained with");
    }
    resources_ = load_resources(model_.resources);
  }
  pipeline_ = std::make_unique<TextPipeline>(resources_->prompt_pipeline(model_.spell_check, model_.domain_words));
  extractor_ = std::make_unique<FeatureExtractor>(resources_->extractor, model_.features);
}

ScoredResponse Scorer::score(std::string_view text) const {
  ScoredResponse s;
  const TaggedDoc doc = pipeline_->process(text);
  s.raw_features = extractor_->raw(doc);
  s.features = extractor_->normalize(s.raw_features);
  s.raw = model_.forest.predict(s.features);
  s.grade = round_grade(s.raw, model_.grade_min, model_.grade_max);
  return s;
}

FeedbackReport Scorer::feedback(const std::string& response_id, std::string_view text,
                                const FeedbackOptions& options) const {
  const ScoredResponse s = score(text);
  const Contribution c = model_.forest.decompose(s.features, extractor_->schema());
  return build_report(response_id, model_.prompt_id, c, extractor_->schema(), s.raw_features, model_.feedback,
                      model_.grade_min, model_.grade_max, options);
}

}  // namespace autosas
