#include "autosas/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "autosas/error.hpp"
#include "autosas/log.hpp"

namespace autosas {

namespace {

bool on(const GroupMask& m, FeatureGroup g) { return m[static_cast<std::size_t>(g)]; }

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

FeatureSchema build_schema(const GroupMask& enabled, std::size_t embedding_dim) {
  FeatureSchema s;
  if (on(enabled, FeatureGroup::Embeddings) && embedding_dim > 0) {
    for (std::size_t k = 0; k < embedding_dim; ++k) s.add(numbered("emb_mean_", k, 3), FeatureGroup::Embeddings, false);
    for (std::size_t k = 0; k < embedding_dim; ++k) s.add(numbered("emb_doc_", k, 3), FeatureGroup::Embeddings, false);
  }
  if (on(enabled, FeatureGroup::PosNgrams)) {
    for (int n = kMinNgram; n <= kMaxNgram; ++n) s.add("pos_" + std::to_string(n) + "gram_count", FeatureGroup::PosNgrams);
    for (int n = kMinNgram; n <= kMaxNgram; ++n) s.add("pos_" + std::to_string(n) + "gram_ratio", FeatureGroup::PosNgrams);
  }
  if (on(enabled, FeatureGroup::WeightedKeywords)) {
    s.add("keyword_weight_sum", FeatureGroup::WeightedKeywords);
    s.add("keyword_match_count", FeatureGroup::WeightedKeywords);
  }
  if (on(enabled, FeatureGroup::PromptOverlap)) {
    s.add("prompt_coverage", FeatureGroup::PromptOverlap);
    s.add("prompt_jaccard", FeatureGroup::PromptOverlap);
  }
  if (on(enabled, FeatureGroup::LexicalOverlap)) {
    s.add("noun_overlap", FeatureGroup::LexicalOverlap);
    s.add("argument_overlap", FeatureGroup::LexicalOverlap);
    s.add("content_overlap", FeatureGroup::LexicalOverlap);
  }
  if (on(enabled, FeatureGroup::LogicalOperators)) {
    for (auto op : kLogicalOperators) s.add("logic_" + std::string(op), FeatureGroup::LogicalOperators);
    s.add("logic_if_then", FeatureGroup::LogicalOperators);
    s.add("logic_if_else", FeatureGroup::LogicalOperators);
    s.add("logic_total", FeatureGroup::LogicalOperators);
  }
  if (on(enabled, FeatureGroup::Temporal)) {
    for (const char* n : {"tense_past", "tense_present", "tense_future", "aspect_progressive", "aspect_perfect",
                          "tense_switches"})
      s.add(n, FeatureGroup::Temporal);
  }
  if (on(enabled, FeatureGroup::LengthStats)) {
    for (const char* n : {"sentence_count", "word_count", "mean_sentence_length", "mean_word_length",
                          "max_sentence_length"})
      s.add(n, FeatureGroup::LengthStats);
  }
  if (on(enabled, FeatureGroup::WordFreqDifficulty)) {
    for (int l = 1; l <= kDifficultyLevels; ++l)
      s.add(numbered("difficulty_level_", static_cast<std::size_t>(l), 2), FeatureGroup::WordFreqDifficulty);
    s.add("difficulty_oov", FeatureGroup::WordFreqDifficulty);
    s.add("unique_words", FeatureGroup::WordFreqDifficulty);
    s.add("ttr", FeatureGroup::WordFreqDifficulty);
  }
  return s;
}

FeatureExtractor::FeatureExtractor(ExtractorResources resources, FittedFeatures state)
    : resources_(std::move(resources)), state_(std::move(state)) {
  if (!resources_.difficulty || !resources_.stopwords)
    throw InvalidArgument("feature extractor needs a difficulty lexicon and a stopword list");
  if (state_.embedding_dim > 0) {
    if (!resources_.embeddings) throw SchemaError("model expects word vectors but none are loaded");
    if (resources_.embeddings->dim() != state_.embedding_dim)
      throw SchemaError("word vector dimension " + std::to_string(resources_.embeddings->dim()) +
                        " does not match the fitted " + std::to_string(state_.embedding_dim));
    doc_provider_ = std::make_unique<IdfMeanProvider>(resources_.embeddings, state_.doc_idf, state_.common_component);
  }
  const FeatureSchema expected = build_schema(state_.enabled, state_.embedding_dim);
  if (expected.names != state_.schema.names) throw SchemaError("feature schema does not match the enabled groups");
  state_.schema.validate();
}

FeatureExtractor FeatureExtractor::fit(ExtractorResources resources,
                                       const PromptSpec& prompt,
                                       const TextPipeline& pipeline,
                                       std::span<const TaggedDoc> train,
                                       std::span<const int> grades,
                                       const ExtractorOptions& options) {
  if (train.size() != grades.size()) throw InvalidArgument("training docs and grades differ in length");
  if (train.empty()) throw InvalidArgument("no training responses for prompt " + prompt.prompt_id);
  if (std::none_of(options.enabled.begin(), options.enabled.end(), [](bool b) { return b; }))
    throw ConfigError("at least one feature group must be enabled");
  if (!resources.difficulty || !resources.stopwords)
    throw InvalidArgument("feature extractor needs a difficulty lexicon and a stopword list");

  FittedFeatures st;
  st.prompt_id = prompt.prompt_id;
  st.grade_min = prompt.grade_min;
  st.grade_max = prompt.grade_max;
  st.enabled = options.enabled;
  const WordSet& stop = *resources.stopwords;

  st.question_content = content_lemmas(pipeline.process(prompt.question_text), stop);
  if (on(st.enabled, FeatureGroup::PromptOverlap) && st.question_content.empty())
    warn("prompt " + prompt.prompt_id + ": question has no content words; prompt overlap features are 0");
  if (prompt.passage_text && !prompt.passage_text->empty())
    st.passage = passage_sets(pipeline.process(*prompt.passage_text), stop);

  st.high_grade_cutoff = options.high_grade_cutoff.value_or(
      static_cast<int>(std::ceil((prompt.grade_min + prompt.grade_max) / 2.0)));
  if (on(st.enabled, FeatureGroup::PosNgrams))
    st.ngrams = fit_pos_ngram_vocab(train, grades, st.high_grade_cutoff, options.ngram_threshold);
  st.ngrams.incidence_threshold = options.ngram_threshold;

  if (on(st.enabled, FeatureGroup::WeightedKeywords)) {
    std::vector<TaggedDoc> refs;
    for (const auto& text : prompt.reference_docs) refs.push_back(pipeline.process(text));
    st.keywords = fit_keyword_weights(refs, stop);
  }

  if (on(st.enabled, FeatureGroup::Embeddings)) {
    if (resources.embeddings) {
      st.embedding_dim = resources.embeddings->dim();
      if (!resources.embeddings->has_idf()) st.doc_idf = fit_idf(train, *resources.embeddings);
      if (options.remove_common_component) {
        IdfMeanProvider plain(resources.embeddings, st.doc_idf);
        std::vector<std::vector<double>> rows;
        rows.reserve(train.size());
        for (const auto& d : train) rows.push_back(plain.embed(d));
        st.common_component = principal_direction(rows);
      }
    }
  }

  st.schema = build_schema(st.enabled, st.embedding_dim);
  if (st.schema.size() == 0) throw SchemaError("empty feature schema for prompt " + prompt.prompt_id);

  FeatureExtractor ex(resources, st);
  const std::size_t d = ex.schema().size();
  std::vector<double> sum(d, 0.0), lo(d, INFINITY), hi(d, -INFINITY);
  std::vector<std::vector<double>> rows;
  rows.reserve(train.size());
  for (const auto& doc : train) {
    rows.push_back(ex.raw(doc));
    for (std::size_t j = 0; j < d; ++j) {
      sum[j] += rows.back()[j];
      lo[j] = std::min(lo[j], rows.back()[j]);
      hi[j] = std::max(hi[j], rows.back()[j]);
    }
  }
  const double n = static_cast<double>(rows.size());
  for (std::size_t j = 0; j < d; ++j) {
    const double mean = sum[j] / n;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[j] - mean) * (r[j] - mean);
    ex.state_.schema.mean[j] = mean;
    ex.state_.schema.stddev[j] = lo[j] == hi[j] ? 0.0 : std::sqrt(ss / n);
  }
  ex.state_.schema.validate();
  return ex;
}

std::vector<double> FeatureExtractor::raw(const TaggedDoc& doc) const {
  std::vector<double> v;
  v.reserve(state_.schema.size());
  const auto& en = state_.enabled;
  const WordSet& stop = *resources_.stopwords;
  if (on(en, FeatureGroup::Embeddings) && state_.embedding_dim > 0) {
    auto mean = embed_response(doc, *resources_.embeddings, Weighting::Uniform);
    auto docv = doc_provider_->embed(doc);
    v.insert(v.end(), mean.begin(), mean.end());
    v.insert(v.end(), docv.begin(), docv.end());
  }
  if (on(en, FeatureGroup::PosNgrams)) {
    auto f = pos_ngram_features(doc, state_.ngrams);
    v.insert(v.end(), f.count.begin(), f.count.end());
    v.insert(v.end(), f.ratio.begin(), f.ratio.end());
  }
  if (on(en, FeatureGroup::WeightedKeywords)) {
    auto f = keyword_features(doc, state_.keywords);
    v.push_back(f.weight_sum);
    v.push_back(f.matched);
  }
  if (on(en, FeatureGroup::PromptOverlap)) {
    auto f = prompt_overlap(content_lemmas(doc, stop), state_.question_content);
    v.push_back(f.coverage);
    v.push_back(f.jaccard);
  }
  if (on(en, FeatureGroup::LexicalOverlap)) {
    LexicalOverlap f;
    if (state_.passage) f = lexical_overlap(doc, *state_.passage, stop, resources_.synonyms.get());
    v.push_back(f.noun);
    v.push_back(f.argument);
    v.push_back(f.content);
  }
  if (on(en, FeatureGroup::LogicalOperators)) {
    auto f = logical_operator_counts(doc);
    v.insert(v.end(), f.op.begin(), f.op.end());
    v.push_back(f.if_then);
    v.push_back(f.if_else);
    v.push_back(f.total);
  }
  if (on(en, FeatureGroup::Temporal)) {
    auto f = temporal_features(doc);
    v.insert(v.end(), {f.past, f.present, f.future, f.progressive, f.perfect, f.tense_switches});
  }
  if (on(en, FeatureGroup::LengthStats)) {
    auto f = length_stats(doc);
    v.insert(v.end(), {f.sentence_count, f.word_count, f.mean_sentence_length, f.mean_word_length,
                       f.max_sentence_length});
  }
  if (on(en, FeatureGroup::WordFreqDifficulty)) {
    auto f = difficulty_diversity_features(doc, *resources_.difficulty);
    v.insert(v.end(), f.histogram.begin(), f.histogram.end());
    v.push_back(f.unique_words);
    v.push_back(f.ttr);
  }
  if (v.size() != state_.schema.size())
    throw SchemaError("extracted " + std::to_string(v.size()) + " values for a schema of " +
                      std::to_string(state_.schema.size()));
  return v;
}

std::vector<double> FeatureExtractor::normalize(std::vector<double> raw) const {
  const FeatureSchema& s = state_.schema;
  if (raw.size() != s.size())
    throw SchemaError("feature vector of length " + std::to_string(raw.size()) + " does not match schema length " +
                      std::to_string(s.size()));
  for (std::size_t j = 0; j < raw.size(); ++j) {
    if (!std::isfinite(raw[j])) throw SchemaError("non-finite value for feature " + s.names[j]);
    if (!s.normalized[j]) continue;
    raw[j] = s.stddev[j] > 0.0 ? (raw[j] - s.mean[j]) / s.stddev[j] : 0.0;
  }
  return raw;
}

}  // namespace autosas
