#include "autosas/resources.hpp"

#include <cstdio>
#include <fstream>

#include "autosas/error.hpp"

namespace autosas {

TextPipeline LoadedResources::plain_pipeline() const { return TextPipeline(tagger, lemmatizer); }

TextPipeline LoadedResources::prompt_pipeline(bool spell_check, std::span<const std::string> domain_words) const {
  if (!spell_check) return plain_pipeline();
  auto speller = std::make_shared<const SpellCorrector>(domain_lexicon(*spelling, domain_words));
  return TextPipeline(tagger, lemmatizer, std::move(speller));
}

std::shared_ptr<const LoadedResources> load_resources(const ResourcePaths& paths) {
  auto res = std::make_shared<LoadedResources>();
  res->paths = paths;
  auto spelling = std::make_shared<Lexicon>(Lexicon::load(paths.spelling_lexicon));
  if (spelling->empty()) throw ConfigError("spelling lexicon is empty: " + paths.spelling_lexicon.string());
  res->spelling = spelling;

  auto tag_lexicon = std::make_shared<const TagLexicon>(TagLexicon::load(paths.tag_lexicon));
  if (paths.tagger_model) {
    res->tagger = std::make_shared<const PerceptronTagger>(PerceptronTagger::load(*paths.tagger_model, tag_lexicon));
  } else if (paths.tagger_corpus) {
    const auto corpus = load_tagged_corpus(*paths.tagger_corpus);
    res->tagger = std::make_shared<const PerceptronTagger>(PerceptronTagger::train(corpus, tag_lexicon));
  } else {
    res->tagger = std::make_shared<const LexiconTagger>(tag_lexicon);
  }

  LemmaRules rules = LemmaRules::english();
  if (paths.lemma_rules) rules.load_file(*paths.lemma_rules);
  res->lemmatizer = std::make_shared<const Lemmatizer>(std::move(rules), spelling);

  ExtractorResources& ex = res->extractor;
  if (paths.embeddings) {
    auto table = std::make_shared<EmbeddingTable>(load_vectors(*paths.embeddings, paths.embeddings_format));
    if (paths.idf) load_idf_sidecar(*table, *paths.idf);
    ex.embeddings = table;
  }
  const Lexicon freq = paths.difficulty_lexicon == paths.spelling_lexicon ? *spelling
                                                                          : Lexicon::load(paths.difficulty_lexicon);
  ex.difficulty = std::make_shared<const DifficultyLexicon>(DifficultyLexicon::from_frequencies(freq));
  ex.stopwords = std::make_shared<const WordSet>(paths.stopwords ? load_stopwords(*paths.stopwords) : default_stopwords());
  if (paths.synonyms) ex.synonyms = std::make_shared<const SynonymLexicon>(SynonymLexicon::load(*paths.synonyms));
  return res;
}

std::string file_digest(const std::filesystem::path& path, bool size_only) {
  std::error_code ec;
  if (size_only) {
    const auto size = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat " + path.string());
    return "size:" + std::to_string(size);
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::map<std::string, std::string> resource_digests(const ResourcePaths& p) {
  std::map<std::string, std::string> d;
  if (p.embeddings) d["embeddings"] = file_digest(*p.embeddings, true);
  if (p.idf) d["idf"] = file_digest(*p.idf);
  d["spelling_lexicon"] = file_digest(p.spelling_lexicon);
  d["tag_lexicon"] = file_digest(p.tag_lexicon);
  if (p.tagger_model) d["tagger_model"] = file_digest(*p.tagger_model);
  if (p.tagger_corpus) d["tagger_corpus"] = file_digest(*p.tagger_corpus);
  d["difficulty_lexicon"] = file_digest(p.difficulty_lexicon);
  if (p.stopwords) d["stopwords"] = file_digest(*p.stopwords);
  if (p.synonyms) d["synonyms"] = file_digest(*p.synonyms);
  if (p.lemma_rules) d["lemma_rules"] = file_digest(*p.lemma_rules);
  return d;
}

}  // namespace autosas
