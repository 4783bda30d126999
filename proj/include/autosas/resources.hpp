#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "autosas/config.hpp"
#include "autosas/extractor.hpp"
#include "autosas/pipeline.hpp"

namespace autosas {

// Lexicons, tagger and vectors shared by every prompt of a run.
struct LoadedResources {
  ResourcePaths paths;
  std::shared_ptr<const Lexicon> spelling;
  std::shared_ptr<const PosTagger> tagger;
  std::shared_ptr<const Lemmatizer> lemmatizer;
  ExtractorResources extractor;

  // Tagging and lemmatization without spell correction.
  TextPipeline plain_pipeline() const;
  // Adds a spell corrector over the base lexicon plus domain_words.
  TextPipeline prompt_pipeline(bool spell_check, std::span<const std::string> domain_words) const;
};

std::shared_ptr<const LoadedResources> load_resources(const ResourcePaths& paths);

// Hex FNV-1a digest of a file's bytes; for word vectors only the size is
// recorded, as "size:<bytes>".
std::string file_digest(const std::filesystem::path& path, bool size_only = false);

// Digests of every configured resource, keyed by role.
std::map<std::string, std::string> resource_digests(const ResourcePaths& paths);

}  // namespace autosas
