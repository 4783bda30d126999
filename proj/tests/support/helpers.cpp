#include "helpers.hpp"

namespace autosas::testing {

TaggedDoc hand_doc(const std::vector<std::vector<HandToken>>& sentences) {
  TaggedDoc doc;
  for (const auto& s : sentences) {
    const std::size_t first = doc.tokens.size();
    for (const auto& [surface, pos, lemma] : s) {
      Token t;
      t.surface = surface;
      t.raw = surface;
      t.pos = pos;
      t.lemma = lemma.empty() ? to_lower_ascii(surface) : lemma;
      doc.tokens.push_back(t);
    }
    doc.sentence_bounds.emplace_back(first, doc.tokens.size());
  }
  renumber(doc);
  return doc;
}

std::shared_ptr<const LoadedResources> default_resources_ptr() {
  static const auto res = load_resources(ResourcePaths::defaults());
  return res;
}

const LoadedResources& default_resources() { return *default_resources_ptr(); }

TaggedDoc process(std::string_view text) {
  static const TextPipeline pipeline = default_resources().plain_pipeline();
  return pipeline.process(text);
}

}  // namespace autosas::testing
