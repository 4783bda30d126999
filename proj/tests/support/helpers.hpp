#pragma once

#include <array>
#include <string>
#include <vector>

#include "autosas/resources.hpp"
#include "autosas/text.hpp"

namespace autosas::testing {

// {surface, pos, lemma}; an empty lemma means the lowercased surface.
using HandToken = std::array<std::string, 3>;

// One inner vector per sentence.
TaggedDoc hand_doc(const std::vector<std::vector<HandToken>>& sentences);

// Bundled lexicons and tagger, loaded once per process.
const LoadedResources& default_resources();
std::shared_ptr<const LoadedResources> default_resources_ptr();

// Bundled pipeline without spell correction.
TaggedDoc process(std::string_view text);

}  // namespace autosas::testing
