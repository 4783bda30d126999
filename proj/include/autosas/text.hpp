#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autosas {

struct Token {
  std::string surface;  // possibly spell-corrected
  std::string raw;      // as written
  std::string lemma;    // lowercase; empty until lemmatized
  std::string pos;      // Penn Treebank tag; empty until tagged
  std::size_t sentence_index = 0;
  std::size_t position = 0;  // index within the document
  std::size_t offset = 0;    // byte offset of raw in the source text
  bool space_before = false;

  // True when the token contains at least one letter or digit.
  bool is_word() const;
};

struct TaggedDoc {
  std::vector<Token> tokens;
  // Half-open [first, last) token ranges, contiguous and covering tokens.
  std::vector<std::pair<std::size_t, std::size_t>> sentence_bounds;

  std::size_t sentence_count() const { return sentence_bounds.size(); }
  bool empty() const { return tokens.empty(); }
};

// Splits text into word and punctuation tokens and groups them into
// sentences. Words keep internal apostrophes, hyphens, digit separators and
// single-letter abbreviation dots ("e.g"). A sentence ends at . ! ? when the
// next token follows whitespace and starts with a capital letter, unless the
// period closes a guarded abbreviation such as "Mr".
TaggedDoc tokenize_and_split(std::string_view text);

// Rebuilds sentence_index/position fields after tokens were edited in place.
void renumber(TaggedDoc& doc);

// Joins surfaces with single spaces.
std::string join_surfaces(const TaggedDoc& doc);

std::string to_lower_ascii(std::string_view s);
bool is_abbreviation(std::string_view word);

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

}  // namespace autosas
