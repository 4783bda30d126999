#include "autosas/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace autosas {

namespace {

struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if ((b0 & 0xE0) == 0xC0) {
    int c1 = cont(1);
    if (c1 >= 0) return {static_cast<char32_t>(((b0 & 0x1F) << 6) | c1), 2};
  } else if ((b0 & 0xF0) == 0xE0) {
    int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0)
      return {static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2), 3};
  } else if ((b0 & 0xF8) == 0xF0) {
    int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0)
      return {static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3), 4};
  }
  // Invalid sequence: treat the byte as an opaque letter.
  return {b0, 1};
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' ||
         c == 0x00A0 || c == 0x2009 || c == 0x200B || c == 0x3000;
}

bool is_unicode_punct(char32_t c) {
  switch (c) {
    case 0x2018: case 0x2019: case 0x201C: case 0x201D:
    case 0x2013: case 0x2014: case 0x2026: case 0x00AB: case 0x00BB:
      return true;
    default:
      return false;
  }
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return std::isalnum(static_cast<int>(c)) != 0;
  return !is_space(c) && !is_unicode_punct(c);
}

bool is_ascii_digit(char32_t c) { return c >= '0' && c <= '9'; }
bool is_letter(char32_t c) {
  if (c < 0x80) return std::isalpha(static_cast<int>(c)) != 0;
  return is_word_char(c);
}

constexpr std::array<std::string_view, 24> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g", "i.e",
    "no", "fig", "approx", "dept", "gen", "gov", "sen", "rep", "capt", "col", "lt", "mt"};

bool is_terminal(std::string_view surface) {
  return !surface.empty() && std::all_of(surface.begin(), surface.end(), [](char c) {
    return c == '.' || c == '!' || c == '?';
  });
}

bool is_closing_mark(std::string_view surface) {
  return surface == "'" || surface == "\"" || surface == ")" || surface == "]" ||
         surface == "\xE2\x80\x99" || surface == "\xE2\x80\x9D";
}

bool starts_upper(std::string_view surface) {
  return !surface.empty() && std::isupper(static_cast<unsigned char>(surface[0]));
}

}  // namespace

bool Token::is_word() const {
  return std::any_of(surface.begin(), surface.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_abbreviation(std::string_view word) {
  const std::string lower = to_lower_ascii(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); i += decode_at(s, i).length) ++n;
  return n;
}

TaggedDoc tokenize_and_split(std::string_view text) {
  TaggedDoc doc;
  std::size_t i = 0;
  bool pending_space = false;
  while (i < text.size()) {
    const CodePoint cp = decode_at(text, i);
    if (is_space(cp.value)) {
      pending_space = true;
      i += cp.length;
      continue;
    }
    const std::size_t start = i;
    if (is_word_char(cp.value)) {
      std::size_t segment_letters = 0;  // letters since the last joined '.'
      char32_t prev = 0;
      while (i < text.size()) {
        const CodePoint cur = decode_at(text, i);
        if (is_word_char(cur.value)) {
          segment_letters = is_letter(cur.value) ? segment_letters + 1 : 0;
          prev = cur.value;
          i += cur.length;
          continue;
        }
        if (i + cur.length >= text.size()) break;
        const CodePoint next = decode_at(text, i + cur.length);
        bool join = false;
        if (cur.value == '\'' || cur.value == 0x2019) {
          join = is_letter(prev) && is_letter(next.value);
        } else if (cur.value == '-') {
          join = is_word_char(next.value);
        } else if (cur.value == '.' || cur.value == ',') {
          join = is_ascii_digit(prev) && is_ascii_digit(next.value);
          if (!join && cur.value == '.')
            join = segment_letters == 1 && is_letter(prev) && is_letter(next.value);
          if (join && !is_ascii_digit(prev)) segment_letters = 0;
        }
        if (!join) break;
        prev = cur.value;
        i += cur.length;
      }
    } else {
      // Runs of one punctuation character form a single token ("...", "--").
      i += cp.length;
      while (i < text.size()) {
        const CodePoint cur = decode_at(text, i);
        if (cur.value != cp.value) break;
        i += cur.length;
      }
    }
    Token tok;
    tok.raw = std::string(text.substr(start, i - start));
    tok.surface = tok.raw;
    tok.offset = start;
    tok.space_before = pending_space;
    doc.tokens.push_back(std::move(tok));
    pending_space = false;
  }

  // Sentence boundaries.
  std::size_t sentence_start = 0;
  const std::size_t n = doc.tokens.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!is_terminal(doc.tokens[k].surface)) continue;
    if (doc.tokens[k].surface == "." && k > 0 && !doc.tokens[k].space_before &&
        is_abbreviation(doc.tokens[k - 1].surface)) {
      continue;
    }
    std::size_t end = k + 1;
    while (end < n && !doc.tokens[end].space_before && is_closing_mark(doc.tokens[end].surface))
      ++end;
    if (end < n) {
      const Token& next = doc.tokens[end];
      bool opens_upper = starts_upper(next.surface);
      if (!opens_upper && end + 1 < n && !next.is_word() && !doc.tokens[end + 1].space_before)
        opens_upper = starts_upper(doc.tokens[end + 1].surface);
      if (!next.space_before || !opens_upper) continue;
    }
    doc.sentence_bounds.emplace_back(sentence_start, end);
    sentence_start = end;
    k = end - 1;
  }
  if (sentence_start < n) doc.sentence_bounds.emplace_back(sentence_start, n);
  renumber(doc);
  return doc;
}

void renumber(TaggedDoc& doc) {
  for (std::size_t s = 0; s < doc.sentence_bounds.size(); ++s) {
    for (std::size_t k = doc.sentence_bounds[s].first; k < doc.sentence_bounds[s].second; ++k) {
      doc.tokens[k].sentence_index = s;
      doc.tokens[k].position = k;
    }
  }
}

std::string join_surfaces(const TaggedDoc& doc) {
  std::string out;
  for (const Token& t : doc.tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace autosas
