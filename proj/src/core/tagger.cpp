#include "autosas/tagger.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "autosas/error.hpp"
#include "autosas/rng.hpp"

namespace autosas {

namespace {

constexpr std::array<std::string_view, 45> kPennTags = {
    "CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",  "MD",  "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS", "RP",  "SYM",
    "TO",  "UH",  "VB",   "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB",
    "$",   "#",   "``",   "''",  "(",   ")",   ",",   ".",   ":"};

constexpr std::string_view kStart1 = "-START-";
constexpr std::string_view kStart2 = "-START2-";
constexpr std::string_view kEnd1 = "-END-";
constexpr std::string_view kEnd2 = "-END2-";

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
}

bool is_capitalized(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view suffix3(std::string_view s) { return s.size() > 3 ? s.substr(s.size() - 3) : s; }

std::string normalize(std::string_view word) {
  if (word.find('-') != std::string_view::npos && word.front() != '-') return "!HYPHEN";
  const bool all_digits = !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
  if (all_digits && word.size() == 4) return "!YEAR";
  if (!word.empty() && std::isdigit(static_cast<unsigned char>(word.front()))) return "!DIGITS";
  return to_lower_ascii(word);
}

// Collapsed character classes, e.g. "Leonard" -> "Xx", "H2O" -> "XdX".
std::string word_shape(std::string_view word) {
  std::string shape;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    char k = u >= 0x80 ? 'u' : std::isupper(u) ? 'X' : std::islower(u) ? 'x' : std::isdigit(u) ? 'd' : c;
    if (shape.empty() || shape.back() != k) shape.push_back(k);
  }
  return shape;
}

std::string strip_possessive(std::string_view word) {
  if (ends_with(word, "'s") || ends_with(word, "\xE2\x80\x99s"))
    return std::string(word.substr(0, word.size() - (word[word.size() - 2] == '\'' ? 2 : 4)));
  return std::string(word);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::span<const std::string_view> penn_tagset() { return kPennTags; }

bool is_penn_tag(std::string_view tag) {
  return std::find(kPennTags.begin(), kPennTags.end(), tag) != kPennTags.end();
}

std::optional<std::string> shape_tag(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool any_digit = false, numeric = true;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      any_digit = true;
    } else if (c != '.' && c != ',' && c != ':' && c != '/' && c != '-') {
      numeric = false;
      break;
    }
  }
  if (numeric && any_digit) return "CD";
  if (has_alnum(s)) return std::nullopt;
  if (std::all_of(s.begin(), s.end(), [](char c) { return c == '.'; }))
    return s.size() == 1 ? "." : ":";
  if (std::all_of(s.begin(), s.end(), [](char c) { return c == '.' || c == '!' || c == '?'; }))
    return ".";
  if (s == ",") return ",";
  if (s == ":" || s == ";" || s == "-" || s == "--" || s == "\xE2\x80\x94" ||
      s == "\xE2\x80\x93" || s == "\xE2\x80\xA6")
    return ":";
  if (s == "(" || s == "[" || s == "{") return "(";
  if (s == ")" || s == "]" || s == "}") return ")";
  if (s == "\xE2\x80\x9C" || s == "\xE2\x80\x98" || s == "``") return "``";
  if (s == "\"" || s == "'" || s == "''" || s == "\xE2\x80\x9D" || s == "\xE2\x80\x99")
    return "''";
  if (s == "$") return "$";
  if (s == "#") return "#";
  if (s == "%") return "NN";
  if (s == "&") return "CC";
  return "SYM";
}

TagLexicon TagLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tag lexicon: " + path.string());
  TagLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    std::istringstream fields(line);
    std::string word, tag;
    if (!(fields >> word >> tag)) continue;
    if (tag == "-LRB-") tag = "(";
    if (tag == "-RRB-") tag = ")";
    if (!is_penn_tag(tag)) continue;
    lex.add(std::move(word), std::move(tag));
  }
  return lex;
}

void TagLexicon::add(std::string word, std::string tag) { tags_.emplace(std::move(word), std::move(tag)); }

std::optional<std::string_view> TagLexicon::lookup(std::string_view word) const {
  auto it = tags_.find(std::string(word));
  if (it != tags_.end()) return it->second;
  it = tags_.find(to_lower_ascii(word));
  if (it != tags_.end()) return it->second;
  return std::nullopt;
}

LexiconTagger::LexiconTagger(std::shared_ptr<const TagLexicon> lexicon)
    : lexicon_(std::move(lexicon)) {}

std::string LexiconTagger::tag_word(std::string_view word, bool sentence_initial) const {
  if (auto t = shape_tag(word)) return *t;
  const bool capital = is_capitalized(word);
  if (lexicon_) {
    auto exact = lexicon_->lookup(word);
    // Mid-sentence capitals not listed verbatim are names.
    if (exact && (!capital || sentence_initial || *exact == "NNP" || *exact == "NNPS"))
      return std::string(*exact);
    if (capital && !sentence_initial && !exact) return "NNP";
    if (exact) return std::string(*exact);
    const std::string base = strip_possessive(word);
    if (base != word) {
      if (auto t = lexicon_->lookup(base)) return std::string(*t);
    }
  }
  if (capital && !sentence_initial) return "NNP";
  const std::string lower = to_lower_ascii(word);
  if (ends_with(lower, "ing")) return "VBG";
  if (ends_with(lower, "ed")) return "VBD";
  if (ends_with(lower, "ly")) return "RB";
  if (lower.find('-') != std::string::npos) return "JJ";
  for (std::string_view adj : {"able", "ible", "ous", "ful", "ive", "ical", "less"})
    if (ends_with(lower, adj)) return "JJ";
  if (ends_with(lower, "s") && !ends_with(lower, "ss") && !ends_with(lower, "us")) return "NNS";
  return "NN";
}

std::vector<std::string> LexiconTagger::tag_sentence(std::span<const std::string> words) const {
  std::vector<std::string> tags;
  tags.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) tags.push_back(tag_word(words[i], i == 0));
  return tags;
}

std::vector<TaggedSentence> parse_tagged_corpus(std::string_view text, std::string_view source) {
  std::vector<TaggedSentence> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream items(line);
    std::string item;
    TaggedSentence sentence;
    while (items >> item) {
      const auto cut = item.rfind('_');
      if (cut == std::string::npos || cut == 0 || cut + 1 == item.size())
        throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                          ": expected word_TAG, got '" + item + "'");
      std::string tag = item.substr(cut + 1);
      if (!is_penn_tag(tag))
        throw FormatError(std::string(source) + ":" + std::to_string(line_no) +
                          ": unknown tag '" + tag + "'");
      sentence.words.push_back(item.substr(0, cut));
      sentence.tags.push_back(std::move(tag));
    }
    if (!sentence.words.empty()) out.push_back(std::move(sentence));
  }
  return out;
}

std::vector<TaggedSentence> load_tagged_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tagged corpus: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_tagged_corpus(buf.str(), path.string());
}

std::vector<std::string> PerceptronTagger::features(std::span<const std::string> words,
                                                    std::size_t i,
                                                    std::string_view prev,
                                                    std::string_view prev2) const {
  auto ctx = [&](std::ptrdiff_t k) -> std::string {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
    if (j == -1) return std::string(kStart1);
    if (j <= -2) return std::string(kStart2);
    if (j == static_cast<std::ptrdiff_t>(words.size())) return std::string(kEnd1);
    if (j > static_cast<std::ptrdiff_t>(words.size())) return std::string(kEnd2);
    return normalize(words[static_cast<std::size_t>(j)]);
  };
  auto lex = [&](std::ptrdiff_t k) -> std::string {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
    if (!lexicon_ || j < 0 || j >= static_cast<std::ptrdiff_t>(words.size())) return "-";
    const std::string& w = words[static_cast<std::size_t>(j)];
    if (auto t = lexicon_->lookup(w)) return std::string(*t);
    if (auto t = lexicon_->lookup(strip_possessive(w))) return std::string(*t);
    return "?";
  };
  const std::string word = ctx(0);
  const std::string& raw = words[i];
  std::vector<std::string> f;
  f.reserve(20);
  f.push_back("bias");
  f.push_back("i suffix=" + std::string(suffix3(word)));
  f.push_back("i pref1=" + word.substr(0, 1));
  f.push_back("i-1 tag=" + std::string(prev));
  f.push_back("i-2 tag=" + std::string(prev2));
  f.push_back("i tag+i-2 tag=" + std::string(prev) + " " + std::string(prev2));
  f.push_back("i word=" + word);
  f.push_back("i-1 tag+i word=" + std::string(prev) + " " + word);
  const std::string w1 = ctx(-1), n1 = ctx(1);
  f.push_back("i-1 word=" + w1);
  f.push_back("i-1 suffix=" + std::string(suffix3(w1)));
  f.push_back("i-2 word=" + ctx(-2));
  f.push_back("i+1 word=" + n1);
  f.push_back("i+1 suffix=" + std::string(suffix3(n1)));
  f.push_back("i+2 word=" + ctx(2));
  f.push_back("i shape=" + word_shape(raw) + (i == 0 ? "^" : ""));
  const std::string l0 = lex(0);
  f.push_back("i lex=" + l0);
  f.push_back("i-1 lex=" + lex(-1));
  f.push_back("i+1 lex=" + lex(1));
  f.push_back("i lex+i-1 tag=" + l0 + " " + std::string(prev));
  return f;
}

std::size_t PerceptronTagger::predict(const std::vector<std::string>& feats) const {
  std::vector<double> scores(tags_.size(), 0.0);
  for (const std::string& f : feats) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += it->second[c];
  }
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

class PerceptronTrainer {
 public:
  explicit PerceptronTrainer(PerceptronTagger& model) : model_(model) {}

  void update(std::size_t truth, std::size_t guess, const std::vector<std::string>& feats) {
    ++instances_;
    if (truth == guess) return;
    const std::size_t n = model_.tags_.size();
    for (const std::string& f : feats) {
      auto& w = model_.weights_[f];
      if (w.empty()) {
        w.assign(n, 0.0);
        totals_[f].assign(n, 0.0);
        stamps_[f].assign(n, 0);
      }
      bump(f, w, truth, 1.0);
      bump(f, w, guess, -1.0);
    }
  }

  void average() {
    for (auto& [f, w] : model_.weights_) {
      auto& total = totals_[f];
      auto& stamp = stamps_[f];
      for (std::size_t c = 0; c < w.size(); ++c) {
        total[c] += static_cast<double>(instances_ - stamp[c]) * w[c];
        w[c] = instances_ ? total[c] / static_cast<double>(instances_) : 0.0;
      }
    }
    for (auto it = model_.weights_.begin(); it != model_.weights_.end();) {
      if (std::all_of(it->second.begin(), it->second.end(), [](double v) { return v == 0.0; }))
        it = model_.weights_.erase(it);
      else
        ++it;
    }
  }

 private:
  void bump(const std::string& f, std::vector<double>& w, std::size_t c, double delta) {
    totals_[f][c] += static_cast<double>(instances_ - stamps_[f][c]) * w[c];
    stamps_[f][c] = instances_;
    w[c] += delta;
  }

  PerceptronTagger& model_;
  std::uint64_t instances_ = 0;
  std::unordered_map<std::string, std::vector<double>> totals_;
  std::unordered_map<std::string, std::vector<std::uint64_t>> stamps_;
};

PerceptronTagger PerceptronTagger::train(std::span<const TaggedSentence> corpus,
                                         std::shared_ptr<const TagLexicon> lexicon,
                                         const PerceptronOptions& options) {
  if (corpus.empty()) throw InvalidArgument("tagger training corpus is empty");
  PerceptronTagger model;
  model.lexicon_ = std::move(lexicon);
  model.tags_.assign(kPennTags.begin(), kPennTags.end());
  std::unordered_map<std::string_view, std::size_t> tag_index;
  for (std::size_t i = 0; i < model.tags_.size(); ++i) tag_index[model.tags_[i]] = i;

  // Tag dictionary for frequent unambiguous words.
  std::map<std::string, std::map<std::string, int>> counts;
  for (const auto& s : corpus)
    for (std::size_t i = 0; i < s.words.size(); ++i) ++counts[s.words[i]][s.tags[i]];
  for (const auto& [word, tag_counts] : counts) {
    int total = 0, best = 0;
    std::string best_tag;
    for (const auto& [tag, c] : tag_counts) {
      total += c;
      if (c > best) {
        best = c;
        best_tag = tag;
      }
    }
    if (total >= options.tagdict_min_count &&
        static_cast<double>(best) / total >= options.tagdict_min_purity)
      model.tagdict_[word] = best_tag;
  }

  PerceptronTrainer trainer(model);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(options.seed);
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (std::size_t idx : order) {
      const auto& s = corpus[idx];
      std::string prev(kStart1), prev2(kStart2);
      for (std::size_t i = 0; i < s.words.size(); ++i) {
        std::string guess;
        if (auto fixed = shape_tag(s.words[i])) {
          guess = *fixed;
        } else if (auto it = model.tagdict_.find(s.words[i]); it != model.tagdict_.end()) {
          guess = it->second;
        } else {
          auto feats = model.features(s.words, i, prev, prev2);
          const std::size_t g = model.predict(feats);
          trainer.update(tag_index.at(s.tags[i]), g, feats);
          guess = model.tags_[g];
        }
        prev2 = std::move(prev);
        prev = std::move(guess);
      }
    }
    rng.shuffle(std::span<std::size_t>(order));
  }
  trainer.average();
  return model;
}

std::vector<std::string> PerceptronTagger::tag_sentence(std::span<const std::string> words) const {
  if (tags_.empty()) throw InvalidArgument("perceptron tagger has no model");
  std::vector<std::string> out;
  out.reserve(words.size());
  std::string prev(kStart1), prev2(kStart2);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string tag;
    if (auto fixed = shape_tag(words[i])) {
      tag = *fixed;
    } else if (auto it = tagdict_.find(words[i]); it != tagdict_.end()) {
      tag = it->second;
    } else {
      tag = tags_[predict(features(words, i, prev, prev2))];
    }
    out.push_back(tag);
    prev2 = std::move(prev);
    prev = std::move(tag);
  }
  return out;
}

void PerceptronTagger::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write tagger model: " + path.string());
  out << "autosas-tagger\t" << kFormatVersion << '\n';
  out << "tags";
  for (const auto& t : tags_) out << '\t' << t;
  out << '\n';
  std::map<std::string, std::string> dict(tagdict_.begin(), tagdict_.end());
  for (const auto& [w, t] : dict) out << "tagdict\t" << w << '\t' << t << '\n';
  std::map<std::string, const std::vector<double>*> sorted;
  for (const auto& [f, w] : weights_) sorted.emplace(f, &w);
  for (const auto& [f, w] : sorted)
    for (std::size_t c = 0; c < w->size(); ++c)
      if ((*w)[c] != 0.0) out << "weight\t" << f << '\t' << tags_[c] << '\t' << format_double((*w)[c]) << '\n';
  if (!out) throw IoError("failed writing tagger model: " + path.string());
}

PerceptronTagger PerceptronTagger::load(const std::filesystem::path& path,
                                        std::shared_ptr<const TagLexicon> lexicon) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open tagger model: " + path.string());
  PerceptronTagger model;
  model.lexicon_ = std::move(lexicon);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + msg);
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == '\t') {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  if (!std::getline(in, line)) fail("empty tagger model");
  ++line_no;
  auto header = split(line);
  if (header.size() != 2 || header[0] != "autosas-tagger") fail("not a tagger model");
  if (header[1] != std::to_string(kFormatVersion))
    throw VersionError("tagger model version " + header[1] + " is not supported (expected " +
                       std::to_string(kFormatVersion) + ")");
  std::unordered_map<std::string, std::size_t> tag_index;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto parts = split(line);
    if (parts[0] == "tags") {
      model.tags_.assign(parts.begin() + 1, parts.end());
      for (std::size_t i = 0; i < model.tags_.size(); ++i) {
        if (!is_penn_tag(model.tags_[i])) fail("unknown tag '" + model.tags_[i] + "'");
        tag_index[model.tags_[i]] = i;
      }
    } else if (parts[0] == "tagdict" && parts.size() == 3) {
      model.tagdict_[parts[1]] = parts[2];
    } else if (parts[0] == "weight" && parts.size() == 4) {
      auto it = tag_index.find(parts[2]);
      if (it == tag_index.end()) fail("weight for undeclared tag '" + parts[2] + "'");
      double value = 0.0;
      try {
        std::size_t used = 0;
        value = std::stod(parts[3], &used);
        if (used != parts[3].size()) fail("bad weight");
      } catch (const std::invalid_argument&) {
        fail("bad weight");
      } catch (const std::out_of_range&) {
        fail("weight out of range");
      }
      auto& w = model.weights_[parts[1]];
      if (w.empty()) w.assign(model.tags_.size(), 0.0);
      w[it->second] = value;
    } else {
      fail("unrecognised record '" + parts[0] + "'");
    }
  }
  if (model.tags_.empty()) fail("tagger model declares no tags");
  return model;
}

TaggedDoc pos_tag(TaggedDoc doc, const PosTagger& tagger) {
  for (const auto& [first, last] : doc.sentence_bounds) {
    std::vector<std::string> words;
    words.reserve(last - first);
    for (std::size_t k = first; k < last; ++k) words.push_back(doc.tokens[k].surface);
    auto tags = tagger.tag_sentence(words);
    for (std::size_t k = first; k < last; ++k) {
      const std::string& surface = doc.tokens[k].surface;
      auto fixed = shape_tag(surface);
      doc.tokens[k].pos = fixed ? *fixed : tags[k - first];
    }
  }
  return doc;
}

double tagging_accuracy(const PosTagger& tagger, std::span<const TaggedSentence> gold) {
  std::size_t correct = 0, total = 0;
  for (const auto& s : gold) {
    auto tags = tagger.tag_sentence(s.words);
    for (std::size_t i = 0; i < tags.size(); ++i) {
      correct += tags[i] == s.tags[i];
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

}  // namespace autosas
