#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "autosas/config.hpp"
#include "autosas/error.hpp"
#include "autosas/lemmatizer.hpp"
#include "autosas/rng.hpp"
#include "autosas/spelling.hpp"
#include "autosas/tagger.hpp"
#include "autosas/text.hpp"
#include "helpers.hpp"

using namespace autosas;

namespace {

std::vector<std::string> surfaces(const TaggedDoc& d) {
  std::vector<std::string> out;
  for (const auto& t : d.tokens) out.push_back(t.surface);
  return out;
}

// Plain OSA dynamic programme, kept separate from the library version.
int oracle_distance(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
    }
  return d[n][m];
}

std::optional<std::string> oracle_suggest(const Lexicon& lex, const std::string& w) {
  if (lex.contains(w)) return std::nullopt;
  std::optional<std::string> best;
  int best_d = 3;
  std::uint64_t best_f = 0;
  for (const auto& [cand, f] : lex.entries()) {
    const int d = oracle_distance(w, cand);
    if (d > 2) continue;
    const bool better = d < best_d || (d == best_d && (f > best_f || (f == best_f && cand < *best)));
    if (better) {
      best = cand;
      best_d = d;
      best_f = f;
    }
  }
  return best;
}

const Lexicon& frequency_lexicon() {
  static const Lexicon lex = Lexicon::load(data_dir() / "word-frequencies.txt");
  return lex;
}

}  // namespace

TEST_SUITE("textproc") {

TEST_CASE("tokenize: two sentences") {
  const auto d = tokenize_and_split("Paul ran. He won!");
  CHECK(d.tokens.size() == 6);
  CHECK(d.sentence_count() == 2);
  CHECK(surfaces(d) == std::vector<std::string>{"Paul", "ran", ".", "He", "won", "!"});
}

TEST_CASE("tokenize: empty text") {
  const auto d = tokenize_and_split("");
  CHECK(d.tokens.empty());
  CHECK(d.sentence_count() == 0);
}

TEST_CASE("tokenize: abbreviation guard keeps one sentence") {
  REQUIRE(is_abbreviation("Mr"));
  const auto d = tokenize_and_split("Mr. Leonard ran.");
  CHECK(d.sentence_count() == 1);
  CHECK(!is_abbreviation("Leonard"));
}

TEST_CASE("tokenize: sentence bounds cover every token") {
  const auto d = tokenize_and_split("It works, doesn't it? Yes. The e.g. case is odd... OK!");
  std::size_t next = 0;
  for (const auto& [a, b] : d.sentence_bounds) {
    CHECK(a == next);
    CHECK(b > a);
    next = b;
  }
  CHECK(next == d.tokens.size());
  for (std::size_t i = 0; i < d.tokens.size(); ++i) CHECK(d.tokens[i].position == i);
}

TEST_CASE("tokenize: lowercase after a period does not split") {
  CHECK(tokenize_and_split("The value is 3.5 and the end. then more").sentence_count() == 1);
}

TEST_CASE("utf8 length counts code points") {
  CHECK(utf8_length("na\xc3\xafve") == 5);
  CHECK(utf8_length("") == 0);
}

TEST_CASE("osa distance agrees with the oracle") {
  const std::vector<std::string> words = {"", "a", "ab", "ba", "recieve", "receive", "kitten", "sitting", "abc", "ca"};
  for (const auto& a : words)
    for (const auto& b : words) CHECK(osa_distance(a, b) == oracle_distance(a, b));
}

TEST_CASE("spelling: recieve becomes receive") {
  const SpellCorrector sc(frequency_lexicon());
  const auto oracle = oracle_suggest(frequency_lexicon(), "recieve");
  REQUIRE(oracle);
  CHECK(*oracle == "receive");
  CHECK(sc.suggest("recieve") == oracle);
  const auto d = correct_spelling(tokenize_and_split("I recieve it."), sc);
  CHECK(d.tokens[1].surface == "receive");
  CHECK(d.tokens[1].raw == "recieve");
}

TEST_CASE("spelling: random misspellings match exhaustive search") {
  const Lexicon& lex = frequency_lexicon();
  const SpellCorrector sc(lex);
  std::vector<std::string> words;
  for (const auto& [w, f] : lex.entries())
    if (w.size() >= 4 && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
      words.push_back(w);
  std::sort(words.begin(), words.end());
  Rng rng(5);
  for (int i = 0; i < 60; ++i) {
    std::string w = words[rng.uniform_index(words.size())];
    const std::size_t edits = 1 + rng.uniform_index(2);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t p = rng.uniform_index(w.size());
      switch (rng.uniform_index(3)) {
        case 0: w[p] = static_cast<char>('a' + rng.uniform_index(26)); break;
        case 1: w.erase(p, 1); break;
        default: w.insert(p, 1, static_cast<char>('a' + rng.uniform_index(26)));
      }
    }
    CAPTURE(w);
    CHECK(sc.suggest(w) == oracle_suggest(lex, w));
  }
}

TEST_CASE("spelling: compounds, names and known words are untouched") {
  const SpellCorrector sc(frequency_lexicon());
  const auto d = correct_spelling(tokenize_and_split("NaCl dissolves in water near Paul."), sc);
  CHECK(d.tokens[0].surface == "NaCl");
  CHECK(d.tokens[2].surface == "in");
  CHECK(d.tokens[3].surface == "water");
  CHECK(d.tokens[5].surface == "Paul");
}

TEST_CASE("tagger: held-out accuracy of at least 90%") {
  const auto train = load_tagged_corpus(data_dir() / "tagger" / "train.txt");
  const auto heldout = load_tagged_corpus(data_dir() / "tagger" / "heldout.txt");
  auto lex = std::make_shared<TagLexicon>(TagLexicon::load(data_dir() / "tag-lexicon.txt"));
  const auto tagger = PerceptronTagger::train(train, lex);
  const double acc = tagging_accuracy(tagger, heldout);
  MESSAGE("held-out accuracy " << acc);
  CHECK(acc >= 0.90);
}

TEST_CASE("tagger: 'the' is DT in any context") {
  for (const char* text : {"The cat sat.", "I saw the dog.", "Of the three, the best won.", "They ran to the end"}) {
    const auto d = testing::process(text);
    for (const auto& t : d.tokens)
      if (to_lower_ascii(t.surface) == "the") CHECK(t.pos == "DT");
  }
}

TEST_CASE("tagger: numbers are CD and output is deterministic") {
  const auto a = testing::process("In 1984 there were 3.5 million and 12,000 more.");
  for (const auto& t : a.tokens)
    if (t.surface == "1984" || t.surface == "3.5" || t.surface == "12,000") CHECK(t.pos == "CD");
  const auto b = testing::process("In 1984 there were 3.5 million and 12,000 more.");
  for (std::size_t i = 0; i < a.tokens.size(); ++i) CHECK(a.tokens[i].pos == b.tokens[i].pos);
  for (const auto& t : a.tokens) CHECK(is_penn_tag(t.pos));
}

TEST_CASE("tagger: saved model tags identically") {
  const auto train = load_tagged_corpus(data_dir() / "tagger" / "train.txt");
  const auto tagger = PerceptronTagger::train(train);
  const auto path = std::filesystem::temp_directory_path() / "autosas-tagger-roundtrip.json";
  tagger.save(path);
  const auto loaded = PerceptronTagger::load(path);
  const std::vector<std::string> words = {"The", "students", "measured", "the", "mass", "twice", "."};
  CHECK(tagger.tag_sentence(words) == loaded.tag_sentence(words));
  std::filesystem::remove(path);
}

TEST_CASE("tagger: corpus with an unknown tag is rejected") {
  CHECK_THROWS_AS(parse_tagged_corpus("the_DT cat_XYZ"), FormatError);
}

TEST_CASE("lemmatizer: rule table and exceptions") {
  const Lemmatizer lem(LemmaRules::english(), testing::default_resources_ptr()->spelling);
  CHECK(lem.lemma("running", "VBG") == "run");
  CHECK(lem.lemma("pandas", "NNS") == "panda");
  CHECK(lem.lemma("went", "VBD") == "go");
  CHECK(lem.lemma("studies", "NNS") == "study");
  CHECK(lem.lemma("making", "VBG") == "make");
  CHECK(lem.lemma("is", "VBZ") == "be");
  CHECK(lem.lemma("quickly", "RB") == "quickly");
}

}  // TEST_SUITE
