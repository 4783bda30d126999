#include "autosas/spelling.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "autosas/error.hpp"

namespace autosas {

namespace {

std::uint64_t hash_key(std::string_view s) { return std::hash<std::string_view>{}(s); }

// All strings reachable from word by deleting up to two bytes.
void deletions(const std::string& word, std::unordered_set<std::string>& out) {
  out.insert(word);
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::string one = word.substr(0, i) + word.substr(i + 1);
    out.insert(one);
    for (std::size_t j = i; j < one.size(); ++j) out.insert(one.substr(0, j) + one.substr(j + 1));
  }
}

bool is_lower_alpha(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path.string());
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.rfind(";;;", 0) == 0 || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    std::uint64_t freq = 1;
    std::string freq_text;
    if (fields >> freq_text) {
      try {
        std::size_t used = 0;
        freq = std::stoull(freq_text, &used);
        if (used != freq_text.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": bad frequency '" + freq_text + "'");
      }
    }
    lex.add(word, freq);
  }
  return lex;
}

void Lexicon::add(std::string_view word, std::uint64_t frequency) {
  auto [it, inserted] = freq_.emplace(to_lower_ascii(word), frequency);
  if (!inserted) it->second += frequency;
}

bool Lexicon::contains(std::string_view word) const {
  return freq_.find(std::string(word)) != freq_.end();
}

std::uint64_t Lexicon::frequency(std::string_view word) const {
  auto it = freq_.find(std::string(word));
  return it == freq_.end() ? 0 : it->second;
}

int osa_distance(std::string_view a, std::string_view b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int cost = a[i - 1] == b[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1])
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
    }
  }
  return d[n][m];
}

SpellCorrector::SpellCorrector(Lexicon lexicon) : lexicon_(std::move(lexicon)) {
  words_.reserve(lexicon_.size());
  for (const auto& [word, freq] : lexicon_.entries()) words_.push_back(word);
  std::sort(words_.begin(), words_.end());
  std::unordered_set<std::string> keys;
  for (std::uint32_t id = 0; id < words_.size(); ++id) {
    keys.clear();
    deletions(words_[id], keys);
    for (const std::string& key : keys) deletes_.emplace_back(hash_key(key), id);
  }
  std::sort(deletes_.begin(), deletes_.end());
}

std::optional<std::string> SpellCorrector::suggest(std::string_view word) const {
  if (lexicon_.contains(word)) return std::nullopt;
  std::unordered_set<std::string> keys;
  deletions(std::string(word), keys);
  std::unordered_set<std::uint32_t> candidates;
  for (const std::string& key : keys) {
    const std::uint64_t h = hash_key(key);
    auto it = std::lower_bound(deletes_.begin(), deletes_.end(), std::pair<std::uint64_t, std::uint32_t>{h, 0});
    for (; it != deletes_.end() && it->first == h; ++it) candidates.insert(it->second);
  }
  const std::string* best = nullptr;
  int best_dist = kMaxDistance + 1;
  std::uint64_t best_freq = 0;
  for (std::uint32_t id : candidates) {
    const std::string& cand = words_[id];
    const int dist = osa_distance(word, cand);
    if (dist > kMaxDistance) continue;
    const std::uint64_t freq = lexicon_.frequency(cand);
    const bool better = dist < best_dist ||
                        (dist == best_dist && (freq > best_freq ||
                                               (freq == best_freq && best && cand < *best)));
    if (!best || better) {
      best = &cand;
      best_dist = dist;
      best_freq = freq;
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

TaggedDoc correct_spelling(TaggedDoc doc, const SpellCorrector& corrector) {
  for (Token& tok : doc.tokens) {
    if (tok.surface.size() < SpellCorrector::kMinLength || !is_lower_alpha(tok.surface)) continue;
    if (auto fixed = corrector.suggest(tok.surface)) tok.surface = *fixed;
  }
  return doc;
}

}  // namespace autosas
