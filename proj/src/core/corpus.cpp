#include "autosas/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "autosas/error.hpp"
#include "autosas/log.hpp"
#include "autosas/rng.hpp"
#include "autosas/text.hpp"

namespace autosas {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void strip_bom(std::string& line) {
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<long long> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    long long v = std::stoll(std::string(s), &used);
    if (used != s.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool higher_score_first(const Response& a, const Response& b) {
  if (a.resolved_score != b.resolved_score) return a.resolved_score > b.resolved_score;
  return id_less(a.id, b.id);
}

}  // namespace

std::string_view origin_name(Origin origin) {
  switch (origin) {
    case Origin::Original: return "original";
    case Origin::CrossPromptNegative: return "cross_prompt_negative";
    case Origin::ShuffledNegative: return "shuffled_negative";
  }
  return "original";
}

std::optional<ScoreResolution> parse_score_resolution(std::string_view name) {
  if (name == "score_a" || name == "score1") return ScoreResolution::ScoreA;
  if (name == "score_b" || name == "score2") return ScoreResolution::ScoreB;
  if (name == "max") return ScoreResolution::Max;
  return std::nullopt;
}

std::string_view score_resolution_name(ScoreResolution r) {
  switch (r) {
    case ScoreResolution::ScoreA: return "score_a";
    case ScoreResolution::ScoreB: return "score_b";
    case ScoreResolution::Max: return "max";
  }
  return "score_a";
}

PromptTable load_prompt_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  PromptTable table;
  try {
    for (const auto& entry : doc.at("prompts")) {
      PromptSpec spec;
      spec.prompt_id = entry.at("id").is_string() ? entry.at("id").get<std::string>()
                                                  : std::to_string(entry.at("id").get<long long>());
      if (entry.contains("question_file"))
        spec.question_text = read_file(resolve(entry.at("question_file").get<std::string>()));
      else
        spec.question_text = entry.at("question").get<std::string>();
      if (entry.contains("passage_file"))
        spec.passage_text = read_file(resolve(entry.at("passage_file").get<std::string>()));
      else if (entry.contains("passage") && !entry.at("passage").is_null())
        spec.passage_text = entry.at("passage").get<std::string>();
      spec.grade_min = entry.value("grade_min", 0);
      spec.grade_max = entry.value("grade_max", 3);
      if (spec.grade_min >= spec.grade_max)
        throw FormatError(path.string() + ": prompt " + spec.prompt_id + " has grade_min >= grade_max");
      if (entry.contains("reference_docs")) {
        for (const auto& ref : entry.at("reference_docs")) {
          if (ref.is_string())
            spec.reference_docs.push_back(read_file(resolve(ref.get<std::string>())));
          else
            spec.reference_docs.push_back(ref.at("text").get<std::string>());
        }
      }
      if (!table.emplace(spec.prompt_id, spec).second)
        throw FormatError(path.string() + ": duplicate prompt id " + spec.prompt_id);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return table;
}

std::vector<Response> load_asap_tsv(const std::filesystem::path& path,
                                    const PromptTable& prompts,
                                    ScoreResolution resolution) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + msg);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("missing header row");
  }
  ++line_no;
  chomp(line);
  strip_bom(line);
  if (line != "Id\tEssaySet\tScore1\tScore2\tEssayText")
    fail("expected header 'Id<TAB>EssaySet<TAB>Score1<TAB>Score2<TAB>EssayText'");

  std::vector<Response> out;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != 5) fail("expected 5 columns, got " + std::to_string(cols.size()));
    Response r;
    r.id = cols[0];
    r.prompt_id = cols[1];
    r.text = cols[4];
    if (r.id.empty()) fail("empty Id");
    if (!seen.insert(r.id).second) fail("duplicate Id " + r.id);
    auto prompt = prompts.find(r.prompt_id);
    if (prompt == prompts.end()) fail("unknown prompt id '" + r.prompt_id + "'");
    const int lo = prompt->second.grade_min, hi = prompt->second.grade_max;
    auto check = [&](std::string_view col, const std::string& value) -> std::optional<int> {
      if (value.empty()) return std::nullopt;
      auto v = parse_int(value);
      if (!v) fail(std::string(col) + " is not an integer: '" + value + "'");
      if (*v < lo || *v > hi)
        fail(std::string(col) + " = " + value + " outside grade range [" + std::to_string(lo) +
             ", " + std::to_string(hi) + "] of prompt " + r.prompt_id);
      return static_cast<int>(*v);
    };
    auto a = check("Score1", cols[2]);
    if (!a) fail("Score1 is missing");
    r.score_a = *a;
    r.score_b = check("Score2", cols[3]);
    switch (resolution) {
      case ScoreResolution::ScoreA:
        r.resolved_score = r.score_a;
        break;
      case ScoreResolution::ScoreB:
        if (!r.score_b) fail("Score2 is missing but score resolution is score_b");
        r.resolved_score = *r.score_b;
        break;
      case ScoreResolution::Max:
        r.resolved_score = std::max(r.score_a, r.score_b.value_or(r.score_a));
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<UnscoredResponse> load_unscored_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open responses: " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw FormatError(path.string() + ":1: missing header row");
  chomp(line);
  strip_bom(line);
  std::size_t text_col = 0;
  std::size_t width = 0;
  if (line == "Id\tEssaySet\tEssayText") {
    text_col = 2;
    width = 3;
  } else if (line == "Id\tEssaySet\tScore1\tScore2\tEssayText") {
    text_col = 4;
    width = 5;
  } else {
    throw FormatError(path.string() + ":1: expected header 'Id<TAB>EssaySet<TAB>EssayText' "
                      "or the scored five-column layout");
  }
  std::vector<UnscoredResponse> out;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    auto cols = split_tabs(line);
    if (cols.size() != width)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " columns, got " + std::to_string(cols.size()));
    out.push_back({cols[0], cols[1], cols[text_col]});
  }
  return out;
}

bool id_less(std::string_view a, std::string_view b) {
  auto na = parse_int(a), nb = parse_int(b);
  if (na && nb && *na != *nb) return *na < *nb;
  if (na && !nb) return true;
  if (!na && nb) return false;
  return a < b;
}

SplitSet stratified_split(std::span<const Response> responses, SplitRatios ratios, std::uint64_t seed) {
  const std::array<double, 3> r = {ratios.train, ratios.validation, ratios.test};
  if (std::any_of(r.begin(), r.end(), [](double v) { return !(v >= 0.0) || !std::isfinite(v); }))
    throw InvalidArgument("split ratios must be nonnegative");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9)
    throw InvalidArgument("split ratios must sum to 1");

  std::map<int, std::vector<std::string>> strata;
  std::string prompt;
  std::size_t total = 0;
  for (const Response& resp : responses) {
    if (resp.origin != Origin::Original)
      throw InvalidArgument("stratified_split accepts original responses only, got " + resp.id);
    if (total == 0) prompt = resp.prompt_id;
    else if (resp.prompt_id != prompt)
      throw InvalidArgument("stratified_split expects responses of a single prompt");
    strata[resp.resolved_score].push_back(resp.id);
    ++total;
  }

  constexpr double kSlack = 1e-9;
  auto largest_remainder = [&](std::size_t n, std::array<std::size_t, 3>& base,
                               std::array<double, 3>& frac) {
    std::size_t assigned = 0;
    for (int p = 0; p < 3; ++p) {
      const double exact = r[p] * static_cast<double>(n);
      base[p] = static_cast<std::size_t>(std::floor(exact + kSlack));
      frac[p] = std::max(0.0, exact - static_cast<double>(base[p]));
      assigned += base[p];
    }
    std::array<std::size_t, 3> alloc = base;
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++alloc[order[k % 3]];
    return alloc;
  };

  std::array<std::size_t, 3> base_total{};
  std::array<double, 3> frac_total{};
  const auto target = largest_remainder(total, base_total, frac_total);

  struct Stratum {
    std::vector<std::string> ids;
    std::array<std::size_t, 3> base{}, alloc{};
    std::array<double, 3> frac{};
  };
  std::vector<Stratum> rows;
  Rng rng(seed);
  for (auto& [grade, ids] : strata) {
    Stratum s;
    s.ids = std::move(ids);
    std::sort(s.ids.begin(), s.ids.end(), [](const auto& a, const auto& b) { return id_less(a, b); });
    rng.shuffle(std::span<std::string>(s.ids));
    s.alloc = largest_remainder(s.ids.size(), s.base, s.frac);
    rows.push_back(std::move(s));
  }

  // Move rounded-up units between parts until every part total matches its
  // target. Each step follows a shortest chain over-part -> ... -> under-part
  // where every hop shifts one stratum's extra unit to a part it may round up.
  auto part_total = [&](int p) {
    std::size_t t = 0;
    for (const auto& s : rows) t += s.alloc[p];
    return t;
  };
  for (int guard = 0; guard < 10000; ++guard) {
    int over = -1;
    for (int p = 0; p < 3 && over < 0; ++p)
      if (part_total(p) > target[p]) over = p;
    if (over < 0) break;
    std::array<int, 3> prev_part = {-1, -1, -1};
    std::array<int, 3> via = {-1, -1, -1};
    std::array<bool, 3> visited = {false, false, false};
    std::deque<int> queue = {over};
    visited[over] = true;
    int found = -1;
    while (!queue.empty() && found < 0) {
      const int p = queue.front();
      queue.pop_front();
      for (std::size_t g = 0; g < rows.size() && found < 0; ++g) {
        const Stratum& s = rows[g];
        if (s.alloc[p] <= s.base[p]) continue;
        for (int q = 0; q < 3; ++q) {
          if (visited[q] || s.alloc[q] != s.base[q] || s.frac[q] <= kSlack) continue;
          visited[q] = true;
          prev_part[q] = p;
          via[q] = static_cast<int>(g);
          if (part_total(q) < target[q]) {
            found = q;
            break;
          }
          queue.push_back(q);
        }
      }
    }
    if (found < 0) break;  // no admissible chain; totals stay as rounded
    for (int q = found; q != over; q = prev_part[q]) {
      Stratum& s = rows[static_cast<std::size_t>(via[q])];
      ++s.alloc[q];
      --s.alloc[prev_part[q]];
    }
  }

  SplitSet out;
  out.ratios = ratios;
  for (const Stratum& s : rows) {
    auto it = s.ids.begin();
    out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(s.alloc[0]));
    it += static_cast<std::ptrdiff_t>(s.alloc[0]);
    out.validation.insert(out.validation.end(), it, it + static_cast<std::ptrdiff_t>(s.alloc[1]));
    it += static_cast<std::ptrdiff_t>(s.alloc[1]);
    out.test.insert(out.test.end(), it, s.ids.end());
  }
  auto by_id = [](const std::string& a, const std::string& b) { return id_less(a, b); };
  std::sort(out.train.begin(), out.train.end(), by_id);
  std::sort(out.validation.begin(), out.validation.end(), by_id);
  std::sort(out.test.begin(), out.test.end(), by_id);
  return out;
}

std::vector<Response> augment_cross_prompt(const PromptSpec& target,
                                           std::span<const Response> other_prompts,
                                           std::size_t k) {
  std::vector<Response> pool;
  for (const Response& r : other_prompts)
    if (r.prompt_id != target.prompt_id && r.origin == Origin::Original) pool.push_back(r);
  if (k == 0) return {};
  if (pool.size() < k) {
    warn("prompt " + target.prompt_id + ": only " + std::to_string(pool.size()) +
         " responses from other prompts available for " + std::to_string(k) +
         " cross-prompt negatives");
  }
  std::sort(pool.begin(), pool.end(), higher_score_first);
  if (pool.size() > k) pool.resize(k);
  for (Response& r : pool) {
    r.id = "xp:" + r.prompt_id + ":" + r.id;
    r.prompt_id = target.prompt_id;
    r.score_a = target.grade_min;
    r.score_b.reset();
    r.resolved_score = target.grade_min;
    r.origin = Origin::CrossPromptNegative;
  }
  return pool;
}

std::vector<Response> augment_shuffled(std::span<const Response> train,
                                       const PromptSpec& prompt,
                                       std::size_t m,
                                       std::uint64_t seed) {
  struct Candidate {
    const Response* source;
    std::vector<std::string> tokens;
  };
  std::vector<Candidate> eligible;
  for (const Response& r : train) {
    if (r.origin != Origin::Original) continue;
    TaggedDoc doc = tokenize_and_split(r.text);
    std::vector<std::string> tokens;
    tokens.reserve(doc.tokens.size());
    for (auto& t : doc.tokens) tokens.push_back(std::move(t.surface));
    if (std::set<std::string>(tokens.begin(), tokens.end()).size() < 2) continue;
    eligible.push_back({&r, std::move(tokens)});
  }
  std::sort(eligible.begin(), eligible.end(),
            [](const Candidate& a, const Candidate& b) { return higher_score_first(*a.source, *b.source); });
  if (eligible.size() > m) eligible.resize(m);

  Rng rng(seed);
  std::vector<Response> out;
  out.reserve(eligible.size());
  for (Candidate& c : eligible) {
    std::vector<std::string> shuffled = c.tokens;
    do {
      rng.shuffle(std::span<std::string>(shuffled));
    } while (shuffled == c.tokens);
    Response r = *c.source;
    r.id = "sh:" + r.id;
    std::string text;
    for (const auto& t : shuffled) {
      if (!text.empty()) text += ' ';
      text += t;
    }
    r.text = std::move(text);
    r.score_a = prompt.grade_min;
    r.score_b.reset();
    r.resolved_score = prompt.grade_min;
    r.origin = Origin::ShuffledNegative;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace autosas
