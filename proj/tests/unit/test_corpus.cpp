#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "autosas/corpus.hpp"
#include "autosas/error.hpp"
#include "autosas/log.hpp"
#include "autosas/text.hpp"
#include "synthetic.hpp"

using namespace autosas;
namespace fs = std::filesystem;

namespace {

PromptTable one_prompt() {
  PromptSpec p;
  p.prompt_id = "1";
  p.question_text = "Why?";
  p.grade_min = 0;
  p.grade_max = 3;
  return {{"1", p}};
}

fs::path write_tsv(const std::string& name, const std::string& body) {
  const fs::path path = testing::scratch_dir("corpus") / name;
  std::ofstream(path, std::ios::binary) << body;
  return path;
}

const std::string kHeader = "Id\tEssaySet\tScore1\tScore2\tEssayText\n";

std::vector<Response> graded(const std::vector<int>& histogram, const std::string& prompt = "1") {
  std::vector<Response> out;
  int id = 1;
  for (int g = 0; g < static_cast<int>(histogram.size()); ++g)
    for (int i = 0; i < histogram[static_cast<std::size_t>(g)]; ++i) {
      Response r;
      r.id = std::to_string(id++);
      r.prompt_id = prompt;
      r.text = "text " + r.id;
      r.score_a = r.resolved_score = g;
      out.push_back(r);
    }
  return out;
}

// Largest-remainder allocation of one stratum over the three parts.
std::array<long, 3> oracle_alloc(long n, const SplitRatios& r) {
  const double q[3] = {r.train * n, r.validation * n, r.test * n};
  std::array<long, 3> a{};
  long used = 0;
  for (int i = 0; i < 3; ++i) used += a[i] = static_cast<long>(std::floor(q[i]));
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return q[x] - a[x] > q[y] - a[y]; });
  for (int k = 0; used < n; ++k, ++used) ++a[order[k]];
  return a;
}

std::map<std::string, int> grade_of(const std::vector<Response>& rs) {
  std::map<std::string, int> m;
  for (const auto& r : rs) m[r.id] = r.resolved_score;
  return m;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("load_asap_tsv: three rows") {
  const auto path = write_tsv("three.tsv", kHeader + "5\t1\t2\t3\tFirst answer.\n6\t1\t0\t0\tSecond.\n7\t1\t3\t2\tThird one.\n");
  const auto rs = load_asap_tsv(path, one_prompt());
  REQUIRE(rs.size() == 3);
  CHECK(rs[0].id == "5");
  CHECK(rs[1].id == "6");
  CHECK(rs[2].id == "7");
  CHECK(rs[0].resolved_score == 2);
  CHECK(rs[0].score_b == 3);
  CHECK(rs[2].origin == Origin::Original);
  CHECK(load_asap_tsv(path, one_prompt(), ScoreResolution::Max)[0].resolved_score == 3);
  CHECK(load_asap_tsv(path, one_prompt(), ScoreResolution::ScoreB)[2].resolved_score == 2);
}

TEST_CASE("load_asap_tsv: score out of range names the line") {
  const auto path = write_tsv("range.tsv", kHeader + "1\t1\t1\t1\tok\n2\t1\t4\t1\tbad\n");
  try {
    load_asap_tsv(path, one_prompt());
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
}

TEST_CASE("load_asap_tsv: malformed rows and unknown prompts") {
  CHECK_THROWS_AS(load_asap_tsv(write_tsv("cols.tsv", kHeader + "1\t1\t1\tmissing\n"), one_prompt()), FormatError);
  CHECK_THROWS_AS(load_asap_tsv(write_tsv("unk.tsv", kHeader + "1\t9\t1\t1\tx\n"), one_prompt()), FormatError);
  CHECK_THROWS_AS(load_asap_tsv(write_tsv("hdr.tsv", "Id\tText\n"), one_prompt()), FormatError);
  CHECK_THROWS_AS(load_asap_tsv("/nonexistent/file.tsv", one_prompt()), IoError);
}

TEST_CASE("load_asap_tsv: header only gives an empty list") {
  CHECK(load_asap_tsv(write_tsv("empty.tsv", kHeader), one_prompt()).empty());
}

TEST_CASE("stratified_split: per-stratum counts match largest remainder") {
  const auto rs = graded({40, 30, 20, 10});
  const SplitRatios ratios;
  const auto split = stratified_split(rs, ratios, 42);
  const auto g = grade_of(rs);
  std::array<long, 4> train{}, val{}, test{};
  for (const auto& id : split.train) ++train[static_cast<std::size_t>(g.at(id))];
  for (const auto& id : split.validation) ++val[static_cast<std::size_t>(g.at(id))];
  for (const auto& id : split.test) ++test[static_cast<std::size_t>(g.at(id))];
  CHECK(train == std::array<long, 4>{28, 21, 14, 7});
  const std::array<long, 4> hist = {40, 30, 20, 10};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto a = oracle_alloc(hist[k], ratios);
    CHECK(train[k] == a[0]);
    CHECK(val[k] == a[1]);
    CHECK(test[k] == a[2]);
  }
}

TEST_CASE("stratified_split: single stratum of ten") {
  const auto split = stratified_split(graded({0, 10}), SplitRatios{}, 1);
  CHECK(split.train.size() == 7);
  CHECK(split.validation.size() == 1);
  CHECK(split.test.size() == 2);
}

TEST_CASE("stratified_split: deterministic and disjoint") {
  const auto rs = graded({13, 7, 9, 4});
  const auto a = stratified_split(rs, SplitRatios{}, 9);
  const auto b = stratified_split(rs, SplitRatios{}, 9);
  CHECK(a.train == b.train);
  CHECK(a.validation == b.validation);
  CHECK(a.test == b.test);
  std::set<std::string> all;
  for (const auto* part : {&a.train, &a.validation, &a.test}) all.insert(part->begin(), part->end());
  CHECK(all.size() == rs.size());
  const auto c = stratified_split(rs, SplitRatios{}, 10);
  CHECK((a.test != c.test || a.train != c.train));
}

TEST_CASE("stratified_split: rejects bad ratios and mixed input") {
  CHECK_THROWS_AS(stratified_split(graded({5}), SplitRatios{0.7, 0.1, 0.1}, 1), InvalidArgument);
  auto mixed = graded({3});
  mixed.push_back(graded({1}, "2").front());
  mixed.back().id = "x";
  CHECK_THROWS_AS(stratified_split(mixed, SplitRatios{}, 1), InvalidArgument);
  auto aug = graded({3});
  aug[0].origin = Origin::ShuffledNegative;
  CHECK_THROWS_AS(stratified_split(aug, SplitRatios{}, 1), InvalidArgument);
}

TEST_CASE("augment_cross_prompt: ten negatives from nine prompts") {
  PromptSpec target = one_prompt().at("1");
  target.grade_min = 1;
  std::vector<Response> others;
  for (int p = 2; p <= 10; ++p) {
    auto rs = graded({2, 2, 2}, std::to_string(p));
    for (auto& r : rs) r.id = std::to_string(p) + "-" + r.id;
    others.insert(others.end(), rs.begin(), rs.end());
  }
  const auto neg = augment_cross_prompt(target, others, 10);
  REQUIRE(neg.size() == 10);
  for (const auto& r : neg) {
    CHECK(r.resolved_score == 1);
    CHECK(r.prompt_id == "1");
    CHECK(r.origin == Origin::CrossPromptNegative);
  }
  CHECK(augment_cross_prompt(target, others, 0).empty());
}

TEST_CASE("augment_cross_prompt: small pool warns") {
  std::vector<std::string> warnings;
  set_warning_handler([&](const std::string& m) { warnings.push_back(m); });
  const auto neg = augment_cross_prompt(one_prompt().at("1"), graded({1, 3}, "2"), 10);
  set_warning_handler({});
  CHECK(neg.size() == 4);
  CHECK(warnings.size() == 1);
}

TEST_CASE("augment_shuffled: same words, new order, lowest grade") {
  Response r;
  r.id = "9";
  r.prompt_id = "1";
  r.score_a = r.resolved_score = 3;
  for (int i = 0; i < 50; ++i) r.text += "w" + std::to_string(i) + " ";
  std::vector<Response> train = {r};
  const auto out = augment_shuffled(train, one_prompt().at("1"), 1, 4);
  REQUIRE(out.size() == 1);
  CHECK(out[0].resolved_score == 0);
  CHECK(out[0].origin == Origin::ShuffledNegative);
  auto words = [](const std::string& t) {
    std::vector<std::string> w;
    for (const auto& tok : tokenize_and_split(t).tokens) w.push_back(tok.surface);
    return w;
  };
  auto a = words(r.text), b = words(out[0].text);
  CHECK(a != b);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a == b);
  CHECK(augment_shuffled(train, one_prompt().at("1"), 0, 4).empty());
  CHECK(augment_shuffled(train, one_prompt().at("1"), 1, 4)[0].text == out[0].text);
}

TEST_CASE("prompt table: inline and file references") {
  const fs::path dir = testing::scratch_dir("prompts");
  std::ofstream(dir / "ref.txt") << "Reference text.";
  std::ofstream(dir / "p.json") << R"({"prompts": [{"id": 3, "question": "Q?", "passage": "P.",
    "grade_min": 0, "grade_max": 2, "reference_docs": ["ref.txt", {"text": "Inline."}]}]})";
  const auto t = load_prompt_table(dir / "p.json");
  REQUIRE(t.count("3"));
  CHECK(t.at("3").reference_docs == std::vector<std::string>{"Reference text.", "Inline."});
  CHECK(t.at("3").passage_text == "P.");
  std::ofstream(dir / "bad.json") << R"({"prompts": [{"id": 1, "question": "Q", "grade_min": 2, "grade_max": 2}]})";
  CHECK_THROWS_AS(load_prompt_table(dir / "bad.json"), FormatError);
}

}  // TEST_SUITE
