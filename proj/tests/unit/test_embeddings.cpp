#include <doctest.h>

#include <cmath>
#include <fstream>

#include "autosas/embeddings.hpp"
#include "autosas/error.hpp"
#include "autosas/rng.hpp"
#include "helpers.hpp"
#include "synthetic.hpp"

using namespace autosas;
using testing::hand_doc;

namespace {

TaggedDoc words_doc(std::vector<std::string> words) {
  std::vector<testing::HandToken> s;
  for (auto& w : words) s.push_back({w, "NN", ""});
  return hand_doc({s});
}

}  // namespace

TEST_SUITE("embeddings") {

TEST_CASE("load_vectors: small text table") {
  const auto dir = testing::scratch_dir("vectors");
  std::ofstream(dir / "v.txt") << "2 3\ncat 1 2 3\ndog 4 5 6\n";
  const auto t = load_vectors(dir / "v.txt", VectorFormat::Text);
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  REQUIRE(t.find("dog"));
  CHECK(t.find("dog")[2] == 6.0f);
  CHECK(t.find("bird") == nullptr);
}

TEST_CASE("load_vectors: short row is a dimension error") {
  const auto dir = testing::scratch_dir("vectors-bad");
  std::ofstream(dir / "v.txt") << "cat 1 2 3\ndog 4 5\n";
  CHECK_THROWS_AS(load_vectors(dir / "v.txt", VectorFormat::Text), FormatError);
}

TEST_CASE("binary and text encodings agree") {
  EmbeddingTable t(4);
  Rng rng(3);
  for (int i = 0; i < 25; ++i) {
    std::vector<float> v(4);
    for (auto& x : v) x = static_cast<float>(rng.uniform01() * 2 - 1);
    t.add("w" + std::to_string(i), v);
  }
  const auto dir = testing::scratch_dir("vectors-rt");
  save_vectors(t, dir / "v.txt", VectorFormat::Text);
  save_vectors(t, dir / "v.bin", VectorFormat::Binary);
  const auto a = load_vectors(dir / "v.txt", VectorFormat::Text);
  const auto b = load_vectors(dir / "v.bin", VectorFormat::Binary);
  REQUIRE(a.size() == t.size());
  REQUIRE(b.size() == t.size());
  for (const auto& w : t.words())
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::abs(a.find(w)[k] - b.find(w)[k]) <= 1e-6);
      CHECK(b.find(w)[k] == t.find(w)[k]);
    }
  std::ofstream trunc(dir / "t.bin", std::ios::binary);
  trunc << "3 4\nabc ";
  trunc.close();
  CHECK_THROWS_AS(load_vectors(dir / "t.bin", VectorFormat::Binary), FormatError);
}

TEST_CASE("embed_response: means and the zero vector") {
  EmbeddingTable t(2);
  const float v[2] = {1.0f, 3.0f}, w[2] = {5.0f, -1.0f};
  t.add("v", v);
  t.add("w", w);
  CHECK(embed_response(words_doc({"v"}), t, Weighting::Uniform) == std::vector<double>{1.0, 3.0});
  CHECK(embed_response(words_doc({"v", "w"}), t, Weighting::Uniform) == std::vector<double>{3.0, 1.0});
  CHECK(embed_response(words_doc({"x", "y"}), t, Weighting::Uniform) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("embed_document: idf-weighted mean") {
  EmbeddingTable t(2);
  const float a[2] = {3.0f, 0.0f}, b[2] = {0.0f, 6.0f};
  t.add("a", a);
  t.add("b", b);
  t.set_idf("a", 2.0);
  t.set_idf("b", 1.0);
  const auto doc = embed_document(words_doc({"a", "b"}), t);
  const double oracle[2] = {(2 * 3.0 + 1 * 0.0) / 3.0, (2 * 0.0 + 1 * 6.0) / 3.0};
  CHECK(doc[0] == doctest::Approx(oracle[0]).epsilon(1e-15));
  CHECK(doc[1] == doctest::Approx(oracle[1]).epsilon(1e-15));
  CHECK(embed_document(TaggedDoc{}, t) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("embed_document: equal idf matches the uniform mean") {
  EmbeddingTable t(3);
  const float a[3] = {1, 2, 3}, b[3] = {-4, 0, 7}, c[3] = {0.5f, 0.25f, 0};
  t.add("a", a);
  t.add("b", b);
  t.add("c", c);
  for (const char* w : {"a", "b", "c"}) t.set_idf(w, 1.7);
  const auto d = words_doc({"a", "b", "c", "a"});
  const auto x = embed_document(d, t);
  const auto y = embed_response(d, t, Weighting::Uniform);
  for (std::size_t k = 0; k < 3; ++k) CHECK(x[k] == doctest::Approx(y[k]).epsilon(1e-15));
}

TEST_CASE("fit_idf and the principal direction") {
  EmbeddingTable t(2);
  const float a[2] = {1, 0};
  t.add("a", a);
  t.add("b", a);
  const std::vector<TaggedDoc> docs = {words_doc({"a"}), words_doc({"a", "b"})};
  const auto idf = fit_idf(docs, t);
  CHECK(idf.at("a") == doctest::Approx(std::log(3.0 / 3.0) + 1.0));
  CHECK(idf.at("b") == doctest::Approx(std::log(3.0 / 2.0) + 1.0));
  const std::vector<std::vector<double>> rows = {{2, 2}, {-1, -1}, {3, 3.0001}};
  const auto u = principal_direction(rows);
  CHECK(std::abs(std::abs(u[0]) - std::sqrt(0.5)) < 1e-3);
}

}  // TEST_SUITE
