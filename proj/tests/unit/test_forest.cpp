#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "autosas/error.hpp"
#include "autosas/forest.hpp"
#include "autosas/rng.hpp"

using namespace autosas;

namespace {

struct Data {
  Matrix x;
  std::vector<double> y;
};

Data noisy_data(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  Data out{Matrix(n, d), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out.x.row(i)[j] = rng.uniform01();
    const auto r = out.x.row(i);
    out.y[i] = 3 * r[0] + (r[1] > 0.5 ? 1.0 : 0.0) + 0.1 * rng.uniform01();
  }
  return out;
}

FeatureSchema schema_for(std::size_t d, std::vector<FeatureGroup> groups) {
  FeatureSchema s;
  for (std::size_t j = 0; j < d; ++j) s.add("f" + std::to_string(j), groups[j]);
  return s;
}

}  // namespace

TEST_SUITE("forest") {

TEST_CASE("constant target predicts the constant") {
  Data d = noisy_data(30, 3, 1);
  std::fill(d.y.begin(), d.y.end(), 2.5);
  const auto f = Forest::train(d.x, d.y, ForestParams{.n_trees = 10});
  for (std::size_t i = 0; i < d.x.rows; ++i) CHECK(f.predict(d.x.row(i)) == 2.5);
}

TEST_CASE("depth zero single tree predicts the bootstrap mean") {
  const Data d = noisy_data(25, 2, 2);
  ForestParams p;
  p.n_trees = 1;
  p.max_depth = 0;
  const auto f = Forest::train(d.x, d.y, p);
  REQUIRE(f.trees()[0].size() == 1);
  const double root = f.trees()[0].value[0];
  for (std::size_t i = 0; i < d.x.rows; ++i) CHECK(f.predict(d.x.row(i)) == root);
  const auto c = f.decompose(d.x.row(0));
  CHECK(c.bias == root);
  for (double v : c.per_feature) CHECK(v == 0.0);
}

TEST_CASE("separable binary feature, depth one") {
  const Matrix x = Matrix::from_rows({{0, 5}, {0, 7}, {1, 6}, {1, 5}});
  const std::vector<double> y = {1, 1, 3, 3};
  ForestParams p;
  p.n_trees = 1;
  p.max_depth = 1;
  p.min_samples_leaf = 1;
  p.features_per_split = 2;
  Forest f;
  for (p.seed = 0; p.seed < 50; ++p.seed) {
    f = Forest::train(x, y, p);
    if (f.trees()[0].size() > 1) break;
  }
  REQUIRE(f.trees()[0].size() == 3);
  CHECK(f.trees()[0].feature[0] == 0);
  CHECK(f.predict(x.row(0)) == 1.0);
  CHECK(f.predict(x.row(1)) == 1.0);
  CHECK(f.predict(x.row(2)) == 3.0);
  CHECK(f.predict(x.row(3)) == 3.0);
  const auto c = f.decompose(x.row(0));
  CHECK(c.per_feature[1] == 0.0);
  CHECK(c.per_feature[0] != 0.0);
}

TEST_CASE("attribution identity on random inputs") {
  const Data d = noisy_data(150, 6, 3);
  ForestParams p;
  p.n_trees = 60;
  p.seed = 5;
  const auto f = Forest::train(d.x, d.y, p);
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform01() * 1.4 - 0.2;
    const auto c = f.decompose(x);
    const double sum = c.bias + std::accumulate(c.per_feature.begin(), c.per_feature.end(), 0.0);
    const double pred = f.predict(x);
    CHECK(std::abs(sum - pred) <= 1e-9 * std::max(1.0, std::abs(pred)));
    CHECK(c.prediction == pred);
  }
}

TEST_CASE("predictions stay within the target range") {
  const Data d = noisy_data(80, 4, 6);
  const auto f = Forest::train(d.x, d.y, ForestParams{.n_trees = 30, .seed = 1});
  const auto [lo, hi] = std::minmax_element(d.y.begin(), d.y.end());
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(4);
    for (auto& v : x) v = rng.uniform01() * 3 - 1;
    const double p = f.predict(x);
    CHECK(p >= *lo);
    CHECK(p <= *hi);
  }
}

TEST_CASE("single tree forest equals its tree, thread count is irrelevant") {
  const Data d = noisy_data(60, 5, 7);
  ForestParams p;
  p.n_trees = 1;
  const auto one = Forest::train(d.x, d.y, p);
  for (std::size_t i = 0; i < d.x.rows; ++i) CHECK(one.predict(d.x.row(i)) == one.trees()[0].predict(d.x.row(i)));
  p.n_trees = 16;
  p.threads = 1;
  const auto a = Forest::train(d.x, d.y, p);
  p.threads = 4;
  const auto b = Forest::train(d.x, d.y, p);
  for (std::size_t t = 0; t < 16; ++t) {
    CHECK(a.trees()[t].feature == b.trees()[t].feature);
    CHECK(a.trees()[t].threshold == b.trees()[t].threshold);
    CHECK(a.trees()[t].value == b.trees()[t].value);
  }
}

TEST_CASE("grade rounding") {
  CHECK(round_grade(2.5001, 0, 3) == 3);
  CHECK(round_grade(-0.4, 0, 3) == 0);
  CHECK(round_grade(1.49, 0, 3) == 1);
  CHECK(round_grade(2.5, 0, 3) == 3);
  CHECK(round_grade(7.0, 0, 3) == 3);
}

TEST_CASE("invalid training input") {
  const Data d = noisy_data(10, 2, 1);
  CHECK_THROWS_AS(Forest::train(d.x, std::vector<double>(3), ForestParams{}), InvalidArgument);
  CHECK_THROWS_AS(Forest::train(Matrix(), std::vector<double>{}, ForestParams{}), InvalidArgument);
  CHECK_THROWS_AS(Forest::train(d.x, d.y, ForestParams{.n_trees = 0}), InvalidArgument);
  const auto f = Forest::train(d.x, d.y, ForestParams{.n_trees = 2});
  CHECK_THROWS_AS(f.predict(std::vector<double>(5)), SchemaError);
}

TEST_CASE("group importance: informative group first, constant group zero") {
  Rng rng(4);
  const std::size_t n = 240;
  Matrix x(n, 4);
  std::vector<double> y(n);
  std::vector<int> grades(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int g = static_cast<int>(rng.uniform_index(4));
    x.row(i)[0] = g + 0.2 * rng.uniform01();
    x.row(i)[1] = rng.uniform01();
    x.row(i)[2] = 1.0;
    x.row(i)[3] = rng.uniform01();
    y[i] = g;
    grades[i] = g;
  }
  const auto schema = schema_for(4, {FeatureGroup::PromptOverlap, FeatureGroup::Temporal, FeatureGroup::LengthStats,
                                     FeatureGroup::LogicalOperators});
  Matrix tx(160, 4), vx(80, 4);
  std::vector<double> ty(y.begin(), y.begin() + 160);
  std::vector<int> vy(grades.begin() + 160, grades.end());
  for (std::size_t i = 0; i < 160; ++i) std::copy_n(x.row(i).begin(), 4, tx.row(i).begin());
  for (std::size_t i = 0; i < 80; ++i) std::copy_n(x.row(160 + i).begin(), 4, vx.row(i).begin());
  const auto f = Forest::train(tx, ty, ForestParams{.n_trees = 40, .seed = 3});
  for (auto mode : {ImportanceMode::Permutation, ImportanceMode::RefitAblation}) {
    const auto imp = group_importance(f, tx, ty, vx, vy, schema, mode, 0, 3, 9, 3);
    REQUIRE(imp.size() == 4);
    CHECK(imp.front().group == FeatureGroup::PromptOverlap);
    for (std::size_t k = 1; k < imp.size(); ++k) CHECK(imp[k - 1].drop >= imp[k].drop);
    for (const auto& gi : imp)
      if (gi.group == FeatureGroup::LengthStats && mode == ImportanceMode::Permutation) CHECK(gi.drop == 0.0);
  }
}

}  // TEST_SUITE
