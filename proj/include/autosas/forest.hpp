#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "autosas/features.hpp"

namespace autosas {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  // Copy keeping only the listed columns, in the given order.
  Matrix select_columns(std::span<const std::size_t> keep) const;
};

struct ForestParams {
  int n_trees = 500;
  int max_depth = -1;  // negative: unlimited
  int min_samples_leaf = 2;
  int features_per_split = 0;  // 0: ceil(sqrt(d))
  std::uint64_t seed = 0;
  int threads = 1;  // 0: hardware concurrency
};

// Flattened tree; node 0 is the root. feature < 0 marks a leaf. Samples with
// x[feature] <= threshold go left.
struct Tree {
  std::vector<std::int32_t> feature;
  std::vector<double> threshold;
  std::vector<double> value;  // mean training target of the node
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;

  std::size_t size() const { return feature.size(); }
  double predict(std::span<const double> x) const;
};

struct Contribution {
  double bias = 0.0;
  double prediction = 0.0;
  std::vector<double> per_feature;
  std::array<double, kGroupCount> per_group{};
};

class Forest {
 public:
  Forest() = default;
  Forest(ForestParams params, std::size_t n_features, std::vector<Tree> trees);

  // Bagged CART regression. Tree t bootstraps with seed params.seed + t.
  static Forest train(const Matrix& x, std::span<const double> y, const ForestParams& params);

  double predict(std::span<const double> x) const;
  int predict_grade(std::span<const double> x, int grade_min, int grade_max) const;

  // Path attribution: every split credits (child mean - node mean) to its
  // feature; bias is the root mean. Averaged over trees.
  Contribution decompose(std::span<const double> x) const;
  Contribution decompose(std::span<const double> x, const FeatureSchema& schema) const;

  const ForestParams& params() const { return params_; }
  std::size_t n_features() const { return n_features_; }
  const std::vector<Tree>& trees() const { return trees_; }

  std::uint64_t schema_fingerprint = 0;

 private:
  void check_width(std::span<const double> x) const;

  ForestParams params_;
  std::size_t n_features_ = 0;
  std::vector<Tree> trees_;
};

// Round half away from zero, then clamp.
int round_grade(double raw, int grade_min, int grade_max);

enum class ImportanceMode { Permutation, RefitAblation };

struct GroupImportance {
  FeatureGroup group;
  double base_qwk = 0.0;
  double qwk = 0.0;
  double drop = 0.0;  // base_qwk - qwk
};

// Groups without columns are skipped. Result is sorted by drop, descending,
// ties in group order. Permutation mode shuffles the group's columns jointly
// (`repeats` times, averaged); refit mode retrains without them.
std::vector<GroupImportance> group_importance(const Forest& forest,
                                              const Matrix& x_train,
                                              std::span<const double> y_train,
                                              const Matrix& x_val,
                                              std::span<const int> y_val,
                                              const FeatureSchema& schema,
                                              ImportanceMode mode,
                                              int grade_min,
                                              int grade_max,
                                              std::uint64_t seed = 0,
                                              int repeats = 5);

}  // namespace autosas
