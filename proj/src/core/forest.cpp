#include "autosas/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "autosas/error.hpp"
#include "autosas/qwk.hpp"
#include "autosas/rng.hpp"

namespace autosas {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols) throw SchemaError("ragged feature rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::select_columns(std::span<const std::size_t> keep) const {
  Matrix m(rows, keep.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < keep.size(); ++k) m.data[i * keep.size() + k] = at(i, keep[k]);
  return m;
}

double Tree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (feature[node] >= 0)
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(feature[node])] <= threshold[node] ? left[node] : right[node]);
  return value[node];
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

bool better(const Split& cand, const Split& best) {
  if (best.feature < 0) return true;
  if (cand.gain != best.gain) return cand.gain > best.gain;
  if (cand.feature != best.feature) return cand.feature < best.feature;
  return cand.threshold < best.threshold;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const ForestParams& p, std::size_t mtry)
      : x_(x), y_(y), p_(p), mtry_(mtry) {}

  Tree build(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = x_.rows;
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = rng.uniform_index(n);
    std::sort(idx.begin(), idx.end());

    Tree t;
    struct Pending {
      std::size_t node, begin, end;
      int depth;
    };
    std::vector<Pending> stack;
    t.feature.push_back(-1);
    t.threshold.push_back(0.0);
    t.value.push_back(0.0);
    t.left.push_back(-1);
    t.right.push_back(-1);
    stack.push_back({0, 0, n, 0});
    std::vector<std::size_t> perm(x_.cols);

    while (!stack.empty()) {
      const Pending cur = stack.back();
      stack.pop_back();
      const std::size_t count = cur.end - cur.begin;
      double sum = 0.0, lo = INFINITY, hi = -INFINITY;
      for (std::size_t k = cur.begin; k < cur.end; ++k) {
        const double v = y_[idx[k]];
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double mean = sum / static_cast<double>(count);
      t.value[cur.node] = mean;

      const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, p_.min_samples_leaf));
      if ((p_.max_depth >= 0 && cur.depth >= p_.max_depth) || count < 2 * min_leaf || lo == hi) continue;

      std::iota(perm.begin(), perm.end(), std::size_t{0});
      Split best;
      std::size_t examined = 0;
      for (std::size_t k = 0; k < perm.size() && examined < mtry_; ++k) {
        std::swap(perm[k], perm[k + rng.uniform_index(perm.size() - k)]);
        const std::size_t f = perm[k];
        if (evaluate(idx, cur.begin, cur.end, f, mean, min_leaf, best)) ++examined;
      }
      if (best.feature < 0) continue;

      const auto f = static_cast<std::size_t>(best.feature);
      auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(cur.begin),
                                       idx.begin() + static_cast<std::ptrdiff_t>(cur.end),
                                       [&](std::size_t r) { return x_.at(r, f) <= best.threshold; });
      const auto split_at = static_cast<std::size_t>(mid - idx.begin());

      const auto left = static_cast<std::int32_t>(t.size());
      const auto right = left + 1;
      for (int c = 0; c < 2; ++c) {
        t.feature.push_back(-1);
        t.threshold.push_back(0.0);
        t.value.push_back(0.0);
        t.left.push_back(-1);
        t.right.push_back(-1);
      }
      t.feature[cur.node] = best.feature;
      t.threshold[cur.node] = best.threshold;
      t.left[cur.node] = left;
      t.right[cur.node] = right;
      stack.push_back({static_cast<std::size_t>(right), split_at, cur.end, cur.depth + 1});
      stack.push_back({static_cast<std::size_t>(left), cur.begin, split_at, cur.depth + 1});
    }
    return t;
  }

 private:
  // Scans every threshold of feature f; returns false when f is constant in
  // the node.
  bool evaluate(const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end, std::size_t f,
                double mean, std::size_t min_leaf, Split& best) {
    pairs_.clear();
    for (std::size_t k = begin; k < end; ++k) pairs_.emplace_back(x_.at(idx[k], f), y_[idx[k]] - mean);
    std::sort(pairs_.begin(), pairs_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (pairs_.front().first == pairs_.back().first) return false;

    const std::size_t n = pairs_.size();
    double total = 0.0;
    for (const auto& pr : pairs_) total += pr.second;
    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_sum += pairs_[i].second;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < min_leaf) continue;
      if (nr < min_leaf) break;
      const double a = pairs_[i].first, b = pairs_[i + 1].first;
      if (!(a < b)) continue;
      const double right_sum = total - left_sum;
      Split cand;
      cand.feature = static_cast<int>(f);
      cand.gain = left_sum * left_sum / static_cast<double>(nl) + right_sum * right_sum / static_cast<double>(nr) -
                  total * total / static_cast<double>(n);
      double mid = a + (b - a) / 2.0;
      if (!(mid < b)) mid = a;
      cand.threshold = mid;
      if (cand.gain > 1e-12 && better(cand, best)) best = cand;
    }
    return true;
  }

  const Matrix& x_;
  std::span<const double> y_;
  const ForestParams& p_;
  std::size_t mtry_;
  std::vector<std::pair<double, double>> pairs_;
};

}  // namespace

Forest::Forest(ForestParams params, std::size_t n_features, std::vector<Tree> trees)
    : params_(params), n_features_(n_features), trees_(std::move(trees)) {
  if (trees_.empty()) throw InvalidArgument("forest has no trees");
}

Forest Forest::train(const Matrix& x, std::span<const double> y, const ForestParams& params) {
  if (x.rows == 0 || y.empty()) throw InvalidArgument("cannot train a forest on empty data");
  if (x.rows != y.size()) throw InvalidArgument("feature rows and targets differ in length");
  if (x.cols == 0) throw SchemaError("cannot train a forest without features");
  if (params.n_trees < 1) throw InvalidArgument("n_trees must be at least 1");
  for (double v : x.data)
    if (!std::isfinite(v)) throw InvalidArgument("non-finite feature value in training data");
  for (double v : y)
    if (!std::isfinite(v)) throw InvalidArgument("non-finite training target");

  std::size_t mtry = params.features_per_split > 0
                         ? static_cast<std::size_t>(params.features_per_split)
                         : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.cols))));
  mtry = std::clamp<std::size_t>(mtry, 1, x.cols);

  std::vector<Tree> trees(static_cast<std::size_t>(params.n_trees));
  std::size_t workers = params.threads > 0 ? static_cast<std::size_t>(params.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, trees.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    TreeBuilder builder(x, y, params, mtry);
    for (std::size_t t = next++; t < trees.size(); t = next++) trees[t] = builder.build(params.seed + t);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return Forest(params, x.cols, std::move(trees));
}

void Forest::check_width(std::span<const double> x) const {
  if (x.size() != n_features_)
    throw SchemaError("input has " + std::to_string(x.size()) + " features, forest expects " +
                      std::to_string(n_features_));
}

double Forest::predict(std::span<const double> x) const {
  check_width(x);
  double sum = 0.0;
  for (const Tree& t : trees_) sum += t.predict(x);
  return sum / static_cast<double>(trees_.size());
}

int round_grade(double raw, int grade_min, int grade_max) {
  const double r = std::round(raw);
  if (!(r >= grade_min)) return grade_min;
  if (r > grade_max) return grade_max;
  return static_cast<int>(r);
}

int Forest::predict_grade(std::span<const double> x, int grade_min, int grade_max) const {
  return round_grade(predict(x), grade_min, grade_max);
}

Contribution Forest::decompose(std::span<const double> x) const {
  check_width(x);
  Contribution c;
  c.per_feature.assign(n_features_, 0.0);
  double bias = 0.0, pred = 0.0;
  for (const Tree& t : trees_) {
    std::size_t node = 0;
    bias += t.value[0];
    while (t.feature[node] >= 0) {
      const auto f = static_cast<std::size_t>(t.feature[node]);
      const auto child = static_cast<std::size_t>(x[f] <= t.threshold[node] ? t.left[node] : t.right[node]);
      c.per_feature[f] += t.value[child] - t.value[node];
      node = child;
    }
    pred += t.value[node];
  }
  const double n = static_cast<double>(trees_.size());
  c.bias = bias / n;
  c.prediction = pred / n;
  for (double& v : c.per_feature) v /= n;
  return c;
}

Contribution Forest::decompose(std::span<const double> x, const FeatureSchema& schema) const {
  if (schema.size() != n_features_) throw SchemaError("schema width does not match the forest");
  Contribution c = decompose(x);
  for (std::size_t j = 0; j < n_features_; ++j) c.per_group[static_cast<std::size_t>(schema.groups[j])] += c.per_feature[j];
  return c;
}

namespace {

double grade_qwk(const Forest& forest, const Matrix& x, std::span<const int> y, int gmin, int gmax) {
  std::vector<int> pred(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) pred[i] = forest.predict_grade(x.row(i), gmin, gmax);
  return quadratic_weighted_kappa(y, pred, gmin, gmax);
}

}  // namespace

std::vector<GroupImportance> group_importance(const Forest& forest,
                                              const Matrix& x_train,
                                              std::span<const double> y_train,
                                              const Matrix& x_val,
                                              std::span<const int> y_val,
                                              const FeatureSchema& schema,
                                              ImportanceMode mode,
                                              int grade_min,
                                              int grade_max,
                                              std::uint64_t seed,
                                              int repeats) {
  if (schema.size() != forest.n_features() || x_val.cols != schema.size() || x_train.cols != schema.size())
    throw SchemaError("importance inputs do not match the schema");
  const double base = grade_qwk(forest, x_val, y_val, grade_min, grade_max);
  std::vector<GroupImportance> out;
  for (FeatureGroup g : all_groups()) {
    const auto cols = schema.members(g);
    if (cols.empty()) continue;
    GroupImportance gi{g, base, base, 0.0};
    if (mode == ImportanceMode::Permutation) {
      double acc = 0.0;
      const int reps = std::max(1, repeats);
      for (int r = 0; r < reps; ++r) {
        Rng rng(seed + static_cast<std::uint64_t>(g) * 1000003u + static_cast<std::uint64_t>(r));
        std::vector<std::size_t> order(x_val.rows);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));
        Matrix shuffled = x_val;
        for (std::size_t i = 0; i < x_val.rows; ++i)
          for (std::size_t c : cols) shuffled.data[i * x_val.cols + c] = x_val.at(order[i], c);
        acc += grade_qwk(forest, shuffled, y_val, grade_min, grade_max);
      }
      gi.qwk = acc / reps;
    } else {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < schema.size(); ++j)
        if (schema.groups[j] != g) keep.push_back(j);
      if (keep.empty()) throw SchemaError("removing group " + std::string(group_name(g)) + " leaves an empty schema");
      const Forest refit = Forest::train(x_train.select_columns(keep), y_train, forest.params());
      gi.qwk = grade_qwk(refit, x_val.select_columns(keep), y_val, grade_min, grade_max);
    }
    gi.drop = base - gi.qwk;
    out.push_back(gi);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.drop > b.drop; });
  return out;
}

}  // namespace autosas
