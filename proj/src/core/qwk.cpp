#include "autosas/qwk.hpp"

#include <string>

#include "autosas/error.hpp"

namespace autosas {

SquareMatrix weight_matrix(int n) {
  if (n < 2) throw InvalidArgument("weight matrix needs at least 2 ratings, got " + std::to_string(n));
  SquareMatrix w(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  const double denom = static_cast<double>(n - 1) * static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<double>((i - j) * (i - j)) / denom;
  return w;
}

QwkMatrices qwk(std::span<const int> human, std::span<const int> model, int grade_min, int grade_max) {
  if (human.size() != model.size()) throw InvalidArgument("rater lists differ in length");
  if (human.empty()) throw InvalidArgument("rater lists are empty");
  if (grade_max <= grade_min) throw InvalidArgument("grade_max must exceed grade_min");
  QwkMatrices m;
  m.n = grade_max - grade_min + 1;
  const auto n = static_cast<std::size_t>(m.n);
  m.w = weight_matrix(m.n);
  m.o.assign(n, std::vector<double>(n, 0.0));
  m.e.assign(n, std::vector<double>(n, 0.0));
  std::vector<double> hist_h(n, 0.0), hist_m(n, 0.0);
  for (std::size_t k = 0; k < human.size(); ++k) {
    const int a = human[k], b = model[k];
    if (a < grade_min || a > grade_max || b < grade_min || b > grade_max)
      throw InvalidArgument("grade outside [" + std::to_string(grade_min) + ", " + std::to_string(grade_max) + "]");
    const auto i = static_cast<std::size_t>(a - grade_min), j = static_cast<std::size_t>(b - grade_min);
    m.o[i][j] += 1.0;
    hist_h[i] += 1.0;
    hist_m[j] += 1.0;
  }
  const double total = static_cast<double>(human.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.e[i][j] = hist_h[i] * hist_m[j] / total;
      num += m.w[i][j] * m.o[i][j];
      den += m.w[i][j] * m.e[i][j];
    }
  }
  if (den == 0.0)
    throw DegenerateRatingsError("degenerate ratings: both raters gave one identical grade to every item");
  m.kappa = 1.0 - num / den;
  return m;
}

double quadratic_weighted_kappa(std::span<const int> human, std::span<const int> model, int grade_min, int grade_max) {
  return qwk(human, model, grade_min, grade_max).kappa;
}

}  // namespace autosas
