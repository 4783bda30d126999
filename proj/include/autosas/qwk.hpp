#pragma once

#include <span>
#include <vector>

namespace autosas {

using SquareMatrix = std::vector<std::vector<double>>;

struct QwkMatrices {
  int n = 0;  // number of possible ratings
  SquareMatrix w;
  SquareMatrix o;  // o[i][j]: human gave i, model gave j
  SquareMatrix e;  // outer product of the two histograms, sum(e) == sum(o)
  double kappa = 0.0;
};

// w[i][j] = (i - j)^2 / (n - 1)^2. n must be at least 2.
SquareMatrix weight_matrix(int n);

// Throws DegenerateRatingsError when sum(w * e) is 0, i.e. both raters used
// one and the same grade throughout.
QwkMatrices qwk(std::span<const int> human, std::span<const int> model, int grade_min, int grade_max);

double quadratic_weighted_kappa(std::span<const int> human, std::span<const int> model, int grade_min, int grade_max);

}  // namespace autosas
