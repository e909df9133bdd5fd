#pragma once

#include <optional>
#include <vector>

#include "refinery/rational.h"

namespace refinery {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

// Reduced row echelon form in place; returns pivot column per row.
std::vector<int> rref(Mat& a);

int rank(Mat a);

// One solution of A x = b, or nullopt if inconsistent. Free variables are 0.
std::optional<Vec> solve_linear(const Mat& a, const Vec& b);

// Basis of the null space of A (columns of A = variables).
std::vector<Vec> null_space(const Mat& a);

// Coefficients c with sum(c) = 1 and sum(c_k * points[k]) = target, if the
// target lies in the affine hull of the points.
std::optional<Vec> affine_coordinates(const std::vector<Vec>& points,
                                      const Vec& target);

}  // namespace refinery
