#include "refinery/linalg.h"

#include <cstddef>
#include <stdexcept>

namespace refinery {

std::vector<int> rref(Mat& a) {
  std::vector<int> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pr = r;
    while (pr < rows && a[pr][c].is_zero()) ++pr;
    if (pr == rows) continue;
    std::swap(a[pr], a[r]);
    Rat inv = Rat(1) / a[r][c];
    for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].is_zero()) continue;
      Rat f = a[i][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

int rank(Mat a) { return static_cast<int>(rref(a).size()); }

std::optional<Vec> solve_linear(const Mat& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve_linear: shape");
  if (a.empty()) return Vec{};
  const std::size_t cols = a[0].size();
  Mat aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  std::vector<int> pivots = rref(aug);
  // Inconsistent iff a pivot lands in the augmented column.
  for (int p : pivots)
    if (p == static_cast<int>(cols)) return std::nullopt;
  Vec x(cols, Rat(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  return x;
}

std::vector<Vec> null_space(const Mat& a) {
  if (a.empty()) return {};
  const std::size_t cols = a[0].size();
  Mat m = a;
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols, Rat(0));
    v[free] = Rat(1);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[pivots[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> affine_coordinates(const std::vector<Vec>& points,
                                      const Vec& target) {
  if (points.empty()) return std::nullopt;
  const std::size_t dim = target.size();
  Mat a(dim + 1, Vec(points.size(), Rat(0)));
  Vec b(dim + 1, Rat(0));
  for (std::size_t d = 0; d < dim; ++d) {
    for (std::size_t k = 0; k < points.size(); ++k) a[d][k] = points[k][d];
    b[d] = target[d];
  }
  for (std::size_t k = 0; k < points.size(); ++k) a[dim][k] = Rat(1);
  b[dim] = Rat(1);
  return solve_linear(a, b);
}

}  // namespace refinery
