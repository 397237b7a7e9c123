#include "logfol/linalg.hpp"

#include <cmath>

namespace logfol {

std::vector<int> rref_inplace(ExactMatrix& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot_row = -1;
    double best = -1.0;
    for (int i = row; i < rows; ++i) {
      if (m(i, col).is_zero()) continue;
      double mag = std::abs(m(i, col).approx());
      if (pivot_row < 0 || !(mag <= best)) {
        best = mag;
        pivot_row = i;
      }
    }
    if (pivot_row < 0) continue;
    if (pivot_row != row) m.row(pivot_row).swap(m.row(row));
    GaussianRational inv = inverse(m(row, col));
    for (int j = col; j < cols; ++j) m(row, j) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      GaussianRational factor = m(i, col);
      for (int j = col; j < cols; ++j) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(ExactMatrix m) { return static_cast<int>(rref_inplace(m).size()); }

ExactVector normalize_leading(ExactVector v) {
  for (int i = 0; i < v.size(); ++i) {
    if (!v(i).is_zero()) {
      GaussianRational inv = inverse(v(i));
      for (int j = i; j < v.size(); ++j) v(j) *= inv;
      break;
    }
  }
  return v;
}

std::vector<ExactVector> kernel_basis(const ExactMatrix& m) {
  ExactMatrix r = m;
  std::vector<int> pivots = rref_inplace(r);
  const int cols = static_cast<int>(m.cols());
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;

  std::vector<ExactVector> basis;
  for (int free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    ExactVector v = ExactVector::Constant(cols, GaussianRational(0));
    v(free_col) = GaussianRational(1);
    for (size_t t = 0; t < pivots.size(); ++t)
      v(pivots[t]) = -r(static_cast<int>(t), free_col);
    basis.push_back(normalize_leading(std::move(v)));
  }
  return basis;
}

std::optional<ExactVector> solve_homogeneous(const ExactMatrix& m) {
  std::vector<ExactVector> basis = kernel_basis(m);
  if (basis.empty()) return std::nullopt;
  return basis.front();
}

}  // namespace logfol
