#include "gf3.hpp"

#include <algorithm>
#include <utility>

namespace hdsc::gf3 {

namespace {

// Lookup tables keep the elimination inner loops branch-free.
constexpr Sym kSub[3][3] = {{0, 2, 1}, {1, 0, 2}, {2, 1, 0}};
constexpr Sym kMul[3][3] = {{0, 0, 0}, {0, 1, 2}, {0, 2, 1}};

// row[from..] -= f * src[from..]
void subtract_scaled(Sym* row, const Sym* src, Sym f, std::size_t from, std::size_t cols) {
  const Sym* m = kMul[f];
  for (std::size_t c = from; c < cols; ++c) row[c] = kSub[row[c]][m[src[c]]];
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) fail(Errc::dimension_mismatch, "ragged row list");
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = canon(rows[i][j]);
  }
  return m;
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(row(a), row(a) + cols_, row(b));
}

Vec mat_vec(const Matrix& m, const Vec& x) {
  if (x.size() != m.cols()) fail(Errc::dimension_mismatch, "mat_vec: vector length != matrix cols");
  Vec out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    unsigned acc = 0;
    const Sym* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) acc += kMul[row[c]][x[c]];
    out[r] = static_cast<Sym>(acc % 3);
  }
  return out;
}

// Gaussian elimination with the first nonzero entry in column order as pivot.
std::size_t mat_rank(Matrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m.at(pivot, col) == 0) ++pivot;
    if (pivot == rows) continue;
    m.swap_rows(rank, pivot);
    if (m.at(rank, col) == 2) {
      Sym* r = m.row(rank);
      for (std::size_t c = col; c < cols; ++c) r[c] = kMul[2][r[c]];
    }
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Sym f = m.at(r, col);
      if (f) subtract_scaled(m.row(r), m.row(rank), f, col, cols);
    }
    ++rank;
  }
  return rank;
}

Vec mat_solve(const Matrix& m, const Vec& y) {
  const std::size_t n = m.rows();
  if (m.cols() != n) fail(Errc::dimension_mismatch, "mat_solve: matrix not square");
  if (y.size() != n) fail(Errc::dimension_mismatch, "mat_solve: rhs length != matrix rows");

  Matrix a = m;
  Vec x = y;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a.at(pivot, col) == 0) ++pivot;
    if (pivot == n) fail(Errc::singular_matrix, "mat_solve: matrix is singular");
    a.swap_rows(col, pivot);
    std::swap(x[col], x[pivot]);
    if (a.at(col, col) == 2) {
      Sym* r = a.row(col);
      for (std::size_t c = col; c < n; ++c) r[c] = kMul[2][r[c]];
      x[col] = kMul[2][x[col]];
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const Sym f = a.at(r, col);
      if (f) {
        subtract_scaled(a.row(r), a.row(col), f, col, n);
        x[r] = kSub[x[r]][kMul[f][x[col]]];
      }
    }
  }
  return x;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
  return t;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) fail(Errc::dimension_mismatch, "hstack: row counts differ");
  Matrix m(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m.at(r, c) = a.at(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m.at(r, a.cols() + c) = b.at(r, c);
  }
  return m;
}

}  // namespace hdsc::gf3
