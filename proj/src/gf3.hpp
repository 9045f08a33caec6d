#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "errors.hpp"

// Exact arithmetic over GF(3). Symbols are 0, 1, 2 with -1 represented as 2.

namespace hdsc::gf3 {

using Sym = std::uint8_t;
using Vec = std::vector<Sym>;

inline Sym add(Sym a, Sym b) { return static_cast<Sym>((a + b) % 3); }
inline Sym sub(Sym a, Sym b) { return static_cast<Sym>((a + 3 - b) % 3); }
inline Sym mul(Sym a, Sym b) { return static_cast<Sym>((a * b) % 3); }
inline Sym neg(Sym a) { return static_cast<Sym>((3 - a) % 3); }

inline Sym inv(Sym a) {
  if (a == 0) fail(Errc::invalid_argument, "0 has no inverse in GF(3)");
  return a;  // 1*1 = 1, 2*2 = 4 = 1
}

// Normalizes any integer (including negatives) into {0,1,2}.
inline Sym canon(long long v) { return static_cast<Sym>(((v % 3) + 3) % 3); }

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Sym at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Sym& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  const Sym* row(std::size_t r) const { return data_.data() + r * cols_; }
  Sym* row(std::size_t r) { return data_.data() + r * cols_; }

  void swap_rows(std::size_t a, std::size_t b);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Sym> data_;
};

Vec mat_vec(const Matrix& m, const Vec& x);
std::size_t mat_rank(Matrix m);
Vec mat_solve(const Matrix& m, const Vec& y);
Matrix transpose(const Matrix& m);
Matrix hstack(const Matrix& a, const Matrix& b);

}  // namespace hdsc::gf3
