#pragma once

#include <cstdint>
#include <vector>

#include "gf3.hpp"

// Sylvester Hadamard matrices of order N = 2^k and the sign-diagonal
// generators X_1..X_k whose products enumerate the columns. A column is
// addressed by the exponent tuple (x_1..x_k) of prod X_i^{x_i} * w, with w
// the all-ones vector; the tuple value read with x_k as the least
// significant bit is the column position in the matrix.

namespace hdsc {

struct SignDiagonal {
  int order = 0;                  // power of two
  std::vector<std::uint8_t> neg;  // 1 where the diagonal entry is -1

  bool negative_at(int t) const { return neg[static_cast<std::size_t>(t)] != 0; }
  gf3::Sym sign(int t) const { return negative_at(t) ? gf3::Sym(2) : gf3::Sym(1); }

  void apply(gf3::Vec& v) const;
  gf3::Vec applied(gf3::Vec v) const;
  SignDiagonal composed(const SignDiagonal& other) const;
  bool is_identity() const;
};

// X_i for a code with k generators: blocks of N/2^i entries alternating
// +1/-1, repeated 2^{i-1} times. i is 1-based.
SignDiagonal generator(int i, int k);

struct ExponentTuple {
  int k = 0;
  std::uint32_t mask = 0;  // bit (k-i) holds x_i

  int bit(int i) const { return static_cast<int>((mask >> (k - i)) & 1u); }
  ExponentTuple flipped(int axis) const;
  std::uint32_t column_position() const { return mask; }
  std::vector<int> bits() const;

  static ExponentTuple from_bits(const std::vector<int>& bits);

  bool operator==(const ExponentTuple&) const = default;
};

gf3::Vec hadamard_column(const ExponentTuple& x);

struct HadamardMatrix {
  int k = 0;
  gf3::Matrix values;  // N x N, entries 1 (for +1) and 2 (for -1)

  int order() const { return 1 << k; }
  gf3::Vec column(int c) const;
};

HadamardMatrix sylvester(int k);

int column_distance(const gf3::Vec& a, const gf3::Vec& b);

// Checks H^T H = N * I over the integers, then the same identity mod 3.
bool verify_gram(const HadamardMatrix& h);

}  // namespace hdsc
