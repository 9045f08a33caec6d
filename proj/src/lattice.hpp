#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

// Exponent lattices of repair matrices. A point is the exponent tuple of a
// generator product; shifting along axis j multiplies by X_j, which adds 1
// to coordinate j (mod delta when the generators are delta-th roots of
// identity, unbounded otherwise).

namespace hdsc::lattice {

using Point = std::vector<int>;

class LatticeSet {
 public:
  LatticeSet() = default;
  LatticeSet(int k, int delta, std::vector<std::uint64_t> packed);

  int k() const { return k_; }
  int delta() const { return delta_; }
  std::size_t size() const { return pts_.size(); }
  bool contains(const Point& p) const;
  std::vector<Point> points() const;
  const std::vector<std::uint64_t>& packed() const { return pts_; }

  bool operator==(const LatticeSet& other) const {
    return k_ == other.k_ && pts_ == other.pts_;
  }

  static std::uint64_t pack(const Point& p);
  static Point unpack(std::uint64_t v, int k);

 private:
  int k_ = 0;
  int delta_ = 0;  // 0 when no wrap modulus applies
  std::vector<std::uint64_t> pts_;  // sorted, unique
};

// All tuples with coordinate i fixed to 0 and the others ranging over
// {0..delta-1}: the exponent lattice of the repair matrix for node i.
LatticeSet repair_lattice(int i, int k, int delta);

LatticeSet shift(const LatticeSet& s, int axis, bool wrap);

std::size_t union_size(const LatticeSet& a, const LatticeSet& b);

struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  bool operator==(const Ratio&) const = default;
};

// |L union shift_j(L)| / |L| for an unwrapped shift, computed by
// enumeration and returned reduced. Equals (delta+1)/delta.
Ratio alignment_ratio(int k, int delta);

// Rank of [V_i | X_j V_i] in the wrap-around regime: 2^k when i = j,
// 2^{k-1} otherwise.
int predict_rank(int i, int j, int k);

}  // namespace hdsc::lattice
