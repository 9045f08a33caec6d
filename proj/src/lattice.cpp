#include "lattice.hpp"

#include <algorithm>
#include <numeric>

namespace hdsc::lattice {

namespace {

constexpr int kMaxAxes = 8;
constexpr int kMaxCoord = 254;  // 8 bits per packed coordinate, shift headroom
constexpr std::uint64_t kMaxPoints = std::uint64_t(1) << 22;

void check_axes(int k) {
  if (k < 1 || k > kMaxAxes) fail(Errc::unsupported_k, "lattice sets support k in [1,8]");
}

}  // namespace

LatticeSet::LatticeSet(int k, int delta, std::vector<std::uint64_t> packed)
    : k_(k), delta_(delta), pts_(std::move(packed)) {
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

std::uint64_t LatticeSet::pack(const Point& p) {
  std::uint64_t v = 0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (p[s] < 0 || p[s] > kMaxCoord) fail(Errc::invalid_argument, "lattice coordinate out of range");
    v |= static_cast<std::uint64_t>(p[s]) << (8 * s);
  }
  return v;
}

Point LatticeSet::unpack(std::uint64_t v, int k) {
  Point p(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) p[s] = static_cast<int>((v >> (8 * s)) & 0xff);
  return p;
}

bool LatticeSet::contains(const Point& p) const {
  if (static_cast<int>(p.size()) != k_) return false;
  return std::binary_search(pts_.begin(), pts_.end(), pack(p));
}

std::vector<Point> LatticeSet::points() const {
  std::vector<Point> out;
  out.reserve(pts_.size());
  for (auto v : pts_) out.push_back(unpack(v, k_));
  return out;
}

LatticeSet repair_lattice(int i, int k, int delta) {
  check_axes(k);
  if (i < 1 || i > k) fail(Errc::index_out_of_range, "repair_lattice: i must be in [1,k]");
  if (delta < 2 || delta > kMaxCoord) fail(Errc::invalid_argument, "repair_lattice: delta must be in [2,254]");

  std::uint64_t count = 1;
  for (int s = 1; s < k; ++s) {
    count *= static_cast<std::uint64_t>(delta);
    if (count > kMaxPoints) fail(Errc::invalid_argument, "repair_lattice: set too large to enumerate");
  }

  std::vector<std::uint64_t> pts;
  pts.reserve(count);
  Point p(static_cast<std::size_t>(k), 0);
  // Mixed-radix counter over every axis except i.
  for (std::uint64_t n = 0; n < count; ++n) {
    std::uint64_t rem = n;
    for (int s = 0; s < k; ++s) {
      if (s == i - 1) {
        p[s] = 0;
        continue;
      }
      p[s] = static_cast<int>(rem % delta);
      rem /= delta;
    }
    pts.push_back(LatticeSet::pack(p));
  }
  return LatticeSet(k, delta, std::move(pts));
}

LatticeSet shift(const LatticeSet& s, int axis, bool wrap) {
  if (axis < 1 || axis > s.k()) fail(Errc::index_out_of_range, "shift: axis must be in [1,k]");
  if (wrap && s.delta() < 2) fail(Errc::invalid_argument, "shift: wrap requires a modulus");

  const int sh = 8 * (axis - 1);
  std::vector<std::uint64_t> pts;
  pts.reserve(s.packed().size());
  for (auto v : s.packed()) {
    int c = static_cast<int>((v >> sh) & 0xff) + 1;
    if (wrap)
      c %= s.delta();
    else if (c > 254)
      fail(Errc::invalid_argument, "shift: coordinate out of range");
    pts.push_back((v & ~(std::uint64_t(0xff) << sh)) | (static_cast<std::uint64_t>(c) << sh));
  }
  return LatticeSet(s.k(), s.delta(), std::move(pts));
}

std::size_t union_size(const LatticeSet& a, const LatticeSet& b) {
  if (a.k() != b.k()) fail(Errc::dimension_mismatch, "union_size: point dimensions differ");
  std::size_t n = 0;
  auto ia = a.packed().begin(), ib = b.packed().begin();
  while (ia != a.packed().end() || ib != b.packed().end()) {
    if (ib == b.packed().end())
      ++ia;
    else if (ia == a.packed().end())
      ++ib;
    else if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++ia;
      ++ib;
    }
    ++n;
  }
  return n;
}

Ratio alignment_ratio(int k, int delta) {
  if (k < 2) fail(Errc::invalid_argument, "alignment_ratio: needs a second axis to shift along");
  const LatticeSet base = repair_lattice(1, k, delta);
  const LatticeSet shifted = shift(base, 2, false);
  std::uint64_t num = union_size(base, shifted);
  std::uint64_t den = base.size();
  const std::uint64_t g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

int predict_rank(int i, int j, int k) {
  if (k < 1 || k > 16) fail(Errc::unsupported_k, "predict_rank: k must be in [1,16]");
  if (i < 1 || i > k || j < 1 || j > k)
    fail(Errc::index_out_of_range, "predict_rank: indices must be in [1,k]");
  return i == j ? (1 << k) : (1 << (k - 1));
}

}  // namespace hdsc::lattice
